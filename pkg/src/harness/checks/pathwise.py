"""Contact statistics collected from simulated two-sided Brownian paths."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from src.core.logging import get_logger
from src.excursions.extract import extract_generic_excursions
from src.laws.brownian import LawParams
from src.minorant.engine import (
    boundary_buffer,
    compute_minorant,
    extract_contact_set,
    recipe_window,
)
from src.paths.rng import RngStream, split
from src.paths.simulate import simulate_brownian_two_sided
from src.paths.types import BrownianWithDrift, GridPath

logger = get_logger(__name__)

POST_D_LAG = 1.0


@dataclass(frozen=True)
class PathwiseContacts:
    """Per-path contact statistics, plus every generic lifetime and final value.

    ``pre_inf`` is inf_{u<=0}(X_u − αu) and ``post_increment`` is X_{D+1} − X_D;
    the latter is NaN when D + 1 falls outside the window.
    """

    G: np.ndarray
    D: np.ndarray
    first_zeta: np.ndarray
    second_zeta: np.ndarray
    pre_inf: np.ndarray
    post_increment: np.ndarray
    lifetimes: np.ndarray
    final_values: np.ndarray
    skipped: int

    @property
    def split(self) -> np.ndarray:
        return -self.G / (self.D - self.G)


def _pre_and_post(path: GridPath, alpha: float, D: float) -> tuple[float, float]:
    origin = path.origin_index or 0
    rel_t = (np.arange(origin + 1) - origin) * path.dt
    pre_inf = float(np.min(path.values[: origin + 1] - alpha * rel_t))
    d_idx = origin + int(round(D / path.dt))
    lag_idx = d_idx + int(round(POST_D_LAG / path.dt))
    if lag_idx >= path.n:
        return pre_inf, float("nan")
    return pre_inf, float(path.values[lag_idx] - path.values[d_idx])


def collect_pathwise(
    params: LawParams,
    n_paths: int,
    rng: RngStream,
    dt: float = 1e-3,
    window: tuple[float, float] | None = None,
) -> PathwiseContacts:
    """Simulate ``n_paths`` paths and gather their contact statistics.

    Paths where G or D falls inside the boundary buffer, or with fewer than two
    generic excursions, are skipped and counted.
    """
    window = window or recipe_window(params.alpha, params.beta)
    buffer = boundary_buffer(params.alpha, params.beta)
    spec = BrownianWithDrift(beta=params.beta)
    G: list[float] = []
    D: list[float] = []
    first: list[float] = []
    second: list[float] = []
    pre: list[float] = []
    post: list[float] = []
    lifetimes: list[np.ndarray] = []
    finals: list[np.ndarray] = []
    skipped = 0
    for gen in split(rng, n_paths):
        path = simulate_brownian_two_sided(spec, window, dt, gen)
        contacts = extract_contact_set(path, compute_minorant(path, params.alpha), buffer=buffer)
        batch = extract_generic_excursions(path, contacts, buffer)
        if contacts.G is None or contacts.D is None or len(batch) < 2:
            skipped += 1
            continue
        G.append(contacts.G)
        D.append(contacts.D)
        zeta = batch.lifetimes
        first.append(float(zeta[0]))
        second.append(float(zeta[1]))
        pre_inf, post_increment = _pre_and_post(path, params.alpha, contacts.D)
        pre.append(pre_inf)
        post.append(post_increment)
        lifetimes.append(zeta)
        finals.append(batch.final_values)
    if skipped:
        logger.warning("Skipped %d of %d paths with contacts inside the buffer", skipped, n_paths)
    return PathwiseContacts(
        G=np.asarray(G),
        D=np.asarray(D),
        first_zeta=np.asarray(first),
        second_zeta=np.asarray(second),
        pre_inf=np.asarray(pre),
        post_increment=np.asarray(post),
        lifetimes=np.concatenate(lifetimes) if lifetimes else np.empty(0),
        final_values=np.concatenate(finals) if finals else np.empty(0),
        skipped=skipped,
    )
