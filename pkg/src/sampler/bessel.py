"""
Brownian bridges, excursions and 3-dimensional Bessel processes.

Every construction here samples Gaussian vectors at exact (not necessarily
equally spaced) times, so paths can be evaluated at analytically sampled
hitting times without discretization error:

- a 3-d Brownian bridge from 0 to (a, 0, 0) has norm a BES(3) bridge; with a = 0 on
  [0, 1] this is the standard Brownian excursion
- the radial part of a 3-d Brownian motion with drift of magnitude μ, started at
  0, is BES(3, μ)
- a drifted Brownian motion conditioned on its first passage below a level at
  time T is, seen from the level, a BES(3) bridge run backwards; the drift
  does not enter
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.core.config import settings
from src.core.exceptions import (
    InsufficientSamplesError,
    LawDomainError,
    PathError,
    StepCapExceededError,
)
from src.core.logging import get_logger
from src.paths.rng import RngStream, as_generator
from src.paths.simulate import grid_steps
from src.paths.types import GridPath

logger = get_logger(__name__)


@dataclass(frozen=True)
class SplitPath:
    """A path built as a descent to its minimum followed by a BES(3, μ) climb."""

    path: GridPath
    minimum: float
    switch_time: float


def check_step_cap(n_steps: int) -> None:
    """Raise StepCapExceededError if a grid would exceed LIPMIN_MAX_PATH_STEPS."""
    if n_steps > settings.max_path_steps:
        raise StepCapExceededError(
            f"{n_steps} grid steps exceed the cap of {settings.max_path_steps}"
        )


def brownian_at(times: np.ndarray, rng: np.random.Generator, dim: int = 1) -> np.ndarray:
    """Standard Brownian motion in ``dim`` dimensions at nondecreasing times >= 0.

    Returns an array of shape (dim, len(times)).
    """
    times = np.asarray(times, dtype=np.float64)
    gaps = np.diff(times, prepend=0.0)
    if np.any(gaps < 0):
        raise PathError("times must be nondecreasing and nonnegative")
    steps = np.sqrt(gaps) * rng.standard_normal((dim, times.size))
    return np.cumsum(steps, axis=1)


def bes3_bridge_at(
    times: np.ndarray, span: float, end: float, rng: np.random.Generator
) -> np.ndarray:
    """BES(3) bridge from 0 at time 0 to ``end`` at time ``span``, at times in [0, span].

    The times need not be sorted; the values come back in the order given.
    """
    times = np.asarray(times, dtype=np.float64)
    order = np.argsort(times, kind="stable")
    ordered = times[order]
    w = brownian_at(np.append(ordered, span), rng, dim=3)
    frac = ordered / span
    bridge = w[:, :-1] - frac * w[:, -1:]
    bridge[0] += frac * end
    out = np.empty(times.shape)
    out[order] = np.sqrt(np.sum(bridge**2, axis=0))
    return out


def brownian_excursion_at(u: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Standard Brownian excursion on [0, 1] at the given times, exactly 0 at both ends."""
    u = np.asarray(u, dtype=np.float64)
    values = bes3_bridge_at(u, 1.0, 0.0, rng)
    values[(u <= 0.0) | (u >= 1.0)] = 0.0
    return values


def sample_brownian_excursion(
    n_steps: int, rng: RngStream | np.random.Generator
) -> GridPath:
    """Standard Brownian excursion e on the grid k / n_steps, as the norm of 3 bridges.

    Raises:
        PathError: if n_steps < 2
    """
    if n_steps < 2:
        raise PathError(f"an excursion grid needs at least 2 steps, got {n_steps}")
    check_step_cap(n_steps)
    u = np.arange(n_steps + 1) / n_steps
    return GridPath(t0=0.0, dt=1.0 / n_steps, values=brownian_excursion_at(u, as_generator(rng)))


def first_passage_segment(
    depth: float, hit_time: float, times: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Drifted Brownian motion from 0 that first reaches −depth at ``hit_time``.

    Values at ``times`` in [0, hit_time]. Seen from the level, the path is a BES(3)
    bridge from depth to 0, which is sampled reversed in time.
    """
    times = np.asarray(times, dtype=np.float64)
    if hit_time <= 0.0 or depth <= 0.0:
        return np.full(times.shape, -depth)
    back = np.clip(hit_time - times, 0.0, hit_time)
    return bes3_bridge_at(back, hit_time, depth, rng) - depth


def bes3_drift_at(times: np.ndarray, mu: float, rng: np.random.Generator) -> np.ndarray:
    """BES(3, μ) started at 0, at nondecreasing times >= 0."""
    times = np.asarray(times, dtype=np.float64)
    w = brownian_at(times, rng, dim=3)
    w[0] += mu * times
    return np.sqrt(np.sum(w**2, axis=0))


def sample_bes3_drift(
    mu: float, horizon: float, dt: float, rng: RngStream | np.random.Generator
) -> GridPath:
    """BES(3, μ) from 0 on the grid k·dt covering [0, horizon].

    R_t = |W_t + μt·e1| for a 3-d Brownian motion W.

    Raises:
        LawDomainError: if μ < 0
        PathError: if dt <= 0 or horizon <= 0
    """
    if mu < 0:
        raise LawDomainError(f"drift magnitude must be >= 0, got {mu}")
    if not dt > 0 or not horizon > 0:
        raise PathError(f"need dt > 0 and horizon > 0, got dt={dt}, horizon={horizon}")
    n = grid_steps(horizon, dt)
    check_step_cap(n)
    times = np.arange(n + 1) * dt
    return GridPath(t0=0.0, dt=dt, values=bes3_drift_at(times, mu, as_generator(rng)))


def _descend_then_climb(
    start: float,
    depth: float,
    mu: float,
    horizon: float,
    dt: float,
    gen: np.random.Generator,
) -> SplitPath:
    if not dt > 0 or not horizon > 0:
        raise PathError(f"need dt > 0 and horizon > 0, got dt={dt}, horizon={horizon}")
    n = grid_steps(horizon, dt)
    check_step_cap(n)
    # first passage of a drift −μ motion down by ``depth``
    switch = float(gen.wald(depth / mu, depth * depth)) if depth > 0 else 0.0
    times = np.arange(n + 1) * dt
    before = times < switch
    values = np.empty(n + 1)
    values[before] = start + first_passage_segment(depth, switch, times[before], gen)
    values[~before] = start - depth + bes3_drift_at(times[~before] - switch, mu, gen)
    return SplitPath(
        path=GridPath(t0=0.0, dt=dt, values=values),
        minimum=start - depth,
        switch_time=switch,
    )


def sample_williams_path(
    mu: float, horizon: float, dt: float, rng: RngStream | np.random.Generator
) -> SplitPath:
    """Brownian motion with drift μ > 0 from 0, built by Williams' decomposition.

    A drift −μ Brownian motion runs down to −γ with γ ~ Exp(2μ), then −γ + BES(3, μ)
    takes over. The global minimum −γ is attained at the switch time.

    Raises:
        LawDomainError: if μ <= 0
    """
    if not mu > 0:
        raise LawDomainError(f"mu must be > 0, got {mu}")
    gen = as_generator(rng)
    gamma = float(gen.exponential(1.0 / (2 * mu)))
    return _descend_then_climb(0.0, gamma, mu, horizon, dt, gen)


def sample_minimum_level(b: float, mu: float, gen: np.random.Generator) -> float:
    """Draw g on [0, b] with density proportional to e^{2μx}."""
    return math.log1p(gen.random() * math.expm1(2 * mu * b)) / (2 * mu)


def bessel_minimum_mean(b: float, mu: float) -> float:
    """Mean of the density proportional to e^{2μx} on [0, b]."""
    return b / -math.expm1(-2 * mu * b) - 1 / (2 * mu)


def sample_bessel_from_min(
    b: float,
    mu: float,
    dt: float,
    rng: RngStream | np.random.Generator,
    horizon: float = 1.0,
) -> SplitPath:
    """BES(3, μ) started at b > 0, decomposed at its overall minimum g.

    A drift −μ Brownian motion runs from b down to g, then g + BES(3, μ) takes over.

    Raises:
        LawDomainError: if b <= 0 or μ <= 0
    """
    if not b > 0 or not mu > 0:
        raise LawDomainError(f"need b > 0 and mu > 0, got b={b}, mu={mu}")
    gen = as_generator(rng)
    g = sample_minimum_level(b, mu, gen)
    return _descend_then_climb(b, b - g, mu, horizon, dt, gen)


def sample_conditioned_bm_marginal(
    b: float,
    mu: float,
    t: float,
    dt: float,
    size: int,
    rng: RngStream | np.random.Generator,
    max_batches: int = 1000,
) -> np.ndarray:
    """X_t for a drift-μ Brownian motion from b conditioned never to hit 0, by rejection.

    Each grid path is accepted with the probability that no Brownian bridge between
    consecutive grid values crosses 0, times the probability 1 − e^{−2μ X_t} of
    never hitting 0 after t. The accepted values are exact draws of BES(3, μ) from b.

    Raises:
        LawDomainError: if b <= 0 or μ <= 0
        InsufficientSamplesError: if ``size`` draws are not accepted within max_batches
    """
    if not b > 0 or not mu > 0:
        raise LawDomainError(f"need b > 0 and mu > 0, got b={b}, mu={mu}")
    gen = as_generator(rng)
    n = max(grid_steps(t, dt), 1)
    h = t / n
    batch = max(size, 256)
    accepted: list[np.ndarray] = []
    count = 0
    for _ in range(max_batches):
        x = b + np.cumsum(mu * h + math.sqrt(h) * gen.standard_normal((batch, n)), axis=1)
        prev = np.concatenate([np.full((batch, 1), b), x[:, :-1]], axis=1)
        alive = np.all(x > 0, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            log_keep = np.sum(np.log(-np.expm1(-2 * prev * np.clip(x, 0, None) / h)), axis=1)
            weight = np.where(alive, np.exp(log_keep) * -np.expm1(-2 * mu * x[:, -1]), 0.0)
        take = gen.random(batch) < weight
        accepted.append(x[take, -1])
        count += int(take.sum())
        if count >= size:
            return np.concatenate(accepted)[:size]
    raise InsufficientSamplesError(
        f"only {count} of {size} conditioned paths accepted in {max_batches} batches"
    )
