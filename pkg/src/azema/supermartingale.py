"""
The Azéma supermartingale Z_t = P(D > t | F_t) of the first positive contact D.

For a driftless two-sided Brownian motion and the recipe time S,

    Z_t = 1                                                  t <= S
    Z_t = exp(−2α(Y_{t−S} − inf_{s<=t−S} Y_s))               t > S

with Y_u = X_{u+S} − X_S + αu. The martingale part of Z rests on the identity

    H_t = 1 − 2α ∫_0^t H_u dB_u + 2α I_t,
    H_t = exp(−2α[(B_t + αt) − I_t]),  I_t = inf_{s<=t}(B_s + αs),

which ``ito_identity_residual`` checks with left-point Itô sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from src.core.exceptions import (
    InsufficientSamplesError,
    PathError,
    TruncationError,
    UnsupportedLawError,
)
from src.core.logging import get_logger
from src.laws.brownian import LawParams
from src.minorant.engine import recipe_indices, recipe_window
from src.paths.rng import RngStream, split
from src.paths.simulate import simulate_brownian_two_sided
from src.paths.types import BrownianWithDrift, GridPath

logger = get_logger(__name__)

# Smallest Monte Carlo size accepted for survival estimates
MIN_SURVIVAL_PATHS = 1000

# −ζ(1/2)/√(2π): expected overshoot of a Gaussian random walk's minimum over the
# continuous one, in units of σ√dt
GRID_MIN_SHIFT = 0.5825971579390106


@dataclass(frozen=True)
class AzemaPathResult:
    """Z on the grid of one path, with the recipe time S it was built from."""

    times: np.ndarray
    Z: np.ndarray
    S: float

    def at(self, t: float) -> float:
        """Z at the grid point nearest t."""
        return float(self.Z[int(np.argmin(np.abs(self.times - t)))])


@dataclass(frozen=True)
class SurvivalCurve:
    """Empirical P(D > t) with binomial standard errors."""

    t: np.ndarray
    p: np.ndarray
    se: np.ndarray
    n: int


@dataclass(frozen=True)
class AzemaSamples:
    """Per-path Z_t and 1{D > t} at fixed times, for n simulated paths."""

    t: np.ndarray
    Z: np.ndarray
    survived: np.ndarray
    S: np.ndarray
    D: np.ndarray
    below_after_s: np.ndarray

    @property
    def n(self) -> int:
        return int(self.D.size)


def _require_driftless(beta: float) -> None:
    if beta != 0.0:
        raise UnsupportedLawError("the Azema formula is only available for beta = 0")


def _gap_after(path: GridPath, alpha: float, s_idx: int) -> np.ndarray:
    """Y − inf Y after S, with Y_u = X_{S+u} − X_S + αu."""
    tail = path.values[s_idx:] - path.values[s_idx]
    y = tail + alpha * np.arange(tail.size) * path.dt
    return y - np.minimum.accumulate(y)


def _z_values(
    path: GridPath, alpha: float, s_idx: int, grid_corrected: bool = False
) -> np.ndarray:
    z = np.ones(path.n)
    gap = _gap_after(path, alpha, s_idx)
    if grid_corrected:
        gap = gap + GRID_MIN_SHIFT * math.sqrt(path.dt)
    z[s_idx:] = np.exp(-2 * alpha * gap)
    return z


def _s_index(path: GridPath, alpha: float, S: float | None) -> int:
    if S is None:
        s_idx, _ = recipe_indices(path, alpha)
    else:
        path.check_inside(S)
        s_idx = path.index_of(S)
    if s_idx >= path.n - 1:
        raise TruncationError("recipe time S sits at the right window edge")
    return s_idx


def compute_Z_D(
    path: GridPath,
    alpha: float,
    S: float | None = None,
    beta: float = 0.0,
    grid_corrected: bool = False,
) -> AzemaPathResult:
    """Z_t on every grid point of ``path``.

    S defaults to the recipe time of the path. Runs one running-minimum sweep.
    With ``grid_corrected`` the gap after S is widened by 0.5826·√dt, the mean amount by
    which the grid minimum of the future path overshoots the continuous one; Z_t is then
    the survival probability of the grid D rather than of the continuous one, and
    Z_S < 1.

    Raises:
        UnsupportedLawError: if beta != 0
        TruncationError: if S sits at the window edge
        PathError: if S lies outside the window
    """
    _require_driftless(beta)
    s_idx = _s_index(path, alpha, S)
    return AzemaPathResult(
        times=np.asarray(path.times),
        Z=_z_values(path, alpha, s_idx, grid_corrected),
        S=float(path.times[s_idx]),
    )


def azema_integrand(path: GridPath, alpha: float, S: float | None = None) -> np.ndarray:
    """A_u = 1{u >= S} exp(−2α(X_u + αu) + 2α inf_{S<=s<=u}(X_s + αs)) on the grid.

    Raises:
        TruncationError: if S sits at the window edge
    """
    s_idx = _s_index(path, alpha, S)
    a = _z_values(path, alpha, s_idx)
    a[:s_idx] = 0.0
    return a


def ito_identity_residual(path: GridPath, alpha: float) -> float:
    """max_t |H_t − (1 − 2α Σ H_u ΔB_u + 2α I_t)| for a Brownian path B starting at t = 0.

    Raises:
        PathError: if the path does not start at t = 0 with value 0
    """
    if path.t0 != 0.0 or path.values[0] != 0.0:
        raise PathError("the Ito identity needs a Brownian path started at (0, 0)")
    b = path.values
    y = b + alpha * np.arange(path.n) * path.dt
    running_inf = np.minimum.accumulate(y)
    h = np.exp(-2 * alpha * (y - running_inf))
    ito_sum = np.concatenate([[0.0], np.cumsum(h[:-1] * np.diff(b))])
    rhs = 1.0 - 2 * alpha * ito_sum + 2 * alpha * running_inf
    return float(np.max(np.abs(h - rhs)))


def ito_residuals(
    alpha: float,
    horizon: float,
    dt: float,
    n_paths: int,
    rng: RngStream | np.random.Generator,
) -> np.ndarray:
    """Residuals of the Itô identity over ``n_paths`` independent paths on [0, horizon]."""
    spec = BrownianWithDrift(beta=0.0)
    return np.array(
        [
            ito_identity_residual(simulate_brownian_two_sided(spec, (0.0, horizon), dt, g), alpha)
            for g in split(rng, n_paths)
        ]
    )


def sample_azema(
    params: LawParams,
    t_points: list[float] | np.ndarray,
    n: int,
    dt: float,
    rng: RngStream | np.random.Generator,
    window: tuple[float, float] | None = None,
    lag: float | None = None,
    grid_corrected: bool = True,
) -> AzemaSamples:
    """Z_t and 1{D > t} at ``t_points`` on n independent two-sided paths.

    D is located on the same grid, so Z is grid-corrected by default (see
    ``compute_Z_D``). ``below_after_s`` records whether the uncorrected Z_{S+lag} is below
    1, with lag one grid step by default.

    Raises:
        UnsupportedLawError: if beta != 0
        PathError: if a time in ``t_points`` lies outside ``window``
        TruncationError: if an infimum falls at or near the window edge
    """
    _require_driftless(params.beta)
    t = np.asarray(t_points, dtype=np.float64)
    window = window or recipe_window(params.alpha, params.beta)
    outside = t[(t < window[0]) | (t > window[1])]
    if outside.size:
        raise PathError(f"t={outside.tolist()} outside window [{window[0]}, {window[1]}]")
    spec = BrownianWithDrift(beta=params.beta)
    z = np.empty((n, t.size))
    s = np.empty(n)
    d = np.empty(n)
    below = np.zeros(n, dtype=bool)
    lag_steps = 1 if lag is None else max(1, int(round(lag / dt)))
    for i, gen in enumerate(split(rng, n)):
        path = simulate_brownian_two_sided(spec, window, dt, gen)
        s_idx, d_idx = recipe_indices(path, params.alpha, params.beta)
        gap = _gap_after(path, params.alpha, s_idx)
        values = _z_values(path, params.alpha, s_idx, grid_corrected)
        origin = path.origin_index or 0
        cols = [path.index_of(float(u)) for u in t]
        z[i] = values[cols]
        s[i] = (s_idx - origin) * dt
        d[i] = (d_idx - origin) * dt
        below[i] = gap[min(lag_steps, gap.size - 1)] > 0.0
    logger.debug("Evaluated Z at %d times on %d paths", t.size, n)
    return AzemaSamples(
        t=t, Z=z, survived=d[:, None] > t[None, :], S=s, D=d, below_after_s=below
    )


def survival_curve(
    params: LawParams,
    t_grid: list[float] | np.ndarray,
    n: int,
    rng: RngStream | np.random.Generator,
    dt: float = 1e-3,
    window: tuple[float, float] | None = None,
) -> SurvivalCurve:
    """Monte Carlo P(D > t) from recipe times on simulated two-sided paths.

    Raises:
        InsufficientSamplesError: if n < 1000
        TruncationError: if an infimum falls at or near the window edge
    """
    if n < MIN_SURVIVAL_PATHS:
        raise InsufficientSamplesError(f"survival estimates need n >= 1000, got {n}")
    t = np.asarray(t_grid, dtype=np.float64)
    window = window or recipe_window(params.alpha, params.beta)
    spec = BrownianWithDrift(beta=params.beta)
    d = np.empty(n)
    for i, gen in enumerate(split(rng, n)):
        path = simulate_brownian_two_sided(spec, window, dt, gen)
        _, d_idx = recipe_indices(path, params.alpha, params.beta)
        d[i] = (d_idx - (path.origin_index or 0)) * dt
    p = np.mean(d[:, None] > t[None, :], axis=0)
    return SurvivalCurve(t=t, p=p, se=np.sqrt(p * (1 - p) / n), n=n)
