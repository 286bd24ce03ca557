"""
Simulators for two-sided Lévy paths.

Both simulators glue two independent one-sided simulations at t = 0: child
stream 0 drives t >= 0 and child stream 1 drives t <= 0.
"""

from __future__ import annotations

import math

import numpy as np

from src.core.exceptions import PathError, WindowError
from src.core.logging import get_logger
from src.paths.rng import RngStream, split
from src.paths.types import BrownianWithDrift, CompoundPoissonDrift, EventPath, GridPath, Path

logger = get_logger(__name__)

# Relative slack when snapping window endpoints outward to the grid
_SNAP_SLACK = 1e-9


def _validate_window(window: tuple[float, float]) -> tuple[float, float]:
    tmin, tmax = float(window[0]), float(window[1])
    if not tmin <= 0.0 <= tmax:
        raise WindowError(f"window [{tmin}, {tmax}] must contain 0")
    return tmin, tmax


def grid_steps(length: float, dt: float) -> int:
    """Number of dt-steps covering ``length``, rounded outward."""
    return int(math.ceil(length / dt - _SNAP_SLACK)) if length > 0 else 0


def brownian_increments(
    n: int, dt: float, drift: float, sigma: float, rng: np.random.Generator
) -> np.ndarray:
    """Cumulative values of a drifted Brownian motion at dt, 2dt, ..., n*dt."""
    steps = drift * dt + sigma * math.sqrt(dt) * rng.standard_normal(n)
    return np.cumsum(steps)


def simulate_brownian_two_sided(
    spec: BrownianWithDrift,
    window: tuple[float, float],
    dt: float,
    rng: RngStream | np.random.Generator,
) -> GridPath:
    """Simulate sigma*B_t + beta*t on a grid through 0 covering ``window``.

    Window endpoints are snapped outward to the grid and the value at t = 0 is
    exactly 0. The backward half (X_{-t})_{t>=0} is an independent Brownian
    motion with drift -beta.

    Raises:
        WindowError: if the window does not contain 0
        PathError: if dt <= 0
    """
    tmin, tmax = _validate_window(window)
    if not dt > 0:
        raise PathError(f"dt must be > 0, got {dt}")

    n_left = grid_steps(-tmin, dt)
    n_right = grid_steps(tmax, dt)
    forward_rng, backward_rng = split(rng, 2)

    forward = brownian_increments(n_right, dt, spec.beta, spec.sigma, forward_rng)
    backward = brownian_increments(n_left, dt, -spec.beta, spec.sigma, backward_rng)
    values = np.concatenate([backward[::-1], [0.0], forward])

    logger.debug("Simulated Brownian path: %d steps left, %d steps right", n_left, n_right)
    return GridPath(t0=-n_left * dt, dt=dt, values=values)


def simulate_compound_poisson(
    spec: CompoundPoissonDrift,
    window: tuple[float, float],
    rng: RngStream | np.random.Generator,
) -> EventPath:
    """Simulate d*t + compound Poisson jumps exactly on ``window``.

    Breakpoints are the window endpoints, the jump times and 0. On the negative
    half, X_u = d*u - (sum of jumps in (u, 0]).

    Raises:
        WindowError: if the window does not contain 0
    """
    tmin, tmax = _validate_window(window)
    if not spec.rate > 0:
        raise PathError(f"rate must be > 0, got {spec.rate}")
    forward_rng, backward_rng = split(rng, 2)

    n_fwd = int(forward_rng.poisson(spec.rate * tmax))
    t_fwd = np.sort(forward_rng.uniform(0.0, tmax, n_fwd))
    j_fwd = spec.jump.sample(forward_rng, n_fwd)

    # tmin is 0.0 on one-sided windows, so -tmin would be -0.0
    left_span = abs(tmin)
    n_bwd = int(backward_rng.poisson(spec.rate * left_span))
    t_bwd = -np.sort(backward_rng.uniform(0.0, left_span, n_bwd))[::-1]
    j_bwd = spec.jump.sample(backward_rng, n_bwd)

    # X at negative jump times: d*v minus the jumps strictly after v and up to 0
    after = np.concatenate([np.cumsum(j_bwd[::-1])[::-1][1:], [0.0]]) if n_bwd else j_bwd
    x_bwd = spec.d * t_bwd - after
    x_fwd = spec.d * t_fwd + np.cumsum(j_fwd)

    times: list[np.ndarray] = []
    right: list[np.ndarray] = []
    jumps: list[np.ndarray] = []
    if tmin < 0:
        times.append(np.array([tmin]))
        right.append(np.array([spec.d * tmin - float(np.sum(j_bwd))]))
        jumps.append(np.zeros(1))
    times += [t_bwd, np.array([0.0]), t_fwd]
    right += [x_bwd, np.array([0.0]), x_fwd]
    jumps += [j_bwd, np.zeros(1), j_fwd]
    if tmax > 0:
        times.append(np.array([tmax]))
        right.append(np.array([spec.d * tmax + float(np.sum(j_fwd))]))
        jumps.append(np.zeros(1))

    t_all = np.concatenate(times)
    x_all = np.concatenate(right)
    j_all = np.concatenate(jumps)
    logger.debug("Simulated compound Poisson path with %d jumps", n_fwd + n_bwd)
    return EventPath(times=t_all, left=x_all - j_all, right=x_all, slope=spec.d)


def path_value_min_left(path: Path, t: float) -> float:
    """X_t ∧ X_{t-}.

    For a GridPath this is the value at the nearest grid point (continuous-path
    convention); for an EventPath it is min(left limit, value).

    Raises:
        PathError: if t lies outside the path window
    """
    if isinstance(path, GridPath):
        return float(path.values[path.index_of(t)])
    return min(path.value(t), path.left_limit(t))
