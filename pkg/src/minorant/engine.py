"""
α-Lipschitz minorant, contact set and recipe times.

The minorant is the infimal convolution m(t) = inf_s f(s) + α|t − s| of the
path's lower envelope f = X ∧ X_- with α|·|. It is computed with two
exclusive cumulative-minimum sweeps:

    g_k = α t_k + min_{j<k} (f_j − α t_j)        (forward)
    h_k = min_{j>k} (f_j + α t_j) − α t_k        (backward)
    m_k = min(f_k, g_k, h_k)

Times t_k are measured from the first grid point or breakpoint, so shifting a
path in time does not change its minorant values. Floating-point rounding is
monotone, so min_j fl(a_j + c) = fl(min_j a_j + c) and the sweeps agree bit for
bit with ``brute_force_minorant``, which evaluates every pair in the same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import (
    ExistenceUndecidableError,
    InvalidContactPairError,
    TruncationError,
    WindowError,
    WindowTooSmallError,
)
from src.core.logging import get_logger, safe_repr
from src.laws.brownian import LawParams, mean_features
from src.paths.types import (
    BrownianWithDrift,
    CompoundPoissonDrift,
    EventPath,
    GridPath,
    Path,
)

logger = get_logger(__name__)

@dataclass(frozen=True)
class MinorantResult:
    """Minorant values on the path's grid points or breakpoints."""

    alpha: float
    times: np.ndarray
    values: np.ndarray
    contacts: np.ndarray

    def to_dict(self) -> dict[str, object]:
        return {
            "alpha": self.alpha,
            "minorant": self.values.tolist(),
            "contacts": self.contacts.tolist(),
        }


@dataclass(frozen=True)
class ContactTimes:
    """Contact points of a path with its minorant, located relative to t = 0."""

    indices: np.ndarray
    times: np.ndarray
    G: float | None
    D: float | None
    tol: float
    S: float | None = None

    @property
    def count(self) -> int:
        return int(self.indices.size)


class RecipeTimes(NamedTuple):
    """Recipe stopping time S and the first positive contact D."""

    S: float
    D: float


@dataclass(frozen=True)
class Sawtooth:
    """Tent-shaped minorant between two consecutive contact points."""

    t_left: float
    v_left: float
    t_right: float
    v_right: float
    alpha: float
    t_star: float
    peak: float

    def __call__(self, t: float | np.ndarray) -> float | np.ndarray:
        rise = self.v_left + self.alpha * (np.asarray(t) - self.t_left)
        fall = self.v_right + self.alpha * (self.t_right - np.asarray(t))
        out = np.minimum(rise, fall)
        return float(out) if out.ndim == 0 else out


def _require_alpha(alpha: float) -> None:
    if not alpha > 0:
        raise ValueError(f"alpha must be > 0, got {alpha}")


def _relative_times(path: Path) -> np.ndarray:
    if isinstance(path, GridPath):
        return np.arange(path.n) * path.dt
    return path.times - path.times[0]


def check_existence(spec: BrownianWithDrift | CompoundPoissonDrift, alpha: float) -> bool:
    """True iff the α-Lipschitz minorant exists, i.e. |E X_1| < α.

    Raises:
        ExistenceUndecidableError: if the jump law has no finite mean
    """
    _require_alpha(alpha)
    mean = spec.mean()
    if mean is None:
        raise ExistenceUndecidableError(
            f"jump law '{spec.jump.name}' has no finite mean"  # type: ignore[union-attr]
        )
    return abs(mean) < alpha


def compute_minorant(path: Path, alpha: float) -> MinorantResult:
    """Compute the α-Lipschitz minorant of ``path`` on its window."""
    _require_alpha(alpha)
    f = path.min_left_values()
    t = _relative_times(path)

    fwd = np.minimum.accumulate(f - alpha * t)
    g = np.full_like(f, np.inf)
    g[1:] = fwd[:-1] + alpha * t[1:]

    bwd = np.minimum.accumulate((f + alpha * t)[::-1])[::-1]
    h = np.full_like(f, np.inf)
    h[:-1] = bwd[1:] - alpha * t[:-1]

    m = np.minimum(f, np.minimum(g, h))
    contacts = np.flatnonzero(m == f)
    logger.debug("Minorant on %d points, exact contacts %s", f.size, safe_repr(contacts))
    return MinorantResult(alpha=alpha, times=np.asarray(path.times), values=m, contacts=contacts)


def brute_force_minorant(path: Path, alpha: float) -> np.ndarray:
    """O(n²) infimal convolution with the same summation order as the sweeps."""
    _require_alpha(alpha)
    f = path.min_left_values()
    t = _relative_times(path)
    down = f - alpha * t
    up = f + alpha * t
    out = np.empty_like(f)
    for k in range(f.size):
        left = down[:k] + alpha * t[k]
        right = up[k + 1 :] - alpha * t[k]
        out[k] = min(f[k], left.min(initial=np.inf), right.min(initial=np.inf))
    return out


def minorant_at(path: Path, alpha: float, t: float) -> float:
    """Exact minorant value at an arbitrary time inside the window.

    m(t) = min(X_t ∧ X_{t-}, min_i (f_i + α|t − t_i|)); for event paths this is
    exact between breakpoints because the path is affine there.
    """
    _require_alpha(alpha)
    path.check_inside(t)
    best = float(np.min(path.min_left_values() + alpha * np.abs(t - path.times)))
    if isinstance(path, EventPath):
        best = min(best, path.value(t), path.left_limit(t))
    return best


def contact_tolerance(path: Path) -> float:
    """Default contact tolerance for ``path``.

    LIPMIN_CONTACT_REL_TOL times the path's value scale on grid paths, 0 on event
    paths. The discrete minorant equals the grid value at every contact, so the
    tolerance only absorbs rounding.
    """
    if isinstance(path, EventPath):
        return 0.0
    scale = max(1.0, float(np.max(np.abs(path.values))))
    return settings.contact_rel_tol * scale


def boundary_buffer(alpha: float, beta: float = 0.0) -> float:
    """Width of the edge band discarded by downstream consumers."""
    return settings.boundary_buffer * mean_features(LawParams(alpha=alpha, beta=beta)).zeta


def extract_contact_set(
    path: Path,
    minorant: MinorantResult,
    tol: float | None = None,
    buffer: float = 0.0,
) -> ContactTimes:
    """Locate contact points and the contacts G <= 0 < D.

    A point is a contact when (X ∧ X_-) − m <= tol. G and D are reported only if
    they lie at least ``buffer`` inside the window; otherwise they are None.

    Raises:
        WindowTooSmallError: if no contact point lies in the window
    """
    f = path.min_left_values()
    if f.shape != minorant.values.shape:
        raise WindowError("minorant was computed on a different grid")
    if tol is None:
        tol = contact_tolerance(path)
    gap = f - minorant.values
    indices = np.flatnonzero(gap <= tol)
    if indices.size == 0:
        raise WindowTooSmallError("no contact point inside the window")

    times = np.asarray(path.times)[indices]
    tmin, tmax = float(path.times[0]), float(path.times[-1])
    # Grid times carry rounding, so the origin is identified by index
    origin = path.origin_index if isinstance(path, GridPath) else None
    if origin is not None:
        times = np.where(indices == origin, 0.0, times)
        nonpositive = indices <= origin
    else:
        nonpositive = times <= 0.0
    G = float(times[nonpositive][-1]) if nonpositive.any() else None
    D = float(times[~nonpositive][0]) if (~nonpositive).any() else None
    if G is not None and G < tmin + buffer:
        G = None
    if D is not None and D > tmax - buffer:
        D = None
    logger.debug("Found %d contacts, G=%s, D=%s", indices.size, G, D)
    return ContactTimes(indices=indices, times=times, G=G, D=D, tol=tol)


def _guard_time(alpha: float, beta: float, guard: float | None) -> float:
    factor = settings.truncation_guard if guard is None else guard
    return factor * mean_features(LawParams(alpha=alpha, beta=beta)).zeta


def recipe_window(alpha: float, beta: float = 0.0, span: float = 30.0) -> tuple[float, float]:
    """Simulation window for locating D: ``span`` mean excursion lengths on each side of
    0, plus the truncation guard on the left."""
    mean_zeta = mean_features(LawParams(alpha=alpha, beta=beta)).zeta
    return (-(settings.truncation_guard + span) * mean_zeta, span * mean_zeta)


def _grid_recipe(path: GridPath, alpha: float, guard_time: float) -> tuple[int, int]:
    origin = path.origin_index
    if origin is None:
        raise WindowError("window must contain 0")
    f = path.values
    u = (np.arange(path.n) - origin) * path.dt

    left = f[: origin + 1] - alpha * u[: origin + 1]
    j_star = int(np.argmin(left))
    i_minus = left[j_star]
    if j_star == 0 or j_star * path.dt <= guard_time:
        raise TruncationError(
            f"left infimum attained at t={u[j_star]:.6g}, "
            f"within {guard_time:.6g} of the window edge"
        )

    below = np.flatnonzero(f[origin + 1 :] - alpha * u[origin + 1 :] <= i_minus)
    if below.size == 0:
        raise TruncationError("recipe time S not reached inside the window")
    s_idx = origin + 1 + int(below[0])

    # np.argmin returns the first occurrence, which is the infimum time on ties
    d_idx = s_idx + int(np.argmin(f[s_idx:] + alpha * u[s_idx:]))
    if d_idx == path.n - 1:
        raise TruncationError("right infimum attained at the window edge")
    return s_idx, d_idx


def _event_recipe(path: EventPath, alpha: float, guard_time: float) -> RecipeTimes:
    times = path.times
    m_env = path.min_left_values()
    d = path.slope
    origin = int(np.searchsorted(times, 0.0))
    if origin >= times.size or times[origin] != 0.0:
        raise WindowError("event path must have a breakpoint at 0")

    left = m_env[: origin + 1] - alpha * times[: origin + 1]
    j_star = int(np.argmin(left))
    i_minus = float(left[j_star])
    if origin > 0 and (j_star == 0 or times[j_star] - times[0] <= guard_time):
        raise TruncationError("left infimum attained at the window edge")

    S: float | None = None
    for i in range(origin, times.size):
        if i > origin and m_env[i] - alpha * times[i] <= i_minus:
            S = float(times[i])
            break
        if i + 1 < times.size and d < alpha:
            # inside (t_i, t_{i+1}) the path minus αt is affine with slope d − α
            start = path.right[i] - alpha * times[i]
            cross = times[i] + (start - i_minus) / (alpha - d)
            if times[i] < cross < times[i + 1] or (cross == times[i] and i == origin):
                S = float(cross)
                break
    if S is None:
        raise TruncationError("recipe time S not reached inside the window")

    after = np.flatnonzero(times > S)
    cand_t = np.concatenate([[S], times[after]])
    s_value = min(path.value(S), path.left_limit(S))
    cand_v = np.concatenate([[s_value + alpha * S], m_env[after] + alpha * times[after]])
    k = int(np.argmin(cand_v))
    if after.size and k == cand_v.size - 1:
        raise TruncationError("right infimum attained at the window edge")
    return RecipeTimes(S=S, D=float(cand_t[k]))


def recipe_times(
    path: Path,
    alpha: float,
    beta: float = 0.0,
    guard: float | None = None,
) -> RecipeTimes:
    """Recipe times S and D.

    S = inf{t > 0 : X_t ∧ X_{t-} − αt <= inf_{u<=0}(X_u − αu)} and D is the
    smallest time u >= S attaining inf_{u>=S}(X_u ∧ X_{u-} + αu). For grid paths the
    left infimum must be attained more than ``guard`` mean excursion lengths
    (default LIPMIN_TRUNCATION_GUARD, with lengths computed from (alpha, beta))
    inside the window; event paths only require it away from the window edge.

    Raises:
        TruncationError: if an infimum is attained at or too near the window edge
        WindowError: if the window does not contain 0
    """
    _require_alpha(alpha)
    if isinstance(path, GridPath):
        s_idx, d_idx = _grid_recipe(path, alpha, _guard_time(alpha, beta, guard))
        return RecipeTimes(S=float(path.times[s_idx]), D=float(path.times[d_idx]))
    return _event_recipe(path, alpha, 0.0 if guard is None else guard)


def recipe_indices(
    path: GridPath, alpha: float, beta: float = 0.0, guard: float | None = None
) -> tuple[int, int]:
    """Grid indices of the recipe times (S, D)."""
    _require_alpha(alpha)
    return _grid_recipe(path, alpha, _guard_time(alpha, beta, guard))


def sawtooth_segment(
    t_left: float, v_left: float, t_right: float, v_right: float, alpha: float
) -> Sawtooth:
    """Minorant between two consecutive contacts.

    It rises at slope α from (t_left, v_left) to the apex
    t* = (v_right − v_left + α(t_right + t_left)) / (2α), then falls at slope −α
    into (t_right, v_right).

    Raises:
        InvalidContactPairError: if |v_right − v_left| > α(t_right − t_left)
    """
    _require_alpha(alpha)
    if not t_left < t_right:
        raise InvalidContactPairError(f"need t_left < t_right, got {t_left} >= {t_right}")
    span = alpha * (t_right - t_left)
    slack = 1e-12 * max(1.0, abs(v_left), abs(v_right), span)
    if abs(v_right - v_left) > span + slack:
        raise InvalidContactPairError(
            f"|{v_right} - {v_left}| exceeds alpha * {t_right - t_left}"
        )
    t_star = (v_right - v_left + alpha * (t_right + t_left)) / (2 * alpha)
    t_star = min(max(t_star, t_left), t_right)
    peak = v_left + alpha * (t_star - t_left)
    return Sawtooth(
        t_left=t_left,
        v_left=v_left,
        t_right=t_right,
        v_right=v_right,
        alpha=alpha,
        t_star=t_star,
        peak=peak,
    )
