"""
Samplers built on the path decomposition at the first positive contact D, and on
size-biasing for the excursion straddling time 0.

D splits as T′_Γ + T̃″: Γ = −E with E ~ Exp(2(α−β)) has the law of
I⁻ = inf{X_u − αu : u <= 0}; T′_Γ is the first time X_t − αt reaches Γ, an inverse
Gaussian first passage of a drift (α−β) motion to level E; T̃″ is the time of the
overall minimum of an independent drift (α+β) Brownian motion.

The straddling excursion is a generic excursion size-biased by its lifetime, cut
at an independent uniform position.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, NamedTuple

import numpy as np

from src.core.config import settings
from src.core.exceptions import (
    HorizonCapError,
    LawDomainError,
    PathError,
    PoolTooSmallError,
    StepCapExceededError,
    TruncationError,
)
from src.core.logging import get_logger
from src.core.retry import with_resample
from src.excursions.extract import Excursion, ExcursionFeatures, FeatureTable, StraddlingExcursion
from src.laws.brownian import LawParams
from src.paths.rng import RngStream, as_generator
from src.paths.types import GridPath
from src.sampler.bessel import bes3_drift_at, sample_bes3_drift
from src.sampler.excursion import (
    SampledExcursion,
    assemble_excursion,
    sample_features_direct_batch,
    sample_inverse_gaussian_hitting,
    sample_tau_gamma_batch,
)

logger = get_logger(__name__)

ArgminMethod = Literal["grid", "williams"]

# Grid steps simulated per chunk while searching for a stale running minimum
_CHUNK_STEPS = 4096


class DDecomposition(NamedTuple):
    """One draw of D with its pieces."""

    D: float
    gamma: float
    t_prime: float
    t_double: float


@dataclass(frozen=True)
class StraddlingSample:
    """Lifetime D − G, split U and features of the excursion straddling 0."""

    lifetime: float
    split: float
    G: float
    D: float
    features: ExcursionFeatures


@dataclass(frozen=True)
class StraddlingBatch:
    """Column-oriented straddling samples."""

    lifetime: np.ndarray
    split: np.ndarray
    G: np.ndarray
    D: np.ndarray
    features: FeatureTable

    def __len__(self) -> int:
        return int(self.lifetime.size)


@dataclass(frozen=True)
class SampledStraddle:
    """A straddling excursion path and the size-biased generic excursion it was cut from."""

    straddle: StraddlingExcursion
    source: SampledExcursion


def argmin_time_grid(mu: float, dt: float, gen: np.random.Generator) -> float:
    """Time of the overall minimum of a drift-μ Brownian motion, on the grid k·dt.

    The path is extended in chunks until its running minimum has not moved for
    LIPMIN_STALENESS_FACTOR / μ² time units. A later new minimum needs a drop of
    order 1/μ against a drift μ over that span, which is exponentially unlikely.

    Raises:
        HorizonCapError: if the path reaches LIPMIN_HORIZON_CAP before going stale
    """
    if not mu > 0 or not dt > 0:
        raise LawDomainError(f"need mu > 0 and dt > 0, got mu={mu}, dt={dt}")
    stale = settings.staleness_factor / (mu * mu)
    level, best_k, k, x = 0.0, 0, 0, 0.0
    sd = math.sqrt(dt)
    while (k - best_k) * dt < stale:
        if k * dt > settings.horizon_cap:
            raise HorizonCapError(
                f"running minimum still moving after the horizon cap {settings.horizon_cap}"
            )
        chunk = x + np.cumsum(mu * dt + sd * gen.standard_normal(_CHUNK_STEPS))
        j = int(np.argmin(chunk))
        if chunk[j] < level:
            level, best_k = float(chunk[j]), k + j + 1
        x = float(chunk[-1])
        k += _CHUNK_STEPS
    return best_k * dt


def argmin_time_williams(mu: float, gen: np.random.Generator) -> float:
    """Exact time of the overall minimum of a drift-μ Brownian motion.

    By Williams' decomposition it is the first passage of a drift −μ motion to an
    independent −Exp(2μ) level.
    """
    depth = float(gen.exponential(1.0 / (2 * mu)))
    return float(sample_inverse_gaussian_hitting(mu, depth, gen))


def _draw_D(
    params: LawParams, dt: float, method: ArgminMethod, gen: np.random.Generator
) -> DDecomposition:
    a, b = params.alpha, params.beta
    drop = float(gen.exponential(1.0 / (2 * (a - b))))
    t_prime = float(sample_inverse_gaussian_hitting(a - b, drop, gen))
    if method == "williams":
        t_double = argmin_time_williams(a + b, gen)
    else:
        t_double = argmin_time_grid(a + b, dt, gen)
    return DDecomposition(D=t_prime + t_double, gamma=-drop, t_prime=t_prime, t_double=t_double)


def sample_D_decomposition(
    params: LawParams,
    dt: float,
    rng: RngStream | np.random.Generator,
    method: ArgminMethod = "grid",
) -> DDecomposition:
    """Draw D = T′_Γ + T̃″ without simulating a two-sided path.

    ``method="grid"`` locates T̃″ on a grid of step dt; ``method="williams"`` draws it
    exactly and ignores dt.

    Raises:
        HorizonCapError: if the grid search for T̃″ exceeds LIPMIN_HORIZON_CAP
    """
    if method not in ("grid", "williams"):
        raise ValueError(f"unknown argmin method {method!r}")
    return _draw_D(params, dt, method, as_generator(rng))


def sample_D_decomposition_batch(
    params: LawParams,
    n: int,
    dt: float,
    rng: RngStream | np.random.Generator,
    method: ArgminMethod = "grid",
) -> np.ndarray:
    """``n`` independent draws of D."""
    gen = as_generator(rng)
    return np.array([sample_D_decomposition(params, dt, gen, method).D for _ in range(n)])


def _pool_size(n: int, pool_size: int | None) -> int:
    size = max(settings.straddle_pool_min, 10 * n) if pool_size is None else pool_size
    if size < settings.straddle_pool_min:
        raise PoolTooSmallError(
            f"size-biasing pool of {size} is below the minimum {settings.straddle_pool_min}"
        )
    return size


def sample_straddling_batch(
    params: LawParams,
    n: int,
    rng: RngStream | np.random.Generator,
    pool_size: int | None = None,
) -> StraddlingBatch:
    """``n`` straddling excursions by size-biased resampling of direct feature draws.

    The lifetime is drawn from a pool of generic lifetimes with weight proportional to
    ζ; the split U is an independent uniform and G = −U(D − G), D = (1 − U)(D − G).

    Raises:
        PoolTooSmallError: if the pool is smaller than LIPMIN_STRADDLE_POOL_MIN
    """
    gen = as_generator(rng)
    pool = sample_features_direct_batch(params, _pool_size(n, pool_size), gen)
    weights = pool.zeta / pool.zeta.sum()
    pick = gen.choice(len(pool), size=n, p=weights)
    split = gen.random(n)
    lifetime = pool.zeta[pick]
    features = FeatureTable(
        zeta=lifetime,
        L=pool.L[pick],
        zeta_minus_L=pool.zeta_minus_L[pick],
        w_zeta=pool.w_zeta[pick],
        h=pool.h[pick],
    )
    return StraddlingBatch(
        lifetime=lifetime,
        split=split,
        G=-split * lifetime,
        D=(1.0 - split) * lifetime,
        features=features,
    )


def sample_straddling_features(
    params: LawParams,
    rng: RngStream | np.random.Generator,
    pool_size: int | None = None,
) -> StraddlingSample:
    """One straddling excursion: lifetime D − G, split U and features.

    Raises:
        PoolTooSmallError: if the pool is smaller than LIPMIN_STRADDLE_POOL_MIN
    """
    batch = sample_straddling_batch(params, 1, rng, pool_size)
    f = batch.features
    return StraddlingSample(
        lifetime=float(batch.lifetime[0]),
        split=float(batch.split[0]),
        G=float(batch.G[0]),
        D=float(batch.D[0]),
        features=ExcursionFeatures(
            zeta=float(f.zeta[0]),
            L=float(f.L[0]),
            zeta_minus_L=float(f.zeta_minus_L[0]),
            w_zeta=float(f.w_zeta[0]),
            h=float(f.h[0]),
        ),
    )


@with_resample(StepCapExceededError)
def _draw_straddle(
    params: LawParams, dt: float, size: int, gen: np.random.Generator
) -> SampledStraddle:
    tau, gamma = sample_tau_gamma_batch(params, size, gen)
    hit = np.asarray(sample_inverse_gaussian_hitting(params.alpha + params.beta, gamma, gen))
    zeta = tau + hit
    i = int(gen.choice(size, p=zeta / zeta.sum()))
    source = assemble_excursion(params, float(tau[i]), float(gamma[i]), float(hit[i]), dt, gen)
    lifetime = source.lifetime
    split = float(gen.random())
    G = -split * lifetime
    values = source.path.values
    excursion = Excursion(start=G, times=np.asarray(source.path.times), values=values)
    return SampledStraddle(
        straddle=StraddlingExcursion(G=G, D=lifetime + G, excursion=excursion),
        source=source,
    )


def sample_straddling_excursion(
    params: LawParams,
    dt: float,
    rng: RngStream | np.random.Generator,
    pool_size: int | None = None,
) -> SampledStraddle:
    """A straddling excursion path, cut from a size-biased generic excursion path.

    With V the size-biased excursion and U uniform, (X_t, G <= t <= D) has the law of
    V_{t − G} − V_{−G} with G = −Uζ_V. Rebased at G, the straddling excursion is V.

    Raises:
        PoolTooSmallError: if the pool is smaller than LIPMIN_STRADDLE_POOL_MIN
        StepCapExceededError: if three draws in a row exceed the step cap
    """
    if not dt > 0:
        raise PathError(f"dt must be > 0, got {dt}")
    return _draw_straddle(params, dt, _pool_size(1, pool_size), as_generator(rng))


def sample_post_D(
    params: LawParams, horizon: float, dt: float, rng: RngStream | np.random.Generator
) -> GridPath:
    """The path (X_{D+t} − X_D) on [0, horizon], which is R_t − αt with R ~ BES(3, α+β).

    Raises:
        PathError: if dt <= 0 or horizon <= 0
    """
    bes = sample_bes3_drift(params.alpha + params.beta, horizon, dt, rng)
    return GridPath(t0=0.0, dt=dt, values=bes.values - params.alpha * bes.times)


def post_D_at(
    params: LawParams, times: np.ndarray, rng: RngStream | np.random.Generator
) -> np.ndarray:
    """X_{D+t} − X_D at arbitrary nondecreasing times t >= 0."""
    times = np.asarray(times, dtype=np.float64)
    bes = bes3_drift_at(times, params.alpha + params.beta, as_generator(rng))
    return bes - params.alpha * times


def first_crossing(times: np.ndarray, values: np.ndarray, alpha: float) -> float:
    """First t > times[0] with values <= α·t, linearly interpolated between samples.

    Raises:
        TruncationError: if the samples stay above the line
    """
    gap = values - alpha * times
    below = np.flatnonzero(gap[1:] <= 0.0)
    if below.size == 0:
        raise TruncationError("the post-D path does not meet the line t -> alpha*t")
    k = int(below[0]) + 1
    g0, g1 = float(gap[k - 1]), float(gap[k])
    frac = g0 / (g0 - g1) if g0 > g1 else 1.0
    return float(times[k - 1] + frac * (times[k] - times[k - 1]))


def first_frak_T(path: GridPath, alpha: float) -> float:
    """First t > 0 with W_t <= αt on a post-D path W, i.e. R_t = 2αt.

    Raises:
        TruncationError: if the path stays above the line on the whole grid
    """
    return first_crossing(np.asarray(path.times), path.values, alpha)


def frak_T_times(horizon: float, points: int = 50_000, t_min: float = 1e-9) -> np.ndarray:
    """0 followed by ``points`` log-spaced times in [t_min, horizon].

    The crossing time has mass of order √ε below ε, where the line 2αt is within
    distance 2αε of the origin; a uniform grid misses most of those crossings.
    """
    if not horizon > t_min:
        raise PathError(f"horizon must exceed {t_min}, got {horizon}")
    return np.concatenate([[0.0], np.geomspace(t_min, horizon, points)])


def sample_frak_T_pathwise(
    params: LawParams,
    n: int,
    horizon: float,
    rng: RngStream | np.random.Generator,
    dt: float | None = None,
) -> np.ndarray:
    """``n`` draws of the first meeting time with αt, each from its own post-D path.

    Paths are sampled on the log-spaced times of ``frak_T_times``, or on the uniform
    grid of step ``dt`` when given.

    Raises:
        TruncationError: if a path does not meet the line before ``horizon``
    """
    gen = as_generator(rng)
    if dt is not None:
        return np.array(
            [first_frak_T(sample_post_D(params, horizon, dt, gen), params.alpha) for _ in range(n)]
        )
    times = frak_T_times(horizon)
    return np.array(
        [first_crossing(times, post_D_at(params, times, gen), params.alpha) for _ in range(n)]
    )
