"""
Direct samplers for generic Brownian excursions away from the contact set.

A generic excursion of X_t = B_t + βt is assembled from independent pieces:
(τ, γ̂) with joint density exp(−(α−β)²t/2 − 2(α+β)x) / √(2πt³) on 0 <= x <= 2αt,
a standard Brownian excursion e, and a drift −(α+β) Brownian motion B̃ run until
it first hits −γ̂ at time T̃. With

    𝔈_t = √τ e(t/τ) + 2αt            on [0, τ]
    𝔈_t = 2ατ + B̃_{t−τ}             on [τ, τ + T̃]

the excursion is 𝔈_t − αt, and its features follow from (τ, γ̂, T̃) alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from src.core.exceptions import CorruptExcursionError, LawDomainError, StepCapExceededError
from src.core.logging import get_logger
from src.core.retry import with_resample
from src.excursions.extract import Excursion, ExcursionFeatures, FeatureTable, excursion_features
from src.laws.brownian import LawParams, frak_T_cdf
from src.paths.rng import RngStream, as_generator
from src.paths.simulate import grid_steps
from src.paths.types import GridPath
from src.sampler.bessel import brownian_excursion_at, check_step_cap, first_passage_segment

logger = get_logger(__name__)

# Smallest uniform fed to the τ inverse CDF; keeps τ > 0
_U_FLOOR = 1e-300


class Provenance(str, Enum):
    """Where an excursion came from."""

    PATHWISE = "pathwise"
    DIRECT = "direct"


@dataclass(frozen=True)
class TauGammaSample:
    """The split point τ and drop γ̂ of one generic excursion."""

    tau: float
    gamma_hat: float

    def __post_init__(self) -> None:
        if not self.tau > 0:
            raise LawDomainError(f"tau must be > 0, got {self.tau}")
        if not self.gamma_hat >= 0.0:
            raise LawDomainError(f"gamma_hat must be >= 0, got {self.gamma_hat}")


@dataclass(frozen=True)
class SampledExcursion:
    """An excursion path on [0, ζ] together with its features."""

    path: GridPath
    features: ExcursionFeatures
    provenance: Provenance
    tau_gamma: TauGammaSample | None = None
    hitting_time: float | None = None

    @property
    def lifetime(self) -> float:
        return self.features.zeta


def _draw_tau(params: LawParams, size: int, gen: np.random.Generator) -> np.ndarray:
    u = np.maximum(1.0 - gen.random(size), _U_FLOOR)
    return frak_T_cdf(params).ppf(u)


def _draw_gamma(params: LawParams, tau: np.ndarray, gen: np.random.Generator) -> np.ndarray:
    # inverse CDF of Exp(rate) truncated to [0, 2ατ]
    rate = 2 * (params.alpha + params.beta)
    upper = 2 * params.alpha * tau
    u = gen.random(tau.shape)
    gamma = -np.log1p(u * np.expm1(-rate * upper)) / rate
    return np.clip(gamma, 0.0, upper)


def sample_tau_gamma_batch(
    params: LawParams, size: int, rng: RngStream | np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """``size`` independent draws of (τ, γ̂) as two arrays."""
    gen = as_generator(rng)
    tau = _draw_tau(params, size, gen)
    return tau, _draw_gamma(params, tau, gen)


def sample_tau_gamma(params: LawParams, rng: RngStream | np.random.Generator) -> TauGammaSample:
    """One draw of (τ, γ̂).

    τ is drawn by numerically inverting the tabulated CDF of its density and γ̂ given τ
    by the analytic inverse CDF of the truncated exponential.
    """
    tau, gamma = sample_tau_gamma_batch(params, 1, rng)
    return TauGammaSample(tau=float(tau[0]), gamma_hat=float(gamma[0]))


def sample_inverse_gaussian_hitting(
    mu: float,
    y: float | np.ndarray,
    rng: RngStream | np.random.Generator,
    size: int | None = None,
) -> float | np.ndarray:
    """First passage time of a drift-μ Brownian motion from 0 to level y.

    Inverse Gaussian with mean y/μ and shape y², drawn without path simulation. y may
    be an array; levels equal to 0 give time 0.

    Raises:
        LawDomainError: if μ <= 0 or any y < 0
    """
    if not mu > 0:
        raise LawDomainError(f"mu must be > 0, got {mu}")
    levels = np.asarray(y, dtype=np.float64)
    if np.any(levels < 0):
        raise LawDomainError("hitting levels must be >= 0")
    gen = as_generator(rng)
    if size is not None:
        levels = np.broadcast_to(levels, (size,))
    out = np.zeros(levels.shape)
    positive = levels > 0
    if np.any(positive):
        lv = levels[positive]
        out[positive] = gen.wald(lv / mu, lv * lv)
    if out.ndim == 0:
        return float(out)
    return out


def features_from_split(
    params: LawParams,
    tau: np.ndarray,
    gamma: np.ndarray,
    hit: np.ndarray,
    chi3: np.ndarray,
) -> FeatureTable:
    """Features of excursions with the given (τ, γ̂, T̃) and χ₃ draws.

    H = √(L(1 − L/τ))·χ₃, the gap √τ·e(L/τ) with e(u) distributed as √(u(1−u))·χ₃.
    """
    a = params.alpha
    L = tau - gamma / (2 * a)
    split = np.clip(gamma / (2 * a * tau), 0.0, 1.0)
    return FeatureTable(
        zeta=tau + hit,
        L=L,
        zeta_minus_L=hit + gamma / (2 * a),
        w_zeta=a * tau - a * hit - gamma,
        h=np.sqrt(np.clip(L, 0.0, None) * split) * chi3,
    )


def sample_features_direct_batch(
    params: LawParams, n: int, rng: RngStream | np.random.Generator
) -> FeatureTable:
    """``n`` independent generic-excursion feature rows, without building paths."""
    gen = as_generator(rng)
    tau, gamma = sample_tau_gamma_batch(params, n, gen)
    hit = np.asarray(sample_inverse_gaussian_hitting(params.alpha + params.beta, gamma, gen))
    chi3 = np.sqrt(gen.chisquare(3, n))
    table = features_from_split(params, tau, gamma, hit, chi3)
    logger.debug("Sampled %d direct feature rows for %s", n, params)
    return table


def sample_features_direct(
    params: LawParams, rng: RngStream | np.random.Generator
) -> ExcursionFeatures:
    """Features (ζ, L, ζ − L, W_ζ, H) of one generic excursion, without a path."""
    table = sample_features_direct_batch(params, 1, rng)
    return ExcursionFeatures(
        zeta=float(table.zeta[0]),
        L=float(table.L[0]),
        zeta_minus_L=float(table.zeta_minus_L[0]),
        w_zeta=float(table.w_zeta[0]),
        h=float(table.h[0]),
    )


def assemble_excursion(
    params: LawParams,
    tau: float,
    gamma: float,
    hit: float,
    dt: float,
    gen: np.random.Generator,
) -> SampledExcursion:
    """Build the path of 𝔈_t − αt for given (τ, γ̂, T̃).

    The grid has n = ⌈ζ/dt⌉ equal steps ending exactly at ζ. The Brownian excursion is
    sampled jointly at the grid and at L/τ, so H is exact.

    Raises:
        StepCapExceededError: if n exceeds LIPMIN_MAX_PATH_STEPS
    """
    a = params.alpha
    zeta = tau + hit
    n = max(grid_steps(zeta, dt), 2)
    check_step_cap(n)
    step = zeta / n
    times = np.arange(n + 1) * step
    times[-1] = zeta
    L = tau - gamma / (2 * a)

    head = times <= tau
    u = np.append(times[head] / tau, L / tau)
    e = brownian_excursion_at(np.clip(u, 0.0, 1.0), gen)
    frak_e = np.empty(n + 1)
    frak_e[head] = math.sqrt(tau) * e[:-1] + 2 * a * times[head]
    frak_e[~head] = 2 * a * tau + first_passage_segment(gamma, hit, times[~head] - tau, gen)
    frak_e[-1] = 2 * a * tau - gamma

    features = ExcursionFeatures(
        zeta=zeta,
        L=L,
        zeta_minus_L=hit + gamma / (2 * a),
        w_zeta=a * tau - a * hit - gamma,
        h=math.sqrt(tau) * float(e[-1]),
    )
    return SampledExcursion(
        path=GridPath(t0=0.0, dt=step, values=frak_e - a * times),
        features=features,
        provenance=Provenance.DIRECT,
        tau_gamma=TauGammaSample(tau=tau, gamma_hat=gamma),
        hitting_time=hit,
    )


@with_resample(StepCapExceededError)
def _draw_generic_excursion(
    params: LawParams, dt: float, gen: np.random.Generator
) -> SampledExcursion:
    sample = sample_tau_gamma(params, gen)
    hit = float(
        sample_inverse_gaussian_hitting(params.alpha + params.beta, sample.gamma_hat, gen)
    )
    return assemble_excursion(params, sample.tau, sample.gamma_hat, hit, dt, gen)


def sample_generic_excursion(
    params: LawParams, dt: float, rng: RngStream | np.random.Generator
) -> SampledExcursion:
    """A generic excursion path with its features, assembled from (τ, γ̂, T̃).

    The hitting segment is a Brownian path conditioned to first reach −γ̂ exactly at
    the sampled T̃, so path and features agree. A draw whose grid would exceed the
    step cap is discarded and redrawn, up to 3 attempts.

    Raises:
        StepCapExceededError: if three consecutive draws exceed the step cap
    """
    return _draw_generic_excursion(params, dt, as_generator(rng))


def pathwise_excursion(exc: Excursion, alpha: float) -> SampledExcursion:
    """Wrap an excursion extracted from a simulated grid path.

    Raises:
        CorruptExcursionError: if the excursion is not on an equally spaced grid
    """
    gaps = np.diff(exc.times)
    if gaps.size == 0 or not np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0):
        raise CorruptExcursionError("pathwise excursions must lie on an equally spaced grid")
    return SampledExcursion(
        path=GridPath(t0=0.0, dt=float(gaps[0]), values=exc.values),
        features=excursion_features(exc, alpha),
        provenance=Provenance.PATHWISE,
    )
