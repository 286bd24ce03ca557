"""
Closed-form laws of the excursions of X_t = B_t + βt away from the contact set
of its α-Lipschitz minorant.

Excursion features: lifetime ζ, time L of the minorant's apex, ζ − L, and
final value W_ζ. Their joint Laplace transform is

    Ψ(ρ1, ρ2, ρ3, ρ4) = E exp(−ρ1 ζ − ρ2 L − ρ3 (ζ − L) − ρ4 W_ζ)
                      = 4α / (2α + √(2(ρ1+ρ3−αρ4) + (α+β)²)
                              + √(2(ρ1+ρ2+αρ4) + (α−β)²)).

A generic excursion splits at (τ, γ̂), whose joint density is
exp(−(α−β)²t/2 − 2(α+β)x) / √(2πt³) on 0 <= x <= 2αt; then ζ = τ + T̃_γ̂ where
T̃_γ̂ is the first passage of a drift-(α+β) Brownian motion to level γ̂.

Standard normal tails use scipy.special; products of the form e^{kl} Φ̄(s√l)
are evaluated through erfcx to avoid overflow against underflow.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import lru_cache
from typing import NamedTuple

import numpy as np
import scipy.stats
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy import integrate
from scipy.special import erfcx, ndtr

from src.core.config import settings
from src.core.exceptions import LawDomainError, UnsupportedLawError
from src.laws.quadrature import TabulatedCdf, integrate_singular

_SQRT_2PI = math.sqrt(2.0 * math.pi)


class LawParams(BaseModel):
    """Slope bound α and Brownian drift β with |β| < α."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(gt=0)
    beta: float = 0.0

    @model_validator(mode="after")
    def validate_drift(self) -> LawParams:
        if not abs(self.beta) < self.alpha:
            raise ValueError(f"need |beta| < alpha, got beta={self.beta}, alpha={self.alpha}")
        return self

    def reversed(self) -> LawParams:
        """Parameters of the time-reversed excursion (β → −β)."""
        return LawParams(alpha=self.alpha, beta=-self.beta)


class FeatureKind(str, Enum):
    ZETA = "zeta"
    L_PEAK = "L"
    ZETA_MINUS_L = "zeta_minus_L"
    W_ZETA = "w_zeta"


class MeanFeatures(NamedTuple):
    zeta: float
    L: float
    zeta_minus_L: float
    w_zeta: float


def _sqrt_checked(value: float, what: str) -> float:
    if value < 0:
        raise LawDomainError(f"negative radicand {value:.6g} in {what}")
    return math.sqrt(value)


def psi_joint_laplace(
    params: LawParams, rho1: float, rho2: float, rho3: float, rho4: float
) -> float:
    """Joint Laplace transform Ψ of (ζ, L, ζ − L, W_ζ).

    Raises:
        LawDomainError: if either square-root argument is negative
    """
    a, b = params.alpha, params.beta
    up = _sqrt_checked(2 * (rho1 + rho3 - a * rho4) + (a + b) ** 2, "Psi")
    down = _sqrt_checked(2 * (rho1 + rho2 + a * rho4) + (a - b) ** 2, "Psi")
    return 4 * a / (2 * a + up + down)


def feature_laplace(kind: FeatureKind, params: LawParams, lam: float) -> float:
    """Laplace transform of a single feature, as the matching specialization of Ψ.

    Raises:
        LawDomainError: for λ < 0 (ζ, L, ζ − L) or (α+β)² − 2αλ < 0 (W_ζ)
    """
    if kind is FeatureKind.W_ZETA:
        return psi_joint_laplace(params, 0.0, 0.0, 0.0, lam)
    if lam < 0:
        raise LawDomainError(f"lambda must be >= 0, got {lam}")
    if kind is FeatureKind.ZETA:
        return psi_joint_laplace(params, lam, 0.0, 0.0, 0.0)
    if kind is FeatureKind.L_PEAK:
        return psi_joint_laplace(params, 0.0, lam, 0.0, 0.0)
    return psi_joint_laplace(params, 0.0, 0.0, lam, 0.0)


def _tent_density(a: float, b: float, x: float) -> float:
    """Density of L under (α, β) = (a, b):
    4α e^{−(α−β)²x/2}/√(2πx) − 4α(3α+β) e^{4α(α+β)x} Φ̄((3α+β)√x).
    """
    s = 3 * a + b
    damp = math.exp(-((a - b) ** 2) * x / 2)
    tail = 2 * a * s * float(erfcx(s * math.sqrt(x / 2)))
    return damp * (4 * a / math.sqrt(2 * math.pi * x) - tail)


def _zeta_density_driftless(a: float, x: float) -> float:
    """2α e^{−α²x/2}/√(2πx) − 2α² Φ̄(α√x)."""
    damp = math.exp(-(a**2) * x / 2)
    tail = a**2 * float(erfcx(a * math.sqrt(x / 2)))
    return damp * (2 * a / math.sqrt(2 * math.pi * x) - tail)


def feature_density(kind: FeatureKind, params: LawParams, x: float) -> float:
    """Density of ζ (β = 0 only), L or ζ − L at x > 0.

    Raises:
        LawDomainError: if x <= 0
        UnsupportedLawError: for ζ with β != 0, or for W_ζ
    """
    if not x > 0:
        raise LawDomainError(f"argument must be > 0, got {x}")
    a, b = params.alpha, params.beta
    if kind is FeatureKind.ZETA:
        if b != 0:
            raise UnsupportedLawError(
                "zeta density has a closed form only for beta = 0; invert the Laplace transform"
            )
        return _zeta_density_driftless(a, x)
    if kind is FeatureKind.L_PEAK:
        return max(_tent_density(a, b, x), 0.0)
    if kind is FeatureKind.ZETA_MINUS_L:
        return max(_tent_density(a, -b, x), 0.0)
    raise UnsupportedLawError("no closed-form density for the final value W_zeta")


def mean_features(params: LawParams) -> MeanFeatures:
    """(Eζ, EL, E(ζ − L), EW_ζ)."""
    a, b = params.alpha, params.beta
    el = 1 / (4 * a * (a - b))
    eml = 1 / (4 * a * (a + b))
    return MeanFeatures(zeta=el + eml, L=el, zeta_minus_L=eml, w_zeta=b / (2 * (a * a - b * b)))


def second_moment_zeta(params: LawParams) -> float:
    """E[ζ²] = Ψ_ζ''(0), with Ψ_ζ(λ) = 4α / (2α + A(λ) + B(λ))."""
    a, b = params.alpha, params.beta
    A, B = a + b, a - b
    den = 2 * a + A + B
    d1 = 1 / A + 1 / B
    d2 = 1 / A**3 + 1 / B**3
    return 4 * a * (2 * d1**2 / den**3 + d2 / den**2)


def _require_time(t: float) -> None:
    if not t > 0:
        raise LawDomainError(f"t must be > 0, got {t}")


def joint_density_tau_gamma(params: LawParams, t: float, x: float) -> float:
    """Joint density of (τ, γ̂) at (t, x)."""
    _require_time(t)
    a, b = params.alpha, params.beta
    if not 0 <= x <= 2 * a * t:
        return 0.0
    return math.exp(-((a - b) ** 2) * t / 2 - 2 * (a + b) * x) / math.sqrt(2 * math.pi * t**3)


def density_frak_T(params: LawParams, t: float) -> float:
    """(e^{−(α−β)²t/2} − e^{−(3α+β)²t/2}) / (2(α+β)√(2πt³)); the law of τ."""
    _require_time(t)
    a, b = params.alpha, params.beta
    head = math.exp(-((a - b) ** 2) * t / 2)
    spread = -math.expm1(-4 * a * (a + b) * t)
    return head * spread / (2 * (a + b) * math.sqrt(2 * math.pi * t**3))


def conditional_density_gamma(params: LawParams, x: float, t: float) -> float:
    """Density of γ̂ given τ = t: truncated exponential of rate 2(α+β) on [0, 2αt]."""
    _require_time(t)
    a, b = params.alpha, params.beta
    if not 0 <= x <= 2 * a * t:
        return 0.0
    rate = 2 * (a + b)
    return rate * math.exp(-rate * x) / -math.expm1(-rate * 2 * a * t)


def truncated_exponential_mean(rate: float, upper: float) -> float:
    """Mean of the Exp(rate) law truncated to [0, upper]."""
    z = rate * upper
    if z < 1e-8:
        return upper / 2
    return 1 / rate - upper / math.expm1(z)


def joint_density_tau_u(params: LawParams, t: float, u: float) -> float:
    """Joint density of (τ, 𝔘) with 𝔘 = γ̂/(2ατ), on (0, ∞) × [0, 1]."""
    _require_time(t)
    a, b = params.alpha, params.beta
    if not 0 <= u <= 1:
        return 0.0
    exponent = -((a - b) ** 2) * t / 2 - 4 * a * (a + b) * t * u
    return 2 * a / math.sqrt(2 * math.pi * t) * math.exp(exponent)


def three_variable_laplace(params: LawParams, lam1: float, lam2: float, lam3: float) -> float:
    """E exp(−λ1 τ − λ2 γ̂ − λ3 T̃_γ̂)."""
    a, b = params.alpha, params.beta
    inner = 2 * a + _sqrt_checked(2 * lam3 + (a + b) ** 2, "three-variable transform")
    first = _sqrt_checked(2 * (lam1 - lam3) + 4 * a * lam2 + inner**2, "three-variable transform")
    second = _sqrt_checked(2 * lam1 + (a - b) ** 2, "three-variable transform")
    return 4 * a / (first + second)


def straddle_laplace(params: LawParams, lam: float) -> float:
    """E exp(−λ(D − G)) for the size-biased straddling lifetime."""
    if lam < 0:
        raise LawDomainError(f"lambda must be >= 0, got {lam}")
    a, b = params.alpha, params.beta
    A = math.sqrt(2 * lam + (a + b) ** 2)
    B = math.sqrt(2 * lam + (a - b) ** 2)
    return 4 * a * (1 / A + 1 / B) / ((2 * a + A + B) ** 2 * mean_features(params).zeta)


def density_last_exit(params: LawParams, t: float) -> float:
    """Density of 1/τ: the last exit from 2α of a BES(3) started at α + β."""
    _require_time(t)
    a, b = params.alpha, params.beta
    head = math.exp(-((a - b) ** 2) / (2 * t))
    tail = -math.expm1(-4 * a * (a + b) / t)
    return head * tail / (2 * (a + b) * math.sqrt(2 * math.pi * t))


def laplace_last_exit(params: LawParams, lam: float) -> float:
    """e^{−2α√(2λ)} sinh((α+β)√(2λ)) / ((α+β)√(2λ))."""
    if lam < 0:
        raise LawDomainError(f"lambda must be >= 0, got {lam}")
    a, b = params.alpha, params.beta
    s = math.sqrt(2 * lam)
    if s == 0:
        return 1.0
    x = (a + b) * s
    # sinh(x) e^{-2αs} = (e^{x - 2αs} - e^{-x - 2αs}) / 2, both exponents <= 0
    return (math.exp(x - 2 * a * s) * -math.expm1(-2 * x)) / (2 * x)


class HittingTimeLaw:
    """First passage T_{μ,y} of a drift-μ Brownian motion from 0 to level y > 0."""

    def __init__(self, mu: float, y: float):
        if not mu > 0 or not y > 0:
            raise LawDomainError(f"need mu > 0 and y > 0, got mu={mu}, y={y}")
        self.mu = mu
        self.y = y
        # inverse Gaussian with mean y/μ and shape y²
        self._dist = scipy.stats.invgauss(mu=1 / (mu * y), scale=y * y)

    @property
    def mean(self) -> float:
        return self.y / self.mu

    def density(self, t: float) -> float:
        if not t > 0:
            return 0.0
        gap = self.y - self.mu * t
        return self.y / math.sqrt(2 * math.pi * t**3) * math.exp(-(gap**2) / (2 * t))

    def laplace(self, lam: float) -> float:
        if 2 * lam + self.mu**2 < 0:
            raise LawDomainError(f"lambda {lam} outside the transform's domain")
        return math.exp(-self.y * (math.sqrt(2 * lam + self.mu**2) - self.mu))

    def cdf(self, t: float | np.ndarray) -> np.ndarray:
        return np.asarray(self._dist.cdf(t))


def hitting_time_law(mu: float, y: float) -> HittingTimeLaw:
    """Density, Laplace transform and CDF of T_{μ,y}.

    Raises:
        LawDomainError: if μ <= 0 or y <= 0
    """
    return HittingTimeLaw(mu, y)


def levy_measure_density(alpha: float, x: float) -> float:
    """Density of the Lévy measure of the contact-set subordinator (β = 0).

    Raises:
        LawDomainError: if x <= 0
    """
    if not x > 0:
        raise LawDomainError(f"x must be > 0, got {x}")
    if not alpha > 0:
        raise LawDomainError(f"alpha must be > 0, got {alpha}")
    return _zeta_density_driftless(alpha, x)


def check_integral_identity(a: float, b: float) -> float:
    """|∫_0^∞ (e^{−at} − e^{−bt}) / √(2πt³) dt − (√(2b) − √(2a))|.

    Uses t = u² on the whole half-line, where the integrand becomes
    −2 e^{−au²} expm1(−(b−a)u²) / (√(2π) u²), bounded at u = 0.
    """
    if not a > 0 or not b > 0:
        raise LawDomainError(f"need a, b > 0, got a={a}, b={b}")

    def integrand(u: float) -> float:
        if u == 0.0:
            return 2 * (b - a) / _SQRT_2PI
        return -2 * math.exp(-a * u * u) * math.expm1(-(b - a) * u * u) / (_SQRT_2PI * u * u)

    opts = {"epsabs": settings.quad_epsabs, "epsrel": 1e-12, "limit": 200}
    head, _ = integrate.quad(integrand, 0.0, 1.0, **opts)
    tail, _ = integrate.quad(integrand, 1.0, math.inf, **opts)
    return abs(head + tail - (math.sqrt(2 * b) - math.sqrt(2 * a)))


def gamma_marginal_by_quadrature(params: LawParams, t: float) -> float:
    """∫ joint_density_tau_gamma(t, x) dx; equals density_frak_T(t)."""
    _require_time(t)
    value, _ = integrate.quad(
        lambda x: joint_density_tau_gamma(params, t, x),
        0.0,
        2 * params.alpha * t,
        epsabs=1e-13,
        epsrel=1e-12,
    )
    return float(value)


def joint_normalization(params: LawParams) -> float:
    """∫∫ joint_density_tau_gamma, integrating x in closed form by quadrature per t."""
    return integrate_singular(lambda t: gamma_marginal_by_quadrature(params, t))


@lru_cache(maxsize=32)
def frak_T_cdf(params: LawParams) -> TabulatedCdf:
    """Tabulated CDF of τ (shared, read-only)."""
    return TabulatedCdf(lambda t: density_frak_T(params, t), scale=mean_features(params).zeta)


@lru_cache(maxsize=32)
def feature_cdf(kind: FeatureKind, params: LawParams) -> TabulatedCdf:
    """Tabulated CDF of a feature with a closed-form density."""
    return TabulatedCdf(
        lambda t: feature_density(kind, params, t), scale=mean_features(params).zeta
    )


def normal_tail(x: float | np.ndarray) -> float | np.ndarray:
    """Φ̄(x) = 1 − Φ(x)."""
    return ndtr(-np.asarray(x))
