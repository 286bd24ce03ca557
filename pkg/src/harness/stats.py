"""
Statistical checks used by the verification suites.

KS p-values are asymptotic (Kolmogorov distribution) so they are cheap and
deterministic for any N; moment checks compare a sample mean with a target
within k standard errors.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from typing import NamedTuple

import numpy as np
import scipy.stats

from src.core.config import settings
from src.core.exceptions import InsufficientSamplesError, NonMonotoneCdfError

MIN_KS_SAMPLES = 20
MIN_MOMENT_SAMPLES = 30


class KsResult(NamedTuple):
    statistic: float
    pvalue: float


class MomentResult(NamedTuple):
    mean: float
    se: float
    target: float
    k_sigma: float
    n: int
    passed: bool


class IdentityPoint(NamedTuple):
    """Both sides of P(ζ_V > t) = P(ζ_W > t) + t·f_W(t) at one t."""

    t: float
    lhs: float
    rhs: float
    se: float


def _finite(samples: np.ndarray | list[float], minimum: int, what: str) -> np.ndarray:
    x = np.asarray(samples, dtype=np.float64).ravel()
    if x.size < minimum:
        raise InsufficientSamplesError(f"{what} needs at least {minimum} samples, got {x.size}")
    return x


def ks_one_sample(
    samples: np.ndarray | list[float], cdf: Callable[[np.ndarray], np.ndarray]
) -> KsResult:
    """One-sample Kolmogorov-Smirnov test against ``cdf``.

    Raises:
        InsufficientSamplesError: if fewer than 20 samples
        NonMonotoneCdfError: if ``cdf`` decreases across the sorted samples
    """
    x = np.sort(_finite(samples, MIN_KS_SAMPLES, "ks_one_sample"))
    values = np.asarray(cdf(x), dtype=np.float64)
    if np.any(np.diff(values) < -1e-12):
        raise NonMonotoneCdfError("reference CDF is not monotone on the sample range")
    res = scipy.stats.kstest(x, cdf, method="asymp")
    return KsResult(statistic=float(res.statistic), pvalue=float(res.pvalue))


def ks_two_sample(a: np.ndarray | list[float], b: np.ndarray | list[float]) -> KsResult:
    """Two-sample Kolmogorov-Smirnov test.

    Raises:
        InsufficientSamplesError: if either sample has fewer than 20 values
    """
    x = _finite(a, MIN_KS_SAMPLES, "ks_two_sample")
    y = _finite(b, MIN_KS_SAMPLES, "ks_two_sample")
    res = scipy.stats.ks_2samp(x, y, method="asymp")
    return KsResult(statistic=float(res.statistic), pvalue=float(res.pvalue))


def moment_check(
    samples: np.ndarray | list[float], target: float, k_sigma: float | None = None
) -> MomentResult:
    """Pass iff |mean − target| <= k_sigma · SD / √N (k_sigma defaults to LIPMIN_K_SIGMA).

    Raises:
        InsufficientSamplesError: if fewer than 30 samples
    """
    x = _finite(samples, MIN_MOMENT_SAMPLES, "moment_check")
    k = settings.k_sigma if k_sigma is None else k_sigma
    mean = float(np.mean(x))
    se = float(np.std(x, ddof=1) / math.sqrt(x.size))
    return MomentResult(
        mean=mean,
        se=se,
        target=target,
        k_sigma=k,
        n=int(x.size),
        passed=abs(mean - target) <= k * se,
    )


def reflected_kde(
    samples: np.ndarray, t: np.ndarray | list[float]
) -> tuple[np.ndarray, float]:
    """Gaussian kernel density of nonnegative samples, reflected at 0.

    Returns the density at ``t`` and the kernel bandwidth.
    """
    x = np.asarray(samples, dtype=np.float64)
    kde = scipy.stats.gaussian_kde(np.concatenate([x, -x]))
    return 2.0 * kde(np.asarray(t, dtype=np.float64)), float(np.sqrt(kde.covariance[0, 0]))


def lifetime_identity(
    zeta_v: np.ndarray, zeta_w: np.ndarray, t_points: list[float] | np.ndarray
) -> list[IdentityPoint]:
    """Both sides of P(ζ_V > t) = P(ζ_W > t) + t·f_W(t) for ζ_W = U·ζ_V, U uniform.

    The standard error combines the two binomial proportions with the asymptotic
    variance f/(2√π n h) of the kernel estimate.
    """
    v = _finite(zeta_v, MIN_MOMENT_SAMPLES, "lifetime_identity")
    w = _finite(zeta_w, MIN_MOMENT_SAMPLES, "lifetime_identity")
    t = np.asarray(t_points, dtype=np.float64)
    dens, bw = reflected_kde(w, t)
    points = []
    for ti, fi in zip(t, dens):
        p_v = float(np.mean(v > ti))
        p_w = float(np.mean(w > ti))
        kde_var = float(fi) / (2 * math.sqrt(math.pi) * w.size * bw)
        se = math.sqrt(
            p_v * (1 - p_v) / v.size + p_w * (1 - p_w) / w.size + float(ti) ** 2 * kde_var
        )
        points.append(IdentityPoint(t=float(ti), lhs=p_v, rhs=p_w + float(ti * fi), se=se))
    return points
