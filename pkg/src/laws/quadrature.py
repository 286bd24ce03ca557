"""
Adaptive quadrature and tabulated CDFs for densities on (0, ∞).

The densities in this package blow up like t^(-1/2) at 0, so [0, 1] is
integrated after substituting t = u² (dt = 2u du), which leaves a bounded
integrand; [1, ∞) is integrated directly with scipy's QUADPACK wrapper.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy import integrate
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from src.core.config import settings
from src.core.exceptions import NonMonotoneCdfError
from src.core.logging import get_logger

logger = get_logger(__name__)

Density = Callable[[float], float]

_QUAD_LIMIT = 200


def _quad(fn: Callable[[float], float], lo: float, hi: float, epsabs: float | None) -> float:
    value, _ = integrate.quad(
        fn,
        lo,
        hi,
        epsabs=settings.quad_epsabs if epsabs is None else epsabs,
        epsrel=1e-10,
        limit=_QUAD_LIMIT,
    )
    return float(value)


def integrate_singular(
    fn: Density,
    lo: float = 0.0,
    hi: float = math.inf,
    epsabs: float | None = None,
) -> float:
    """∫_lo^hi fn(t) dt for fn with at most a t^(-1/2) singularity at 0."""
    if hi <= lo:
        return 0.0
    total = 0.0
    split = min(max(lo, 1.0), hi)
    if lo < split:
        # t = u², dt = 2u du
        total += _quad(lambda u: 2.0 * u * fn(u * u), math.sqrt(lo), math.sqrt(split), epsabs)
    if split < hi:
        total += _quad(fn, split, hi, epsabs)
    return total


def integrate_density(density: Density, epsabs: float | None = None) -> float:
    """Total mass of a density on (0, ∞)."""
    return integrate_singular(density, 0.0, math.inf, epsabs)


def moment_by_quadrature(density: Density, order: int = 1, epsabs: float | None = None) -> float:
    """∫ t^order density(t) dt."""
    return integrate_singular(lambda t: t**order * density(t), 0.0, math.inf, epsabs)


def laplace_by_quadrature(
    density: Density, lam: float, epsabs: float | None = None
) -> float:
    """∫ e^(-λt) density(t) dt."""
    return integrate_singular(lambda t: math.exp(-lam * t) * density(t), 0.0, math.inf, epsabs)


class TabulatedCdf:
    """
    CDF of a density on (0, ∞), tabulated once and interpolated.

    The table is log-spaced between a lower point carrying at most ``tail_mass``
    below it and an upper point carrying at most ``tail_mass`` above it.
    Interpolation is monotone cubic (PCHIP) in log t. ``ppf`` inverts the table
    and polishes with Newton steps, falling back to bisection (Brent).
    """

    def __init__(
        self,
        density: Density,
        scale: float = 1.0,
        size: int | None = None,
        tail_mass: float | None = None,
    ):
        self.density = density
        self.size = size or settings.cdf_table_size
        self.tail_mass = tail_mass or settings.cdf_tail_mass

        t_lo = 1e-6 * scale
        while integrate_singular(density, 0.0, t_lo) > self.tail_mass and t_lo > 1e-300:
            t_lo *= 1e-2
        t_hi = 10.0 * scale
        while integrate_singular(density, t_hi, math.inf) > self.tail_mass:
            t_hi *= 2.0

        grid = np.geomspace(t_lo, t_hi, self.size)
        pieces = [integrate_singular(density, a, b) for a, b in zip(grid[:-1], grid[1:])]
        head = integrate_singular(density, 0.0, t_lo)
        cdf = head + np.concatenate([[0.0], np.cumsum(pieces)])
        total = cdf[-1] + integrate_singular(density, t_hi, math.inf)
        cdf = cdf / total
        if np.any(np.diff(cdf) < 0):
            raise NonMonotoneCdfError("tabulated CDF is not monotone")

        self.t_lo = float(t_lo)
        self.t_hi = float(t_hi)
        self.total_mass = float(total)
        self._log_t = np.log(grid)
        self._cdf = cdf
        self._interp = PchipInterpolator(self._log_t, cdf, extrapolate=False)
        logger.debug(
            "Tabulated CDF on [%.3g, %.3g] with %d points, mass %.12f",
            t_lo,
            t_hi,
            self.size,
            total,
        )

    def cdf(self, t: float | np.ndarray) -> np.ndarray:
        t = np.atleast_1d(np.asarray(t, dtype=np.float64))
        out = np.empty_like(t)
        low = t < self.t_lo
        high = t > self.t_hi
        mid = ~low & ~high
        # below the table the mass grows like sqrt(t)
        out[low] = self._cdf[0] * np.sqrt(np.clip(t[low], 0.0, None) / self.t_lo)
        out[high] = 1.0
        out[mid] = self._interp(np.log(t[mid]))
        return np.clip(out, 0.0, 1.0)

    def __call__(self, t: float | np.ndarray) -> np.ndarray:
        return self.cdf(t)

    def ppf(self, p: float | np.ndarray, xtol: float = 1e-8) -> np.ndarray:
        p = np.atleast_1d(np.asarray(p, dtype=np.float64))
        t = np.exp(np.interp(p, self._cdf, self._log_t))
        below = p < self._cdf[0]
        t[below] = self.t_lo * (p[below] / self._cdf[0]) ** 2
        t[p >= self._cdf[-1]] = self.t_hi

        inside = ~below & (p < self._cdf[-1])
        density = np.vectorize(self.density, otypes=[np.float64])
        for _ in range(3):
            if not inside.any():
                break
            ti = t[inside]
            step = (self.cdf(ti) - p[inside]) / np.maximum(density(ti) / self.total_mass, 1e-300)
            t[inside] = np.clip(ti - step, self.t_lo, self.t_hi)

        residual = np.abs(self.cdf(t) - p)
        for i in np.flatnonzero(inside & (residual > xtol)):
            t[i] = brentq(
                lambda x, q=p[i]: float(self.cdf(x)[0]) - q, self.t_lo, self.t_hi, xtol=1e-14
            )
        return t
