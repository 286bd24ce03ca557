"""Checks of the Azéma supermartingale of D and of the Itô identity behind it."""

from __future__ import annotations

import math

import numpy as np

from src.azema.supermartingale import ito_residuals, sample_azema, survival_curve
from src.core.config import settings
from src.harness.registry import Outcome, combine, exact_outcome, moment_outcome, register
from src.harness.stats import moment_check
from src.laws.brownian import LawParams
from src.paths.rng import RngStream, split
from src.sampler.decomposition import sample_D_decomposition_batch

DRIFTLESS = LawParams(alpha=1.0, beta=0.0)
SURVIVAL_TIMES = (0.1, 0.5, 1.0, 2.0)
AZEMA_DT = 1e-3
LAG = 0.01
ITO_PATHS = 100
ITO_RATIO_BOUND = 0.7
ITO_MEDIAN_BOUND = 0.02


@register("azema", "azema_mean_survival")
def azema_mean_survival(n: int, rng: RngStream) -> Outcome:
    """E[Z_t] = P(D > t); Z lies in [0, 1] and decreases in mean."""
    samples = sample_azema(DRIFTLESS, SURVIVAL_TIMES, n, AZEMA_DT, rng)
    outcomes = []
    for j, t in enumerate(samples.t):
        diff = samples.Z[:, j] - samples.survived[:, j]
        outcomes.append(moment_outcome(moment_check(diff, 0.0), f"t={t}"))
    excess = max(float(np.max(samples.Z)) - 1.0, -float(np.min(samples.Z)), 0.0)
    outcomes.append(exact_outcome(excess, 0.0, samples.n, "0 <= Z <= 1"))
    for j in range(samples.t.size - 1):
        step = samples.Z[:, j + 1] - samples.Z[:, j]
        res = moment_check(step, 0.0)
        outcomes.append(
            Outcome(
                kind="moment",
                statistic=res.mean,
                passed=res.mean <= res.k_sigma * res.se,
                n=res.n,
                target=0.0,
                tolerance=res.k_sigma * res.se,
                detail=f"mean Z from t={samples.t[j]} to t={samples.t[j + 1]}",
            )
        )
    return combine(outcomes, "Azema mean survival")


@register("azema", "azema_leaves_one_after_S")
def azema_leaves_one_after_S(n: int, rng: RngStream) -> Outcome:
    """The share of paths with Z_{S+h} < 1 at h = 0.01 grows as the grid is refined."""
    count = max(n // 10, 200)
    coarse_stream, fine_stream = split(rng, 2)
    coarse = sample_azema(DRIFTLESS, [0.0], count, 1e-3, coarse_stream, lag=LAG)
    fine = sample_azema(DRIFTLESS, [0.0], count, 2.5e-4, fine_stream, lag=LAG)
    p_coarse = float(np.mean(coarse.below_after_s))
    p_fine = float(np.mean(fine.below_after_s))
    se = math.sqrt((p_coarse * (1 - p_coarse) + p_fine * (1 - p_fine)) / count)
    return Outcome(
        kind="identity",
        statistic=p_fine - p_coarse,
        passed=p_fine > p_coarse and p_fine > 0.5,
        n=count,
        target=0.0,
        tolerance=se,
        detail=f"share below 1: {p_coarse:.3f} at dt=1e-3, {p_fine:.3f} at dt=2.5e-4",
    )


@register("azema", "survival_matches_decomposition")
def survival_matches_decomposition(n: int, rng: RngStream) -> Outcome:
    """P(D > t) from recipe times agrees with the D decomposition."""
    count = max(n // 5, 1000)
    path_stream, decomposed_stream = split(rng, 2)
    curve = survival_curve(DRIFTLESS, SURVIVAL_TIMES, count, path_stream, dt=AZEMA_DT)
    decomposed = sample_D_decomposition_batch(
        DRIFTLESS, count, AZEMA_DT, decomposed_stream, method="williams"
    )
    outcomes = []
    for t, p, se in zip(curve.t, curve.p, curve.se):
        q = float(np.mean(decomposed > t))
        tolerance = settings.k_sigma * math.sqrt(se**2 + q * (1 - q) / count)
        outcomes.append(
            Outcome(
                kind="identity",
                statistic=float(p) - q,
                passed=abs(float(p) - q) <= tolerance,
                n=count,
                target=0.0,
                tolerance=tolerance,
                detail=f"t={t}",
            )
        )
    return combine(outcomes, "survival of D")


@register("azema", "ito_identity")
def ito_identity(n: int, rng: RngStream) -> Outcome:
    """The Itô residual shrinks with dt and is small at dt = 1e-5."""
    coarse_stream, fine_stream, finest_stream = split(rng, 3)
    coarse = float(np.median(ito_residuals(1.0, 1.0, 1e-3, ITO_PATHS, coarse_stream)))
    fine = float(np.median(ito_residuals(1.0, 1.0, 1e-4, ITO_PATHS, fine_stream)))
    finest = float(np.median(ito_residuals(1.0, 1.0, 1e-5, ITO_PATHS, finest_stream)))
    return combine(
        [
            Outcome(
                kind="exact",
                statistic=fine / coarse,
                passed=fine / coarse < ITO_RATIO_BOUND,
                n=ITO_PATHS,
                target=0.0,
                tolerance=ITO_RATIO_BOUND,
                detail="median ratio dt=1e-4 over dt=1e-3",
            ),
            Outcome(
                kind="exact",
                statistic=finest,
                passed=finest < ITO_MEDIAN_BOUND,
                n=ITO_PATHS,
                target=0.0,
                tolerance=ITO_MEDIAN_BOUND,
                detail="median residual at dt=1e-5",
            ),
        ]
    )
