"""Checks of the straddling excursion, the generic excursions after D and the regeneration at D."""

from __future__ import annotations

import math

import numpy as np
import scipy.stats

from src.core.config import settings
from src.harness.checks.pathwise import collect_pathwise
from src.harness.registry import Outcome, combine, ks_outcome, moment_outcome, register
from src.harness.stats import ks_one_sample, ks_two_sample, lifetime_identity, moment_check
from src.laws.brownian import LawParams, mean_features, second_moment_zeta, straddle_laplace
from src.paths.rng import RngStream
from src.sampler.decomposition import sample_straddling_batch

DRIFTLESS = LawParams(alpha=1.0, beta=0.0)
DRIFTED = LawParams(alpha=1.0, beta=0.5)
LONG_WINDOW = (-20.0, 200.0)
IDENTITY_TIMES = (0.2, 0.5, 1.0)
IDENTITY_K_SIGMA = 5.0
P = settings.p_threshold


@register("straddle", "straddle_mean_length")
def straddle_mean_length(n: int, rng: RngStream) -> Outcome:
    """E[D − G] = E[ζ²]/E[ζ], which is 2 at (1, 0)."""
    batch = sample_straddling_batch(DRIFTLESS, n, rng)
    target = second_moment_zeta(DRIFTLESS) / mean_features(DRIFTLESS).zeta
    return moment_outcome(moment_check(batch.lifetime, target))


@register("straddle", "straddle_laplace_transform")
def straddle_laplace_transform(n: int, rng: RngStream) -> Outcome:
    """E e^{−λ(D−G)} against −∂Ψ/∂ρ1 / E[ζ] at λ ∈ {0.5, 2}."""
    batch = sample_straddling_batch(DRIFTLESS, n, rng)
    outcomes = [
        moment_outcome(
            moment_check(np.exp(-lam * batch.lifetime), straddle_laplace(DRIFTLESS, lam)),
            f"lambda={lam}",
        )
        for lam in (0.5, 2.0)
    ]
    return combine(outcomes)


@register("straddle", "straddle_split_uniform")
def straddle_split_uniform(n: int, rng: RngStream) -> Outcome:
    """The sampled split U = −G/(D−G) is uniform and independent of D − G."""
    batch = sample_straddling_batch(DRIFTLESS, n, rng)
    rho = float(scipy.stats.spearmanr(batch.split, batch.lifetime).statistic)
    bound = settings.k_sigma / math.sqrt(n - 1)
    return combine(
        [
            ks_outcome(ks_one_sample(batch.split, scipy.stats.uniform.cdf), n, P, "uniform"),
            Outcome(
                kind="correlation",
                statistic=rho,
                passed=abs(rho) <= bound,
                n=n,
                target=0.0,
                tolerance=bound,
                detail="rank correlation with D - G",
            ),
        ]
    )


@register("straddle", "straddle_lifetime_identity")
def straddle_lifetime_identity(n: int, rng: RngStream) -> Outcome:
    """P(D − G > t) = P(−G > t) + t·f_{−G}(t) at t ∈ {0.2, 0.5, 1}, within 5 SE."""
    batch = sample_straddling_batch(DRIFTLESS, n, rng)
    outcomes = []
    for point in lifetime_identity(batch.lifetime, -batch.G, IDENTITY_TIMES):
        tolerance = IDENTITY_K_SIGMA * point.se
        outcomes.append(
            Outcome(
                kind="identity",
                statistic=point.lhs - point.rhs,
                passed=abs(point.lhs - point.rhs) <= tolerance,
                n=n,
                target=0.0,
                tolerance=tolerance,
                detail=f"t={point.t}",
            )
        )
    return combine(outcomes, "lifetime identity")


@register("straddle", "pathwise_split_uniform", slow=True)
def pathwise_split_uniform(n: int, rng: RngStream) -> Outcome:
    """U = −G/(D−G) from the contacts of simulated paths is uniform on [0, 1)."""
    contacts = collect_pathwise(DRIFTLESS, max(n // 2, 200), rng)
    return ks_outcome(
        ks_one_sample(contacts.split, scipy.stats.uniform.cdf),
        int(contacts.split.size),
        P,
        f"{contacts.skipped} paths skipped",
    )


@register("straddle", "pathwise_regeneration")
def pathwise_regeneration(n: int, rng: RngStream) -> Outcome:
    """After D the excursions are iid and independent of the path before D.

    The first and second generic lifetimes have the same law, and the first one is
    uncorrelated in rank with D − G.
    """
    contacts = collect_pathwise(DRIFTLESS, max(n // 4, 200), rng)
    count = int(contacts.D.size)
    rho = float(scipy.stats.spearmanr(contacts.D - contacts.G, contacts.first_zeta).statistic)
    bound = settings.k_sigma / math.sqrt(count - 1)
    return combine(
        [
            ks_outcome(
                ks_two_sample(contacts.first_zeta, contacts.second_zeta),
                count,
                P,
                "first vs second generic lifetime",
            ),
            Outcome(
                kind="correlation",
                statistic=rho,
                passed=abs(rho) <= bound,
                n=count,
                target=0.0,
                tolerance=bound,
                detail="rank correlation of D - G with the next lifetime",
            ),
        ]
    )


@register("straddle", "pathwise_mean_lifetime", slow=True)
def pathwise_mean_lifetime(n: int, rng: RngStream) -> Outcome:
    """Generic lifetimes extracted on [−20, 200] average 1/(2α²) = 0.5."""
    contacts = collect_pathwise(DRIFTLESS, max(n // 3000, 3), rng, 2.5e-4, LONG_WINDOW)
    target = mean_features(DRIFTLESS).zeta
    return moment_outcome(
        moment_check(contacts.lifetimes, target), f"{contacts.lifetimes.size} excursions"
    )


@register("straddle", "pathwise_renewal_reward", slow=True)
def pathwise_renewal_reward(n: int, rng: RngStream) -> Outcome:
    """E[W_ζ] = β·E[ζ] on drifted paths: W_ζ − βζ has mean 0."""
    contacts = collect_pathwise(DRIFTED, max(n // 2000, 5), rng, 1e-3, LONG_WINDOW)
    residual = contacts.final_values - DRIFTED.beta * contacts.lifetimes
    ratio = float(np.sum(contacts.final_values) / np.sum(contacts.lifetimes))
    return moment_outcome(moment_check(residual, 0.0), f"E[W]/E[zeta]={ratio:.4f}")


@register("straddle", "post_D_independence")
def post_D_independence(n: int, rng: RngStream) -> Outcome:
    """inf_{u<=0}(X_u − αu) is uncorrelated with X_{D+1} − X_D."""
    contacts = collect_pathwise(DRIFTLESS, max(n // 4, 300), rng, dt=1e-2)
    keep = np.isfinite(contacts.post_increment)
    count = int(np.count_nonzero(keep))
    rho = float(
        scipy.stats.pearsonr(contacts.pre_inf[keep], contacts.post_increment[keep]).statistic
    )
    bound = settings.k_sigma / math.sqrt(count)
    return Outcome(
        kind="correlation",
        statistic=rho,
        passed=abs(rho) < bound,
        n=count,
        target=0.0,
        tolerance=bound,
        detail=f"{contacts.skipped} paths skipped",
    )
