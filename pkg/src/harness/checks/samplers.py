"""Monte Carlo checks of the direct samplers against the closed-form laws."""

from __future__ import annotations

import math

import numpy as np
import scipy.stats

from src.core.config import settings
from src.harness.checks.pathwise import collect_pathwise
from src.harness.registry import (
    Outcome,
    combine,
    exact_outcome,
    ks_outcome,
    moment_outcome,
    register,
)
from src.harness.stats import ks_one_sample, ks_two_sample, moment_check
from src.laws.brownian import (
    FeatureKind,
    LawParams,
    density_last_exit,
    feature_cdf,
    feature_laplace,
    frak_T_cdf,
    hitting_time_law,
    mean_features,
    truncated_exponential_mean,
)
from src.laws.quadrature import TabulatedCdf
from src.minorant.engine import recipe_indices, recipe_window
from src.paths.rng import RngStream, split
from src.paths.simulate import simulate_brownian_two_sided
from src.paths.types import BrownianWithDrift
from src.sampler.bessel import (
    bessel_minimum_mean,
    sample_bes3_drift,
    sample_bessel_from_min,
    sample_brownian_excursion,
    sample_conditioned_bm_marginal,
    sample_williams_path,
)
from src.sampler.decomposition import (
    argmin_time_grid,
    argmin_time_williams,
    sample_D_decomposition,
    sample_frak_T_pathwise,
    sample_post_D,
)
from src.sampler.excursion import (
    sample_features_direct_batch,
    sample_generic_excursion,
    sample_inverse_gaussian_hitting,
    sample_tau_gamma_batch,
)

DRIFTLESS = LawParams(alpha=1.0, beta=0.0)
DRIFTED = LawParams(alpha=2.0, beta=1.0)
P = settings.p_threshold


@register("samplers", "direct_feature_means")
def direct_feature_means(n: int, rng: RngStream) -> Outcome:
    """Sample means of ζ, L, ζ − L and W_ζ match 1/(2(α²−β²)) and its parts."""
    outcomes = []
    for params, stream in zip((DRIFTLESS, DRIFTED), split(rng, 2)):
        table = sample_features_direct_batch(params, 10 * n, stream)
        means = mean_features(params)
        for column, target in (
            (table.zeta, means.zeta),
            (table.L, means.L),
            (table.zeta_minus_L, means.zeta_minus_L),
            (table.w_zeta, means.w_zeta),
        ):
            outcomes.append(moment_outcome(moment_check(column, target)))
    return combine(outcomes, "feature means at (1, 0) and (2, 1)")


@register("samplers", "direct_zeta_distribution")
def direct_zeta_distribution(n: int, rng: RngStream) -> Outcome:
    """Direct ζ samples against the CDF of the closed-form density."""
    zeta = sample_features_direct_batch(DRIFTLESS, n, rng).zeta
    return ks_outcome(ks_one_sample(zeta, feature_cdf(FeatureKind.ZETA, DRIFTLESS)), n, P)


@register("samplers", "direct_laplace_spots")
def direct_laplace_spots(n: int, rng: RngStream) -> Outcome:
    """Empirical transforms of the four features against the specializations of Ψ.

    W_ζ is checked at λ ∈ {0.1, 0.2}: e^{−λW_ζ} has a finite variance only for
    λ <= (α+β)²/(4α), which is 1/4 at (1, 0).
    """
    table = sample_features_direct_batch(DRIFTLESS, 10 * n, rng)
    outcomes = []
    for kind, column, lams in (
        (FeatureKind.ZETA, table.zeta, (0.1, 0.5)),
        (FeatureKind.L_PEAK, table.L, (0.1, 0.5)),
        (FeatureKind.ZETA_MINUS_L, table.zeta_minus_L, (0.1, 0.5)),
        (FeatureKind.W_ZETA, table.w_zeta, (0.1, 0.2)),
    ):
        for lam in lams:
            target = feature_laplace(kind, DRIFTLESS, lam)
            res = moment_check(np.exp(-lam * column), target)
            outcomes.append(moment_outcome(res, f"{kind.value} at {lam}"))
    return combine(outcomes, "Laplace spot checks")


@register("samplers", "tau_law")
def tau_law(n: int, rng: RngStream) -> Outcome:
    """τ against its tabulated CDF, and 1/τ against the last-exit law."""
    tau, _ = sample_tau_gamma_batch(DRIFTLESS, n, rng)
    last_exit = TabulatedCdf(lambda t: density_last_exit(DRIFTLESS, t))
    return combine(
        [
            ks_outcome(ks_one_sample(tau, frak_T_cdf(DRIFTLESS)), n, P, "tau"),
            ks_outcome(ks_one_sample(1.0 / tau, last_exit), n, P, "1/tau"),
        ]
    )


@register("samplers", "gamma_conditional_mean")
def gamma_conditional_mean(n: int, rng: RngStream) -> Outcome:
    """γ̂ minus its truncated-exponential conditional mean given τ has mean 0."""
    outcomes = []
    for params, stream in zip((DRIFTLESS, DRIFTED), split(rng, 2)):
        tau, gamma = sample_tau_gamma_batch(params, n, stream)
        rate = 2 * (params.alpha + params.beta)
        expected = np.array(
            [truncated_exponential_mean(rate, 2 * params.alpha * t) for t in tau]
        )
        outcomes.append(moment_outcome(moment_check(gamma - expected, 0.0), f"{params}"))
        excess = float(np.max(gamma - 2 * params.alpha * tau))
        outcomes.append(exact_outcome(max(excess, 0.0), 0.0, n, "gamma <= 2 alpha tau"))
    return combine(outcomes, "conditional law of gamma")


@register("samplers", "inverse_gaussian_hitting")
def inverse_gaussian_hitting(n: int, rng: RngStream) -> Outcome:
    """First-passage draws for μ = 1.5, y = 0.7 against the inverse Gaussian law."""
    law = hitting_time_law(1.5, 0.7)
    times = np.asarray(sample_inverse_gaussian_hitting(1.5, 0.7, rng, size=n))
    return combine(
        [
            ks_outcome(ks_one_sample(times, law.cdf), n, P, "hitting time law"),
            moment_outcome(moment_check(times, law.mean), "hitting time mean"),
        ]
    )


@register("samplers", "brownian_excursion_marginals")
def brownian_excursion_marginals(n: int, rng: RngStream) -> Outcome:
    """e(1/2) has mean √(2/π) and e(u)²/(u(1−u)) is χ²(3)."""
    count = max(n // 5, 200)
    paths = [sample_brownian_excursion(100, gen) for gen in split(rng, count)]
    mid = np.array([p.values[50] for p in paths])
    quarter = np.array([p.values[25] for p in paths])
    interior = min(float(np.min(p.values[1:-1])) for p in paths)
    ends = max(max(abs(p.values[0]), abs(p.values[-1])) for p in paths)
    return combine(
        [
            moment_outcome(moment_check(mid, math.sqrt(2 / math.pi)), "e(1/2) mean"),
            ks_outcome(
                ks_one_sample(quarter**2 / (0.25 * 0.75), scipy.stats.chi2(3).cdf),
                count,
                P,
                "e(1/4) chi-square",
            ),
            exact_outcome(float(ends), 0.0, count, "endpoints"),
            exact_outcome(0.0 if interior > 0 else 1.0, 0.0, count, "interior positive"),
        ]
    )


@register("samplers", "bes3_marginals")
def bes3_marginals(n: int, rng: RngStream) -> Outcome:
    """R_1² is χ²(3, μ²), and E[R_T²/T²] = μ² + 3/T at T = 100."""
    count = max(n // 2, 200)
    outcomes = []
    streams = split(rng, 3)
    for mu, stream in zip((0.0, 1.5), streams[:2]):
        r1 = np.array(
            [sample_bes3_drift(mu, 1.0, 0.05, g).values[-1] for g in split(stream, count)]
        )
        law = scipy.stats.chi2(3) if mu == 0 else scipy.stats.ncx2(3, mu * mu)
        outcomes.append(ks_outcome(ks_one_sample(r1**2, law.cdf), count, P, f"R_1 at mu={mu}"))
    horizon, mu = 100.0, 1.5
    ends = np.array(
        [
            sample_bes3_drift(mu, horizon, 1.0, g).values[-1]
            for g in split(streams[2], max(n // 20, 100))
        ]
    )
    outcomes.append(
        moment_outcome(moment_check(ends**2 / horizon**2, mu**2 + 3 / horizon), "R_T/T")
    )
    return combine(outcomes)


@register("samplers", "williams_decomposition")
def williams_decomposition(n: int, rng: RngStream) -> Outcome:
    """The Williams construction has N(μ, 1) marginals at t = 1 and an Exp(2μ) minimum."""
    outcomes = []
    for mu, stream in zip((0.5, 2.0), split(rng, 2)):
        draws = [sample_williams_path(mu, 1.0, 0.05, g) for g in split(stream, n)]
        h1 = np.array([d.path.values[-1] for d in draws])
        depth = np.array([-d.minimum for d in draws])
        outcomes.append(
            ks_outcome(ks_one_sample(h1, scipy.stats.norm(mu, 1).cdf), n, P, f"H_1 at mu={mu}")
        )
        outcomes.append(
            ks_outcome(
                ks_one_sample(depth, scipy.stats.expon(scale=1 / (2 * mu)).cdf),
                n,
                P,
                f"minimum at mu={mu}",
            )
        )
    return combine(outcomes)


@register("samplers", "bessel_from_minimum")
def bessel_from_minimum(n: int, rng: RngStream) -> Outcome:
    """BES(3, μ) from b built at its minimum matches the conditioned-BM oracle at t = 1."""
    b, mu = 1.0, 1.0
    count = max(n // 2, 200)
    built_stream, oracle_stream = split(rng, 2)
    draws = [sample_bessel_from_min(b, mu, 0.05, g) for g in split(built_stream, count)]
    built = np.array([d.path.values[-1] for d in draws])
    oracle = sample_conditioned_bm_marginal(b, mu, 1.0, 0.02, count, oracle_stream)
    minimum = np.array([d.minimum for d in draws])
    return combine(
        [
            ks_outcome(ks_two_sample(built, oracle), count, P, "marginal at t=1"),
            moment_outcome(moment_check(minimum, bessel_minimum_mean(b, mu)), "minimum level"),
        ]
    )


@register("samplers", "frak_T_pathwise", slow=True)
def frak_T_pathwise(n: int, rng: RngStream) -> Outcome:
    """First meeting of the post-D path with αt against the law of τ."""
    count = max(n // 5, 200)
    draws = sample_frak_T_pathwise(DRIFTLESS, count, 20.0, rng)
    return ks_outcome(ks_one_sample(draws, frak_T_cdf(DRIFTLESS)), count, P)


@register("samplers", "post_D_growth")
def post_D_growth(n: int, rng: RngStream) -> Outcome:
    """X_{D+T} − X_D ≈ βT: E[(W_T + αT)²] = (α+β)²T² + 3T at T = 100, β = 0.5."""
    params = LawParams(alpha=1.0, beta=0.5)
    horizon = 100.0
    ends = np.array(
        [
            sample_post_D(params, horizon, 1.0, g).values[-1]
            for g in split(rng, max(n // 20, 100))
        ]
    )
    radius = ends + params.alpha * horizon
    target = (params.alpha + params.beta) ** 2 + 3 / horizon
    return moment_outcome(moment_check(radius**2 / horizon**2, target))


@register("samplers", "generic_path_features")
def generic_path_features(n: int, rng: RngStream) -> Outcome:
    """Assembled excursion paths agree with their features."""
    count = max(n // 100, 20)
    worst = 0.0
    positivity = 0.0
    for params, stream in zip((DRIFTLESS, DRIFTED), split(rng, 2)):
        a = params.alpha
        for gen in split(stream, count):
            exc = sample_generic_excursion(params, 1e-3, gen)
            f = exc.features
            path = exc.path
            errors = [
                abs(path.values[0]),
                abs(path.values[-1] - f.w_zeta),
                abs(path.tmax - f.zeta),
                abs(f.L + f.zeta_minus_L - f.zeta),
                max(abs(f.w_zeta) - a * f.zeta, 0.0),
                max(-f.L, f.L - f.zeta, 0.0),
            ]
            worst = max(worst, max(errors) / max(1.0, f.zeta))
            frak_e = path.values + a * np.asarray(path.times)
            positivity = max(positivity, max(-float(np.min(frak_e[1:-1], initial=1.0)), 0.0))
    return combine(
        [
            exact_outcome(worst, 1e-9, 2 * count, "path and features"),
            exact_outcome(positivity, 1e-12, 2 * count, "excursion stays above 0"),
        ]
    )


@register("samplers", "D_decomposition_law", slow=True)
def D_decomposition_law(n: int, rng: RngStream) -> Outcome:
    """D = T′ + T̃″ against the first contact after 0 on simulated paths."""
    count = max(n // 2, 200)
    dt = 1e-3
    decomposed_stream, path_stream = split(rng, 2)
    batch = [sample_D_decomposition(DRIFTLESS, dt, decomposed_stream) for _ in range(count)]
    spec = BrownianWithDrift(beta=0.0)
    window = recipe_window(DRIFTLESS.alpha)
    pathwise = np.empty(count)
    for i, gen in enumerate(split(path_stream, count)):
        path = simulate_brownian_two_sided(spec, window, dt, gen)
        _, d_idx = recipe_indices(path, DRIFTLESS.alpha)
        pathwise[i] = (d_idx - (path.origin_index or 0)) * dt
    decomposed = np.array([d.D for d in batch])
    gamma = np.array([-d.gamma for d in batch])
    return combine(
        [
            ks_outcome(ks_two_sample(decomposed, pathwise), count, P, "D"),
            moment_outcome(
                moment_check(gamma, 1 / (2 * (DRIFTLESS.alpha - DRIFTLESS.beta))), "E[-Gamma]"
            ),
        ]
    )


@register("samplers", "argmin_methods_agree")
def argmin_methods_agree(n: int, rng: RngStream) -> Outcome:
    """The grid and Williams argmin samplers draw the same law."""
    count = max(n // 5, 200)
    mu = 1.0
    grid_stream, exact_stream = split(rng, 2)
    grid = np.array([argmin_time_grid(mu, 1e-3, g) for g in split(grid_stream, count)])
    exact = np.array([argmin_time_williams(mu, g) for g in split(exact_stream, count)])
    return ks_outcome(ks_two_sample(grid, exact), count, P)


@register("samplers", "pathwise_direct_zeta", slow=True)
def pathwise_direct_zeta(n: int, rng: RngStream) -> Outcome:
    """Lifetimes extracted from fine simulated paths against direct ζ draws."""
    target = 2 * n
    path_stream, direct_stream = split(rng, 2)
    pathwise = collect_pathwise(
        DRIFTLESS, max(target // 350, 10), path_stream, dt=1e-4, window=(-20.0, 200.0)
    )
    zeta = pathwise.lifetimes[:target]
    direct = sample_features_direct_batch(DRIFTLESS, target, direct_stream).zeta
    return ks_outcome(ks_two_sample(zeta, direct), int(zeta.size), P)
