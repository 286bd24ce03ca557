"""Deterministic identities of the closed-form laws, checked by quadrature."""

from __future__ import annotations

import math

import numpy as np

from src.harness.registry import Outcome, combine, exact_outcome, register
from src.laws.brownian import (
    FeatureKind,
    LawParams,
    check_integral_identity,
    density_frak_T,
    density_last_exit,
    feature_density,
    feature_laplace,
    hitting_time_law,
    joint_normalization,
    laplace_last_exit,
    mean_features,
    psi_joint_laplace,
    second_moment_zeta,
    three_variable_laplace,
)
from src.laws.quadrature import integrate_density, laplace_by_quadrature, moment_by_quadrature
from src.paths.rng import RngStream

RANDOM_TUPLES = 100
LAW_PARAMS = (LawParams(alpha=1.0, beta=0.0), LawParams(alpha=2.0, beta=1.0))


def _random_arguments(
    gen: np.random.Generator,
) -> tuple[LawParams, float, float, float, float]:
    """Parameters and a Ψ argument with both radicands bounded away from 0."""
    alpha = float(gen.uniform(0.5, 3.0))
    params = LawParams(alpha=alpha, beta=float(gen.uniform(-0.9, 0.9)) * alpha)
    rho1, rho2, rho3 = (float(v) for v in gen.uniform(0.0, 5.0, 3))
    lo = -((alpha - params.beta) ** 2) / (4 * alpha)
    hi = (alpha + params.beta) ** 2 / (4 * alpha)
    return params, rho1, rho2, rho3, float(gen.uniform(lo, hi))


def _relative(a: float, b: float) -> float:
    return abs(a - b) / max(1.0, abs(b))


@register("laws", "psi_time_reversal")
def psi_time_reversal(n: int, rng: RngStream) -> Outcome:
    """Ψ(ρ1, ρ2, ρ3, ρ4; α, β) = Ψ(ρ1, ρ3, ρ2, −ρ4; α, −β)."""
    gen = rng.generator()
    worst = 0.0
    for _ in range(RANDOM_TUPLES):
        params, r1, r2, r3, r4 = _random_arguments(gen)
        value = psi_joint_laplace(params, r1, r2, r3, r4)
        worst = max(worst, _relative(psi_joint_laplace(params.reversed(), r1, r3, r2, -r4), value))
    return exact_outcome(worst, 1e-12, RANDOM_TUPLES, "time reversal")


@register("laws", "psi_scaling")
def psi_scaling(n: int, rng: RngStream) -> Outcome:
    """Ψ is unchanged under (α, β, ρ1..ρ3, ρ4) → (cα, cβ, c²ρ1..c²ρ3, cρ4)."""
    gen = rng.generator()
    worst = 0.0
    for _ in range(RANDOM_TUPLES):
        params, r1, r2, r3, r4 = _random_arguments(gen)
        c = float(gen.uniform(0.2, 5.0))
        scaled = LawParams(alpha=c * params.alpha, beta=c * params.beta)
        value = psi_joint_laplace(params, r1, r2, r3, r4)
        image = psi_joint_laplace(scaled, c * c * r1, c * c * r2, c * c * r3, c * r4)
        worst = max(worst, _relative(image, value))
    return exact_outcome(worst, 1e-12, RANDOM_TUPLES, "Brownian scaling")


@register("laws", "psi_three_variable_image")
def psi_three_variable_image(n: int, rng: RngStream) -> Outcome:
    """Ψ is the (τ, γ̂, T̃) transform at the linear image of (ρ1, ρ2, ρ3, ρ4)."""
    gen = rng.generator()
    worst = 0.0
    for _ in range(RANDOM_TUPLES):
        params, r1, r2, r3, r4 = _random_arguments(gen)
        a = params.alpha
        image = three_variable_laplace(
            params, r1 + r2 + a * r4, (r3 - r2) / (2 * a) - r4, r1 + r3 - a * r4
        )
        worst = max(worst, _relative(image, psi_joint_laplace(params, r1, r2, r3, r4)))
    return exact_outcome(worst, 1e-12, RANDOM_TUPLES, "three-variable image")


@register("laws", "feature_laplace_specializations")
def feature_laplace_specializations(n: int, rng: RngStream) -> Outcome:
    """feature_laplace equals Ψ with a single nonzero argument, exactly."""
    mismatches = 0
    for params in LAW_PARAMS:
        for lam in (0.0, 0.1, 0.5, 1.0, 10.0):
            pairs = [
                (FeatureKind.ZETA, (lam, 0.0, 0.0, 0.0)),
                (FeatureKind.L_PEAK, (0.0, lam, 0.0, 0.0)),
                (FeatureKind.ZETA_MINUS_L, (0.0, 0.0, lam, 0.0)),
                (FeatureKind.W_ZETA, (0.0, 0.0, 0.0, lam / 100)),
            ]
            for kind, rho in pairs:
                value = lam / 100 if kind is FeatureKind.W_ZETA else lam
                if feature_laplace(kind, params, value) != psi_joint_laplace(params, *rho):
                    mismatches += 1
    return exact_outcome(float(mismatches), 0.0, 40, "specializations differing")


@register("laws", "integral_identity")
def integral_identity(n: int, rng: RngStream) -> Outcome:
    """∫(e^{−at} − e^{−bt})/√(2πt³) dt = √(2b) − √(2a) by quadrature."""
    worst = max(check_integral_identity(a, b) for a, b in ((1, 4), (0.25, 1), (0.5, 9), (2, 3)))
    return exact_outcome(worst, 1e-6, 4, "integral lemma")


@register("laws", "density_normalizations")
def density_normalizations(n: int, rng: RngStream) -> Outcome:
    """Every closed-form density integrates to 1."""
    outcomes: list[Outcome] = []
    for params in LAW_PARAMS:
        kinds = [FeatureKind.L_PEAK, FeatureKind.ZETA_MINUS_L]
        if params.beta == 0:
            kinds.append(FeatureKind.ZETA)
        for kind in kinds:
            mass = integrate_density(lambda x, k=kind, p=params: feature_density(k, p, x))
            outcomes.append(exact_outcome(abs(mass - 1), 1e-6, detail=f"{kind.value} {params}"))
        mass = integrate_density(lambda t, p=params: density_frak_T(p, t))
        outcomes.append(exact_outcome(abs(mass - 1), 1e-6, detail=f"tau {params}"))
        outcomes.append(
            exact_outcome(
                abs(joint_normalization(params) - 1), 1e-6, detail=f"(tau, gamma) {params}"
            )
        )
    law = hitting_time_law(1.5, 0.7)
    mass = integrate_density(law.density)
    outcomes.append(exact_outcome(abs(mass - 1), 1e-6, detail="hitting time"))
    return combine(outcomes, "density normalizations")


@register("laws", "laplace_matches_density")
def laplace_matches_density(n: int, rng: RngStream) -> Outcome:
    """Quadrature transforms of the feature densities match the closed forms."""
    outcomes: list[Outcome] = []
    for params in LAW_PARAMS:
        kinds = [FeatureKind.L_PEAK, FeatureKind.ZETA_MINUS_L]
        if params.beta == 0:
            kinds.append(FeatureKind.ZETA)
        for kind in kinds:
            for lam in (0.1, 1.0, 10.0):
                numeric = laplace_by_quadrature(
                    lambda x, k=kind, p=params: feature_density(k, p, x), lam
                )
                error = abs(numeric - feature_laplace(kind, params, lam))
                outcomes.append(exact_outcome(error, 1e-5, detail=f"{kind.value} at {lam}"))
        for lam in (0.1, 1.0):
            numeric = laplace_by_quadrature(lambda t, p=params: density_last_exit(p, t), lam)
            error = abs(numeric - laplace_last_exit(params, lam))
            outcomes.append(exact_outcome(error, 1e-5, detail=f"last exit at {lam}"))
    law = hitting_time_law(1.5, 0.7)
    error = abs(laplace_by_quadrature(law.density, 0.5) - law.laplace(0.5))
    outcomes.append(exact_outcome(error, 1e-5, detail="hitting time"))
    return combine(outcomes, "Laplace transforms")


@register("laws", "means_from_psi")
def means_from_psi(n: int, rng: RngStream) -> Outcome:
    """Central differences of Ψ at 0, and quadrature moments, reproduce the closed-form means."""
    h = 1e-5
    outcomes: list[Outcome] = []
    for params in LAW_PARAMS:
        means = mean_features(params)
        for slot, target in enumerate((means.zeta, means.L, means.zeta_minus_L, means.w_zeta)):
            up = [0.0] * 4
            down = [0.0] * 4
            up[slot], down[slot] = h, -h
            slope = (psi_joint_laplace(params, *up) - psi_joint_laplace(params, *down)) / (2 * h)
            outcomes.append(exact_outcome(abs(-slope - target), 1e-6, detail=f"slot {slot}"))
        mean_l = moment_by_quadrature(lambda x, p=params: feature_density(FeatureKind.L_PEAK, p, x))
        outcomes.append(exact_outcome(abs(mean_l - means.L), 1e-6, detail="E[L] by quadrature"))
    zeta2 = moment_by_quadrature(
        lambda x: feature_density(FeatureKind.ZETA, LAW_PARAMS[0], x), order=2
    )
    outcomes.append(
        exact_outcome(abs(zeta2 - second_moment_zeta(LAW_PARAMS[0])), 1e-6, detail="E[zeta^2]")
    )
    outcomes.append(
        exact_outcome(abs(second_moment_zeta(LAW_PARAMS[0]) - 1.0), 1e-12, detail="E[zeta^2] = 1")
    )
    return combine(outcomes, "means")


@register("laws", "last_exit_reciprocal")
def last_exit_reciprocal(n: int, rng: RngStream) -> Outcome:
    """density_frak_T is the image of density_last_exit under t → 1/t."""
    worst = 0.0
    for params in LAW_PARAMS:
        for t in np.geomspace(1e-3, 1e3, 61):
            image = density_last_exit(params, 1.0 / t) / t**2
            worst = max(worst, _relative(image, density_frak_T(params, float(t))))
    return exact_outcome(worst, 1e-12, 122, "reciprocal law")


@register("laws", "zeta_mean_closed_form")
def zeta_mean_closed_form(n: int, rng: RngStream) -> Outcome:
    """Eζ = 1/(2(α² − β²)): 1/2 at (1, 0) and 1/6 at (2, 1)."""
    errors = [
        abs(mean_features(LAW_PARAMS[0]).zeta - 0.5),
        abs(mean_features(LAW_PARAMS[1]).zeta - 1 / 6),
        abs(psi_joint_laplace(LAW_PARAMS[0], 0.5, 0, 0, 0) - 4 / (2 + 2 * math.sqrt(2))),
    ]
    return exact_outcome(max(errors), 1e-15, 3, "closed-form means")
