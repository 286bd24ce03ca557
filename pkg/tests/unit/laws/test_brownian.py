"""
Unit tests for the closed-form excursion laws.
"""

import math

import pytest
from pydantic import ValidationError
from scipy import integrate

from src.core.exceptions import LawDomainError, UnsupportedLawError
from src.laws.brownian import (
    FeatureKind,
    LawParams,
    check_integral_identity,
    conditional_density_gamma,
    density_frak_T,
    density_last_exit,
    feature_density,
    feature_laplace,
    hitting_time_law,
    joint_density_tau_gamma,
    joint_density_tau_u,
    joint_normalization,
    laplace_last_exit,
    levy_measure_density,
    mean_features,
    psi_joint_laplace,
    second_moment_zeta,
    straddle_laplace,
    three_variable_laplace,
)
from src.laws.quadrature import integrate_density, laplace_by_quadrature


class TestLawParams:
    """Test parameter validation."""

    def test_drift_must_be_below_alpha(self):
        """|β| < α is required."""
        with pytest.raises(ValidationError):
            LawParams(alpha=1.0, beta=1.0)

    def test_alpha_positive(self):
        """α must be positive."""
        with pytest.raises(ValidationError):
            LawParams(alpha=0.0)

    def test_reversed(self, drifted):
        """Time reversal flips the drift."""
        assert drifted.reversed() == LawParams(alpha=2.0, beta=-1.0)


class TestPsi:
    """Test the joint Laplace transform Ψ."""

    def test_normalization(self, drifted):
        """Ψ(0, 0, 0, 0) = 1."""
        assert psi_joint_laplace(drifted, 0, 0, 0, 0) == pytest.approx(1.0, abs=1e-15)

    def test_zeta_value(self, driftless):
        """Ψ(0.5, 0, 0, 0) = 4 / (2 + 2√2)."""
        assert psi_joint_laplace(driftless, 0.5, 0, 0, 0) == pytest.approx(0.82843, abs=1e-5)

    def test_negative_radicand(self, driftless):
        """Arguments outside the domain are rejected."""
        with pytest.raises(LawDomainError):
            psi_joint_laplace(driftless, -5.0, 0, 0, 0)

    def test_time_reversal(self, drifted):
        """Ψ(ρ1, ρ2, ρ3, ρ4; α, β) = Ψ(ρ1, ρ3, ρ2, −ρ4; α, −β)."""
        args = (0.3, 0.7, 1.1, 0.2)
        lhs = psi_joint_laplace(drifted, *args)
        rhs = psi_joint_laplace(drifted.reversed(), args[0], args[2], args[1], -args[3])
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_scaling(self, drifted):
        """Ψ is invariant under (cα, cβ, c²ρ1..3, cρ4)."""
        c = 1.7
        scaled = LawParams(alpha=c * drifted.alpha, beta=c * drifted.beta)
        lhs = psi_joint_laplace(drifted, 0.3, 0.7, 1.1, 0.2)
        rhs = psi_joint_laplace(scaled, c * c * 0.3, c * c * 0.7, c * c * 1.1, c * 0.2)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_three_variable_image(self, drifted):
        """Ψ is the three-variable transform after a linear change of variables."""
        r1, r2, r3, r4 = 0.3, 0.7, 1.1, 0.2
        a = drifted.alpha
        lhs = psi_joint_laplace(drifted, r1, r2, r3, r4)
        rhs = three_variable_laplace(
            drifted, r1 + r2 + a * r4, (r3 - r2) / (2 * a) - r4, r1 + r3 - a * r4
        )
        assert lhs == pytest.approx(rhs, rel=1e-12)


class TestFeatureLaplace:
    """Test single-feature transforms."""

    def test_zero(self, drifted):
        """Every transform is 1 at λ = 0."""
        for kind in FeatureKind:
            assert feature_laplace(kind, drifted, 0.0) == pytest.approx(1.0)

    def test_matches_psi(self, driftless):
        """ZETA is Ψ with only ρ1 set."""
        assert feature_laplace(FeatureKind.ZETA, driftless, 0.5) == psi_joint_laplace(
            driftless, 0.5, 0, 0, 0
        )

    def test_w_domain(self, driftless):
        """W_ζ's transform exists only while (α+β)² − 2αλ >= 0."""
        with pytest.raises(LawDomainError):
            feature_laplace(FeatureKind.W_ZETA, driftless, 1.0)

    def test_negative_lambda(self, driftless):
        """Lifetime transforms need λ >= 0."""
        with pytest.raises(LawDomainError):
            feature_laplace(FeatureKind.L_PEAK, driftless, -0.1)


class TestFeatureDensity:
    """Test closed-form feature densities."""

    def test_zeta_value(self, driftless):
        """f_ζ(1) = 2e^{−1/2}/√(2π) − 2Φ̄(1)."""
        assert feature_density(FeatureKind.ZETA, driftless, 1.0) == pytest.approx(0.16663, abs=1e-5)

    def test_zeta_with_drift_unsupported(self, drifted):
        """The ζ density is only closed-form for β = 0."""
        with pytest.raises(UnsupportedLawError):
            feature_density(FeatureKind.ZETA, drifted, 1.0)

    def test_w_unsupported(self, driftless):
        """W_ζ has no closed-form density."""
        with pytest.raises(UnsupportedLawError):
            feature_density(FeatureKind.W_ZETA, driftless, 1.0)

    def test_nonpositive_argument(self, driftless):
        """Densities live on (0, ∞)."""
        with pytest.raises(LawDomainError):
            feature_density(FeatureKind.L_PEAK, driftless, 0.0)

    @pytest.mark.parametrize("kind", [FeatureKind.L_PEAK, FeatureKind.ZETA_MINUS_L])
    def test_normalized(self, drifted, kind):
        """L and ζ − L densities integrate to 1."""
        mass = integrate_density(lambda t: feature_density(kind, drifted, t))
        assert mass == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("lam", [0.1, 1.0, 10.0])
    def test_laplace_consistency(self, driftless, lam):
        """The quadrature transform of the ζ density matches Ψ."""
        numeric = laplace_by_quadrature(
            lambda t: feature_density(FeatureKind.ZETA, driftless, t), lam
        )
        exact = feature_laplace(FeatureKind.ZETA, driftless, lam)
        assert numeric == pytest.approx(exact, abs=1e-5)

    def test_levy_density_matches_zeta(self):
        """The Lévy measure density equals the ζ density for β = 0."""
        assert levy_measure_density(1.0, 1.0) == pytest.approx(0.16663, abs=1e-5)
        with pytest.raises(LawDomainError):
            levy_measure_density(1.0, 0.0)


class TestMeans:
    """Test closed-form means."""

    def test_driftless(self, driftless):
        """(0.5, 0.25, 0.25, 0)."""
        assert mean_features(driftless) == pytest.approx((0.5, 0.25, 0.25, 0.0))

    def test_drifted(self, drifted):
        """(1/6, 1/8, 1/24, 1/6)."""
        assert mean_features(drifted) == pytest.approx((1 / 6, 0.125, 1 / 24, 1 / 6))

    def test_parts_add_up(self, drifted):
        """EL + E(ζ − L) = Eζ."""
        m = mean_features(drifted)
        assert m.L + m.zeta_minus_L == pytest.approx(m.zeta, rel=1e-15)

    def test_second_moment(self, driftless):
        """E[ζ²] = 1 for α = 1, β = 0."""
        assert second_moment_zeta(driftless) == pytest.approx(1.0)

    def test_second_moment_from_psi(self, drifted):
        """E[ζ²] matches a central second difference of Ψ_ζ at 0."""
        h = 1e-4

        def psi(lam: float) -> float:
            return feature_laplace(FeatureKind.ZETA, drifted, lam)

        second = (psi(2 * h) - 2 * psi(h) + psi(0.0)) / h**2
        assert second == pytest.approx(second_moment_zeta(drifted), rel=1e-2)


class TestSplitLaws:
    """Test the laws of τ, γ̂ and the last exit."""

    def test_joint_density_support(self, driftless):
        """(τ, γ̂) has no mass outside 0 <= x <= 2αt."""
        assert joint_density_tau_gamma(driftless, 1.0, 2.5) == 0.0
        with pytest.raises(LawDomainError):
            joint_density_tau_gamma(driftless, 0.0, 0.1)

    def test_joint_normalized(self, drifted):
        """The joint density of (τ, γ̂) integrates to 1."""
        assert joint_normalization(drifted) == pytest.approx(1.0, abs=1e-6)

    def test_tau_normalized(self, drifted):
        """The τ density integrates to 1."""
        mass = integrate_density(lambda t: density_frak_T(drifted, t))
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_conditional_gamma(self, driftless):
        """γ̂ given τ is a normalized truncated exponential."""
        assert conditional_density_gamma(driftless, 3.0, 1.0) == 0.0
        mass, _ = integrate.quad(lambda x: conditional_density_gamma(driftless, x, 1.0), 0.0, 2.0)
        assert mass == pytest.approx(1.0, abs=1e-6)

    def test_tau_u_support(self, drifted):
        """𝔘 lives on [0, 1]."""
        assert joint_density_tau_u(drifted, 1.0, 1.5) == 0.0
        assert joint_density_tau_u(drifted, 1.0, 0.5) > 0.0

    def test_last_exit_reciprocal(self, drifted):
        """τ and 1/τ densities are related by the change of variables."""
        t = 0.37
        assert density_frak_T(drifted, t) == pytest.approx(
            density_last_exit(drifted, 1 / t) / t**2, rel=1e-12
        )

    def test_last_exit_laplace(self, drifted):
        """The last-exit transform matches quadrature of its density."""
        numeric = laplace_by_quadrature(lambda t: density_last_exit(drifted, t), 0.5)
        assert numeric == pytest.approx(laplace_last_exit(drifted, 0.5), abs=1e-6)
        assert laplace_last_exit(drifted, 0.0) == 1.0

    def test_straddle_laplace(self, driftless):
        """The straddling transform is 1 at 0 and decreasing."""
        assert straddle_laplace(driftless, 0.0) == pytest.approx(1.0)
        assert straddle_laplace(driftless, 1.0) < straddle_laplace(driftless, 0.5)


class TestHittingTime:
    """Test the inverse Gaussian hitting-time law."""

    def test_density_value(self):
        """At μ = y = t = 1 the density is 1/√(2π)."""
        assert hitting_time_law(1.0, 1.0).density(1.0) == pytest.approx(1 / math.sqrt(2 * math.pi))

    def test_laplace_at_zero(self):
        """The transform is 1 at λ = 0."""
        assert hitting_time_law(1.5, 0.7).laplace(0.0) == 1.0

    def test_cdf_matches_density(self):
        """The scipy CDF agrees with the integrated density."""
        law = hitting_time_law(1.5, 0.7)
        mass = integrate_density(law.density)
        assert mass == pytest.approx(1.0, abs=1e-6)
        assert float(law.cdf(law.mean)[()]) > 0.5

    def test_invalid(self):
        """μ and y must be positive."""
        with pytest.raises(LawDomainError):
            hitting_time_law(0.0, 1.0)


class TestIntegralIdentity:
    """Test the integral lemma."""

    @pytest.mark.parametrize("a, b", [(1.0, 4.0), (0.25, 1.0), (2.0, 2.0)])
    def test_residual(self, a, b):
        """Quadrature matches √(2b) − √(2a)."""
        assert check_integral_identity(a, b) < 1e-6
