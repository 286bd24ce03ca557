"""
Unit tests for the direct generic-excursion samplers.
"""

import numpy as np
import pytest
from scipy import stats

from src.core.config import settings
from src.core.exceptions import CorruptExcursionError, LawDomainError, StepCapExceededError
from src.excursions.extract import Excursion, excursion_features
from src.laws.brownian import frak_T_cdf, mean_features
from src.paths.rng import RngStream
from src.sampler.excursion import (
    Provenance,
    TauGammaSample,
    assemble_excursion,
    pathwise_excursion,
    sample_features_direct,
    sample_features_direct_batch,
    sample_generic_excursion,
    sample_inverse_gaussian_hitting,
    sample_tau_gamma,
    sample_tau_gamma_batch,
)


class TestTauGamma:
    """Test the (τ, γ̂) samplers."""

    def test_tau_matches_tabulated_cdf(self, driftless, gen):
        """τ passes a KS test against its tabulated CDF."""
        tau, _ = sample_tau_gamma_batch(driftless, 5000, gen)
        assert stats.kstest(tau, frak_T_cdf(driftless).cdf).pvalue > 1e-3

    def test_gamma_within_support(self, drifted, gen):
        """0 <= γ̂ <= 2ατ for every draw."""
        tau, gamma = sample_tau_gamma_batch(drifted, 5000, gen)
        assert np.all(tau > 0)
        assert np.all(gamma >= 0)
        assert np.all(gamma <= 2 * drifted.alpha * tau)

    def test_single_draw(self, driftless, stream):
        """One draw comes back as a validated TauGammaSample."""
        sample = sample_tau_gamma(driftless, stream)
        assert sample.tau > 0
        assert 0 <= sample.gamma_hat <= 2 * sample.tau

    def test_reproducible(self, driftless):
        """The same seed gives the same draw."""
        assert sample_tau_gamma(driftless, RngStream(5)) == sample_tau_gamma(
            driftless, RngStream(5)
        )

    def test_nonpositive_tau_rejected(self):
        """τ <= 0 is outside the law's support."""
        with pytest.raises(LawDomainError):
            TauGammaSample(tau=0.0, gamma_hat=0.0)


class TestInverseGaussianHitting:
    """Test sample_inverse_gaussian_hitting."""

    def test_mean(self, gen):
        """The hitting time of level y at drift μ has mean y/μ."""
        times = sample_inverse_gaussian_hitting(2.0, 3.0, gen, size=20000)
        assert np.mean(times) == pytest.approx(1.5, rel=0.03)

    def test_zero_level(self, gen):
        """Level 0 is hit at time 0."""
        times = sample_inverse_gaussian_hitting(1.0, np.array([0.0, 1.0, 0.0]), gen)
        assert times[0] == 0.0
        assert times[2] == 0.0
        assert times[1] > 0.0

    def test_scalar_in_scalar_out(self, gen):
        """A scalar level gives a float."""
        assert isinstance(sample_inverse_gaussian_hitting(1.0, 0.5, gen), float)

    @pytest.mark.parametrize("mu,y", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5)])
    def test_invalid_arguments(self, gen, mu, y):
        """μ <= 0 and negative levels are rejected."""
        with pytest.raises(LawDomainError):
            sample_inverse_gaussian_hitting(mu, y, gen)


class TestDirectFeatures:
    """Test the path-free feature samplers."""

    @pytest.mark.parametrize("fixture", ["driftless", "drifted"])
    def test_means(self, fixture, request, gen):
        """Sample means of ζ, L, ζ − L and W_ζ match their closed forms."""
        params = request.getfixturevalue(fixture)
        table = sample_features_direct_batch(params, 40000, gen)
        expected = mean_features(params)
        scale = expected.zeta
        assert np.mean(table.zeta) == pytest.approx(expected.zeta, rel=0.03)
        assert np.mean(table.L) == pytest.approx(expected.L, rel=0.04)
        assert np.mean(table.zeta_minus_L) == pytest.approx(expected.zeta_minus_L, rel=0.04)
        assert np.mean(table.w_zeta) == pytest.approx(expected.w_zeta, abs=0.03 * scale)

    def test_row_identities(self, drifted, gen):
        """ζ = L + (ζ − L), |W_ζ| <= αζ and H >= 0 on every row."""
        table = sample_features_direct_batch(drifted, 2000, gen)
        np.testing.assert_allclose(table.zeta, table.L + table.zeta_minus_L, rtol=1e-12)
        assert np.all(np.abs(table.w_zeta) <= drifted.alpha * table.zeta * (1 + 1e-12))
        assert np.all(table.h >= 0)

    def test_single_row(self, driftless, stream):
        """sample_features_direct returns one consistent row."""
        feats = sample_features_direct(driftless, stream)
        assert feats.zeta == pytest.approx(feats.L + feats.zeta_minus_L)
        assert feats.L > 0


class TestGenericExcursion:
    """Test the assembled excursion paths."""

    def test_path_matches_features(self, driftless, stream):
        """ζ, L and W_ζ read off the path agree with the sampled features."""
        exc = sample_generic_excursion(driftless, 1e-3, stream)
        path = exc.path
        assert path.values[0] == pytest.approx(0.0, abs=1e-12)
        assert path.values[-1] == pytest.approx(exc.features.w_zeta, abs=1e-12)
        assert path.times[-1] == pytest.approx(exc.lifetime)

        recomputed = excursion_features(
            Excursion(start=0.0, times=np.asarray(path.times), values=path.values),
            driftless.alpha,
        )
        assert recomputed.zeta == pytest.approx(exc.features.zeta, rel=1e-9)
        assert recomputed.L == pytest.approx(exc.features.L, rel=1e-9)
        assert recomputed.w_zeta == pytest.approx(exc.features.w_zeta, abs=1e-9)

    def test_path_above_tent(self, drifted, gen):
        """The path stays above min(αt, W_ζ + α(ζ − t))."""
        for _ in range(20):
            exc = sample_generic_excursion(drifted, 1e-3, gen)
            t = np.asarray(exc.path.times)
            tent = np.minimum(
                drifted.alpha * t, exc.features.w_zeta + drifted.alpha * (exc.lifetime - t)
            )
            assert np.all(exc.path.values >= tent - 1e-9)

    def test_provenance(self, driftless, stream):
        """Direct excursions carry their (τ, γ̂) split and hitting time."""
        exc = sample_generic_excursion(driftless, 1e-2, stream)
        assert exc.provenance is Provenance.DIRECT
        assert exc.tau_gamma is not None
        assert exc.lifetime == pytest.approx(exc.tau_gamma.tau + exc.hitting_time)

    def test_assemble_fixed_split(self, driftless, gen):
        """A fixed (τ, γ̂, T̃) gives L = τ − γ̂/(2α) and ζ = τ + T̃."""
        exc = assemble_excursion(driftless, 0.5, 0.4, 0.3, 1e-3, gen)
        assert exc.lifetime == pytest.approx(0.8)
        assert exc.features.L == pytest.approx(0.3)
        assert exc.features.h >= 0.0

    def test_step_cap(self, driftless, stream, monkeypatch):
        """Draws over the step cap are resampled, then the error propagates."""
        monkeypatch.setattr(settings, "max_path_steps", 1)
        with pytest.raises(StepCapExceededError):
            sample_generic_excursion(driftless, 1e-3, stream)


class TestPathwiseExcursion:
    """Test pathwise_excursion."""

    def test_wraps_grid_excursion(self):
        """An equally spaced excursion becomes a pathwise SampledExcursion."""
        exc = Excursion(start=3.0, times=np.array([0.0, 1.0, 2.0]), values=np.array([0, 1.5, 0]))
        wrapped = pathwise_excursion(exc, 1.0)
        assert wrapped.provenance is Provenance.PATHWISE
        assert wrapped.path.dt == 1.0
        assert wrapped.features.L == 1.0

    def test_uneven_grid_rejected(self):
        """Unequal spacing is refused."""
        exc = Excursion(start=0.0, times=np.array([0.0, 1.0, 3.0]), values=np.array([0, 1.5, 0]))
        with pytest.raises(CorruptExcursionError):
            pathwise_excursion(exc, 1.0)
