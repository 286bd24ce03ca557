"""
Unit tests for the D decomposition, straddling and post-D samplers.
"""

import numpy as np
import pytest
from scipy import stats

from src.core.config import settings
from src.core.exceptions import (
    HorizonCapError,
    LawDomainError,
    PathError,
    PoolTooSmallError,
    TruncationError,
)
from src.laws.brownian import LawParams, frak_T_cdf, second_moment_zeta
from src.paths.rng import RngStream
from src.sampler.decomposition import (
    argmin_time_grid,
    argmin_time_williams,
    first_crossing,
    first_frak_T,
    frak_T_times,
    post_D_at,
    sample_D_decomposition,
    sample_D_decomposition_batch,
    sample_frak_T_pathwise,
    sample_post_D,
    sample_straddling_batch,
    sample_straddling_excursion,
    sample_straddling_features,
)


class TestArgminTime:
    """Test the time of the overall minimum of a drifted Brownian motion."""

    def test_williams_mean(self, gen):
        """The argmin of a drift-μ motion has mean 1/(2μ²)."""
        draws = np.array([argmin_time_williams(2.0, gen) for _ in range(20000)])
        assert np.all(draws >= 0)
        assert np.mean(draws) == pytest.approx(0.125, rel=0.05)

    def test_grid_mean(self, gen):
        """The grid search agrees with the exact mean up to grid bias."""
        draws = np.array([argmin_time_grid(2.0, 1e-3, gen) for _ in range(400)])
        assert np.all(draws >= 0)
        assert np.mean(draws) == pytest.approx(0.125, abs=0.06)

    def test_horizon_cap(self, gen, monkeypatch):
        """A running minimum that is still moving at the cap raises."""
        monkeypatch.setattr(settings, "horizon_cap", 0.0)
        with pytest.raises(HorizonCapError):
            argmin_time_grid(0.1, 1e-3, gen)

    def test_invalid_drift(self, gen):
        """μ must be positive."""
        with pytest.raises(LawDomainError):
            argmin_time_grid(0.0, 1e-3, gen)


class TestDDecomposition:
    """Test sample_D_decomposition."""

    def test_pieces_add_up(self, drifted, stream):
        """D = T′ + T̃″ with Γ <= 0."""
        draw = sample_D_decomposition(drifted, 1e-3, stream)
        assert draw.D == pytest.approx(draw.t_prime + draw.t_double)
        assert draw.gamma <= 0.0
        assert draw.t_prime >= 0.0 and draw.t_double >= 0.0

    def test_mean(self, driftless, gen):
        """E[D] = 1/(2(α−β)²) + 1/(2(α+β)²), which is 1 at α = 1, β = 0."""
        draws = sample_D_decomposition_batch(driftless, 20000, 1e-3, gen, method="williams")
        assert np.mean(draws) == pytest.approx(1.0, rel=0.05)

    def test_reproducible(self, drifted):
        """Equal seeds give equal draws."""
        first = sample_D_decomposition(drifted, 1e-3, RngStream(3), method="williams")
        again = sample_D_decomposition(drifted, 1e-3, RngStream(3), method="williams")
        assert first == again

    def test_unknown_method(self, driftless, stream):
        """Only the grid and Williams methods exist."""
        with pytest.raises(ValueError):
            sample_D_decomposition(driftless, 1e-3, stream, method="exact")


class TestStraddling:
    """Test the size-biased straddling samplers."""

    def test_split_uniform(self, driftless, gen):
        """U = −G/(D − G) is uniform on [0, 1)."""
        batch = sample_straddling_batch(driftless, 4000, gen)
        assert stats.kstest(batch.split, "uniform").pvalue > 1e-3

    def test_size_biased_mean(self, driftless, gen):
        """The straddling lifetime has mean E[ζ²]/E[ζ] = 2 at α = 1, β = 0."""
        batch = sample_straddling_batch(driftless, 4000, gen)
        expected = second_moment_zeta(driftless) / 0.5
        assert np.mean(batch.lifetime) == pytest.approx(expected, rel=0.1)

    def test_endpoints(self, drifted, gen):
        """G <= 0 < D and D − G is the lifetime."""
        batch = sample_straddling_batch(drifted, 500, gen)
        assert len(batch) == 500
        assert np.all(batch.G <= 0)
        assert np.all(batch.D > 0)
        np.testing.assert_allclose(batch.D - batch.G, batch.lifetime, rtol=1e-12)
        np.testing.assert_array_equal(batch.features.zeta, batch.lifetime)

    def test_single_sample(self, driftless, stream):
        """One straddling draw carries matching features."""
        sample = sample_straddling_features(driftless, stream)
        assert sample.features.zeta == sample.lifetime
        assert sample.D - sample.G == pytest.approx(sample.lifetime)

    def test_pool_too_small(self, driftless, stream):
        """Pools under LIPMIN_STRADDLE_POOL_MIN are refused."""
        too_small = settings.straddle_pool_min - 1
        with pytest.raises(PoolTooSmallError):
            sample_straddling_batch(driftless, 10, stream, pool_size=too_small)

    def test_excursion_path(self, driftless, stream):
        """The straddling path spans [G, D] and starts at (0, 0) when rebased."""
        sampled = sample_straddling_excursion(driftless, 1e-3, stream)
        straddle = sampled.straddle
        assert straddle.G <= 0.0 <= straddle.D
        assert straddle.lifetime == pytest.approx(sampled.source.lifetime)
        assert straddle.excursion.values[0] == pytest.approx(0.0, abs=1e-12)

    def test_excursion_needs_positive_dt(self, driftless, stream):
        """dt must be positive."""
        with pytest.raises(PathError):
            sample_straddling_excursion(driftless, 0.0, stream)


class TestPostD:
    """Test the path after the first positive contact."""

    def test_grid_path(self, drifted, stream):
        """X_{D+t} − X_D starts at 0 and stays above −αt."""
        path = sample_post_D(drifted, 2.0, 1e-3, stream)
        t = np.asarray(path.times)
        assert path.values[0] == 0.0
        assert np.all(path.values >= -drifted.alpha * t - 1e-12)

    def test_mean_square(self, gen):
        """(W_T + αT)² has mean (α + β)²T² + 3T."""
        params = LawParams(alpha=1.0, beta=0.5)
        horizon = 4.0
        draws = np.array([post_D_at(params, np.array([horizon]), gen)[0] for _ in range(20000)])
        shifted = (draws + params.alpha * horizon) ** 2
        assert np.mean(shifted) == pytest.approx(1.5**2 * horizon**2 + 3 * horizon, rel=0.03)


class TestFirstCrossing:
    """Test the first meeting time with the line αt."""

    def test_interpolated(self):
        """The crossing is linearly interpolated between samples."""
        times = np.array([0.0, 1.0, 2.0])
        assert first_crossing(times, np.array([0.0, 2.0, 1.0]), 1.0) == pytest.approx(1.5)

    def test_no_crossing(self):
        """A path above the line on the whole grid raises."""
        times = np.array([0.0, 1.0, 2.0])
        with pytest.raises(TruncationError):
            first_crossing(times, np.array([0.0, 2.0, 3.0]), 1.0)

    def test_grid_path(self, driftless, stream):
        """first_frak_T finds a positive crossing on a grid post-D path."""
        path = sample_post_D(driftless, 50.0, 1e-3, stream)
        assert first_frak_T(path, driftless.alpha) > 0.0

    def test_log_times(self):
        """frak_T_times starts at 0 and ends at the horizon."""
        times = frak_T_times(10.0, points=100)
        assert times.size == 101
        assert times[0] == 0.0
        assert times[-1] == pytest.approx(10.0)
        assert np.all(np.diff(times) > 0)

    def test_log_times_short_horizon(self):
        """The horizon must exceed the smallest time."""
        with pytest.raises(PathError):
            frak_T_times(1e-10)

    @pytest.mark.slow
    def test_pathwise_law(self, driftless, gen):
        """Pathwise crossing times follow the tabulated τ law."""
        draws = sample_frak_T_pathwise(driftless, 300, 50.0, gen)
        assert np.all(draws > 0)
        assert stats.kstest(draws, frak_T_cdf(driftless).cdf).pvalue > 1e-3
