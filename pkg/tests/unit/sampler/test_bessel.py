"""
Unit tests for Brownian excursions and Bessel(3) samplers.
"""

import numpy as np
import pytest
from scipy import stats

from src.core.config import settings
from src.core.exceptions import (
    InsufficientSamplesError,
    LawDomainError,
    PathError,
    StepCapExceededError,
)
from src.sampler.bessel import (
    bes3_drift_at,
    bessel_minimum_mean,
    brownian_at,
    brownian_excursion_at,
    check_step_cap,
    first_passage_segment,
    sample_bes3_drift,
    sample_bessel_from_min,
    sample_brownian_excursion,
    sample_conditioned_bm_marginal,
    sample_minimum_level,
    sample_williams_path,
)


class TestBrownianAt:
    """Test brownian_at."""

    def test_shape_and_variance(self, gen):
        """W_1 in three dimensions has unit variance per coordinate."""
        w = np.stack([brownian_at(np.array([0.5, 1.0]), gen, dim=3)[:, 1] for _ in range(4000)])
        assert w.shape == (4000, 3)
        np.testing.assert_allclose(np.var(w, axis=0), 1.0, rtol=0.1)

    def test_decreasing_times_rejected(self, gen):
        """Times must be nondecreasing."""
        with pytest.raises(PathError):
            brownian_at(np.array([1.0, 0.5]), gen)


class TestBrownianExcursion:
    """Test the standard Brownian excursion."""

    def test_pinned_ends(self, stream):
        """e(0) = e(1) = 0 and e > 0 in between."""
        path = sample_brownian_excursion(1000, stream)
        assert path.values[0] == 0.0
        assert path.values[-1] == 0.0
        assert np.all(path.values[1:-1] > 0)
        assert path.tmax == pytest.approx(1.0)

    def test_marginal_is_scaled_chi3(self, gen):
        """e(u) / √(u(1 − u)) is χ with 3 degrees of freedom."""
        u = 0.3
        draws = np.array([brownian_excursion_at(np.array([u]), gen)[0] for _ in range(3000)])
        scaled = draws / np.sqrt(u * (1 - u))
        assert stats.kstest(scaled, stats.chi(3).cdf).pvalue > 1e-3

    def test_too_few_steps(self, stream):
        """A single step is not an excursion grid."""
        with pytest.raises(PathError):
            sample_brownian_excursion(1, stream)


class TestFirstPassageSegment:
    """Test first_passage_segment."""

    def test_endpoints_and_level(self, gen):
        """Starts at 0, ends at −depth and never goes below it."""
        times = np.linspace(0.0, 2.0, 401)
        values = first_passage_segment(1.5, 2.0, times, gen)
        assert values[0] == pytest.approx(0.0, abs=1e-12)
        assert values[-1] == pytest.approx(-1.5, abs=1e-12)
        assert np.all(values >= -1.5 - 1e-12)

    def test_zero_depth(self, gen):
        """A zero drop is a constant path."""
        np.testing.assert_array_equal(first_passage_segment(0.0, 1.0, np.ones(3), gen), 0.0)


class TestBes3Drift:
    """Test the BES(3, μ) samplers."""

    def test_driftless_marginal(self, gen):
        """Without drift R_t / √t is χ with 3 degrees of freedom."""
        draws = np.array([bes3_drift_at(np.array([2.0]), 0.0, gen)[0] for _ in range(3000)])
        assert stats.kstest(draws / np.sqrt(2.0), stats.chi(3).cdf).pvalue > 1e-3

    def test_second_moment(self, gen):
        """E[R_T²] = 3T + μ²T²."""
        draws = np.array([bes3_drift_at(np.array([1.5]), 2.0, gen)[0] for _ in range(20000)])
        assert np.mean(draws**2) == pytest.approx(3 * 1.5 + 4.0 * 1.5**2, rel=0.03)

    def test_grid_path(self, stream):
        """The grid path starts at 0, stays nonnegative and covers the horizon."""
        path = sample_bes3_drift(1.0, 2.0, 1e-2, stream)
        assert path.values[0] == 0.0
        assert np.all(path.values >= 0)
        assert path.tmax >= 2.0 - 1e-12

    @pytest.mark.parametrize(
        "mu,horizon,dt,error",
        [(-1.0, 1.0, 0.1, LawDomainError), (1.0, 1.0, 0.0, PathError), (1.0, 0.0, 0.1, PathError)],
    )
    def test_invalid_arguments(self, stream, mu, horizon, dt, error):
        """Negative drift and empty grids are rejected."""
        with pytest.raises(error):
            sample_bes3_drift(mu, horizon, dt, stream)

    def test_step_cap(self, stream, monkeypatch):
        """Grids over LIPMIN_MAX_PATH_STEPS are refused."""
        monkeypatch.setattr(settings, "max_path_steps", 10)
        check_step_cap(10)
        with pytest.raises(StepCapExceededError):
            sample_bes3_drift(1.0, 1.0, 1e-2, stream)


class TestWilliamsPath:
    """Test the Williams decomposition sampler."""

    def test_minimum_at_switch(self, stream):
        """The path starts at 0 and never goes below the sampled minimum."""
        split = sample_williams_path(1.0, 5.0, 1e-3, stream)
        values = split.path.values
        assert values[0] == pytest.approx(0.0, abs=1e-12)
        assert split.minimum <= 0.0
        assert np.all(values >= split.minimum - 1e-12)
        assert split.switch_time >= 0.0

    def test_minimum_law(self, gen):
        """−minimum is Exp(2μ) and X_T has mean μT."""
        mu, horizon = 1.5, 2.0
        splits = [sample_williams_path(mu, horizon, 1e-2, gen) for _ in range(600)]
        depth = np.array([-s.minimum for s in splits])
        final = np.array([s.path.values[-1] for s in splits])
        assert stats.kstest(depth, stats.expon(scale=1 / (2 * mu)).cdf).pvalue > 1e-3
        assert np.mean(final) == pytest.approx(mu * horizon, abs=4 * np.sqrt(horizon / 600))

    def test_nonpositive_drift(self, stream):
        """Williams' decomposition needs μ > 0."""
        with pytest.raises(LawDomainError):
            sample_williams_path(0.0, 1.0, 1e-2, stream)


class TestBesselFromMinimum:
    """Test BES(3, μ) from b > 0 decomposed at its minimum."""

    def test_minimum_level_law(self, gen):
        """g lies in [0, b] with the mean of the density ∝ e^{2μx}."""
        b, mu = 1.0, 0.75
        draws = np.array([sample_minimum_level(b, mu, gen) for _ in range(20000)])
        assert np.all((draws >= 0) & (draws <= b))
        assert np.mean(draws) == pytest.approx(bessel_minimum_mean(b, mu), rel=0.02)

    def test_path(self, stream):
        """The path starts at b and stays above its minimum g > 0."""
        split = sample_bessel_from_min(1.0, 1.0, 1e-3, stream, horizon=3.0)
        assert split.path.values[0] == pytest.approx(1.0, abs=1e-12)
        assert 0.0 <= split.minimum <= 1.0
        assert np.all(split.path.values >= split.minimum - 1e-12)

    def test_invalid_start(self, stream):
        """b must be positive."""
        with pytest.raises(LawDomainError):
            sample_bessel_from_min(0.0, 1.0, 1e-2, stream)


class TestConditionedMarginal:
    """Test the rejection sampler for Brownian motion conditioned to stay positive."""

    def test_positive_draws(self, stream):
        """Accepted values are positive and the requested count comes back."""
        draws = sample_conditioned_bm_marginal(1.0, 1.0, 1.0, 1e-2, 500, stream)
        assert draws.shape == (500,)
        assert np.all(draws > 0)

    def test_batch_limit(self, stream):
        """A single batch cannot accept every path."""
        with pytest.raises(InsufficientSamplesError):
            sample_conditioned_bm_marginal(0.1, 0.5, 1.0, 1e-2, 256, stream, max_batches=1)

    def test_invalid_start(self, stream):
        """b must be positive."""
        with pytest.raises(LawDomainError):
            sample_conditioned_bm_marginal(-1.0, 1.0, 1.0, 1e-2, 10, stream)
