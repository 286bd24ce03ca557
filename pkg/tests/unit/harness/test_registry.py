"""
Unit tests for the check registry and outcome helpers.
"""

import pytest

from src.harness.registry import (
    SUITES,
    Outcome,
    checks_for,
    combine,
    exact_outcome,
    ks_outcome,
    moment_outcome,
    register,
)
from src.harness.stats import KsResult, MomentResult
from src.harness.suites import suite_names


class TestRegister:
    """Test registration."""

    def test_every_suite_has_checks(self):
        """Importing the runner registers checks for every suite."""
        for suite in SUITES:
            assert checks_for(suite, include_slow=True)

    def test_unknown_suite(self):
        """Checks can only join a known suite."""
        with pytest.raises(ValueError):
            register("nonsense", "whatever")

    def test_duplicate_name(self):
        """A check name can be registered once."""
        name = checks_for("laws")[0].name
        with pytest.raises(ValueError):
            register("laws", name)(lambda n, rng: exact_outcome(0.0, 0.0))

    def test_slow_checks_filtered(self):
        """Slow checks only appear when asked for."""
        for suite in SUITES:
            fast = checks_for(suite)
            assert all(not c.slow for c in fast)
            assert len(checks_for(suite, include_slow=True)) >= len(fast)

    def test_all_expands(self):
        """``all`` selects every suite in order."""
        assert suite_names("all") == SUITES
        assert suite_names("laws") == ("laws",)


class TestOutcomes:
    """Test the outcome builders."""

    def test_ks_threshold(self):
        """A KS outcome passes iff its p-value exceeds the threshold."""
        assert ks_outcome(KsResult(0.1, 0.2), 100, 1e-3).passed
        failing = ks_outcome(KsResult(0.5, 1e-6), 100, 1e-3)
        assert not failing.passed
        assert failing.p_value == 1e-6

    def test_moment_tolerance(self):
        """The tolerance of a moment outcome is k_sigma standard errors."""
        res = MomentResult(mean=1.01, se=0.01, target=1.0, k_sigma=3.0, n=50, passed=True)
        outcome = moment_outcome(res)
        assert outcome.tolerance == pytest.approx(0.03)
        assert outcome.target == 1.0

    def test_exact(self):
        """Exact outcomes compare an error with a tolerance."""
        assert exact_outcome(1e-13, 1e-12).passed
        assert not exact_outcome(1e-11, 1e-12).passed

    def test_combine_reports_first_failure(self):
        """A combined outcome fails with the first failing sub-check."""
        outcomes = [
            exact_outcome(0.0, 1.0, detail="a"),
            exact_outcome(2.0, 1.0, detail="b"),
            exact_outcome(3.0, 1.0, detail="c"),
        ]
        combined = combine(outcomes)
        assert not combined.passed
        assert combined.statistic == 2.0
        assert combined.detail == "a; b; c"

    def test_combine_all_pass(self):
        """When every sub-check passes the last one leads."""
        combined = combine([exact_outcome(0.0, 1.0), exact_outcome(0.5, 1.0)], detail="both")
        assert combined.passed
        assert combined.statistic == 0.5
        assert combined.detail == "both"

    def test_outcome_defaults(self):
        """Optional fields default to None."""
        outcome = Outcome(kind="exact", statistic=0.0, passed=True, n=1)
        assert outcome.p_value is None and outcome.detail is None
