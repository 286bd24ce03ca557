"""
Unit tests for seeded random streams.
"""

import numpy as np
import pytest

from src.paths.rng import RngStream, as_generator, split


class TestRngStream:
    """Test RngStream splitting and reproducibility."""

    def test_same_key_same_draws(self):
        """Identical (seed, stream) gives identical draws."""
        a = RngStream(7, 3).generator().standard_normal(5)
        b = RngStream(7, 3).generator().standard_normal(5)
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self):
        """Different stream indices give different draws."""
        a = RngStream(7, 0).generator().standard_normal(5)
        b = RngStream(7, 1).generator().standard_normal(5)
        assert not np.array_equal(a, b)

    def test_named_is_stable(self):
        """Named sub-streams depend only on the name."""
        a = RngStream(7).named("tau_law").generator().random()
        b = RngStream(7).named("tau_law").generator().random()
        c = RngStream(7).named("bes3_marginals").generator().random()
        assert a == b
        assert a != c

    def test_derived_changes_seed_only(self):
        """A rerun stream keeps the key but not the draws."""
        base = RngStream(7).named("x")
        rerun = base.derived(1)
        assert rerun.path == base.path
        assert rerun.seed != base.seed
        assert base.derived(0) == base

    def test_negative_seed_rejected(self):
        """Seeds must be non-negative."""
        with pytest.raises(ValueError):
            RngStream(-1)


class TestSplit:
    """Test split and as_generator."""

    def test_split_stream_matches_children(self):
        """Splitting a stream yields the generators of its children."""
        stream = RngStream(11)
        gens = split(stream, 3)
        for i, g in enumerate(gens):
            assert g.random() == stream.child(i).generator().random()

    def test_split_generator_independent(self):
        """Splitting a generator yields distinct generators."""
        a, b = split(np.random.default_rng(1), 2)
        assert a.random() != b.random()

    def test_as_generator(self):
        """Generators pass through; streams and ints are converted."""
        g = np.random.default_rng(0)
        assert as_generator(g) is g
        assert isinstance(as_generator(RngStream(1)), np.random.Generator)
        assert as_generator(5).random() == np.random.default_rng(5).random()
