"""
Pytest configuration and shared fixtures.
"""

import numpy as np
import pytest

from src.laws.brownian import LawParams
from src.paths.rng import RngStream
from src.paths.simulate import simulate_brownian_two_sided
from src.paths.types import BrownianWithDrift, GridPath


@pytest.fixture
def stream() -> RngStream:
    """Seeded stream; each test gets the same draws on every run."""
    return RngStream(seed=20240611)


@pytest.fixture
def gen(stream: RngStream) -> np.random.Generator:
    """Generator of the shared seeded stream."""
    return stream.generator()


@pytest.fixture
def driftless() -> LawParams:
    """α = 1, β = 0: mean excursion length 1/2."""
    return LawParams(alpha=1.0, beta=0.0)


@pytest.fixture
def drifted() -> LawParams:
    """α = 2, β = 1: mean excursion length 1/6."""
    return LawParams(alpha=2.0, beta=1.0)


@pytest.fixture
def brownian_path(stream: RngStream) -> GridPath:
    """Two-sided driftless Brownian path on [-20, 20] with dt = 1e-2."""
    return simulate_brownian_two_sided(BrownianWithDrift(), (-20.0, 20.0), 1e-2, stream)


@pytest.fixture
def reset_check_id():
    """Restore the check ID context after a test that sets it."""
    from src.core.correlation import check_id_var

    token = check_id_var.set("-")
    yield
    check_id_var.reset(token)
