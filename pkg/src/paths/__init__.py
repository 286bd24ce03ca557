"""Path representations, seeded random sources and Lévy path simulators."""

from src.paths.rng import RngStream, as_generator, split
from src.paths.simulate import (
    path_value_min_left,
    simulate_brownian_two_sided,
    simulate_compound_poisson,
)
from src.paths.types import (
    BrownianWithDrift,
    CompoundPoissonDrift,
    EventPath,
    GridPath,
    JumpLaw,
    Path,
    ProcessSpec,
    process_spec_adapter,
)

__all__ = [
    "BrownianWithDrift",
    "CompoundPoissonDrift",
    "EventPath",
    "GridPath",
    "JumpLaw",
    "Path",
    "ProcessSpec",
    "RngStream",
    "as_generator",
    "path_value_min_left",
    "process_spec_adapter",
    "simulate_brownian_two_sided",
    "simulate_compound_poisson",
    "split",
]
