"""Checks of the minorant engine against brute force and the contact recipe."""

from __future__ import annotations

import numpy as np

from src.harness.registry import Outcome, combine, exact_outcome, register
from src.minorant.engine import (
    boundary_buffer,
    brute_force_minorant,
    compute_minorant,
    extract_contact_set,
    recipe_indices,
    recipe_window,
)
from src.paths.rng import RngStream, split
from src.paths.simulate import simulate_brownian_two_sided, simulate_compound_poisson
from src.paths.types import BrownianWithDrift, CompoundPoissonDrift, GridPath, JumpLaw

BRUTE_FORCE_GRIDS = 1000
MAX_GRID_SIZE = 512


def _random_grid(gen: np.random.Generator) -> tuple[GridPath, float]:
    size = int(gen.integers(1, MAX_GRID_SIZE + 1))
    dt = float(gen.uniform(1e-3, 0.1))
    steps = np.sqrt(dt) * gen.standard_normal(size)
    steps[0] = 0.0
    offset = int(gen.integers(0, size))
    return GridPath(t0=-offset * dt, dt=dt, values=np.cumsum(steps)), float(gen.uniform(0.2, 3.0))


def _lipschitz_excess(times: np.ndarray, values: np.ndarray, alpha: float) -> float:
    if values.size < 2:
        return 0.0
    slack = 1e-12 * max(1.0, float(np.max(np.abs(values))))
    return max(float(np.max(np.abs(np.diff(values)) - alpha * np.diff(times))) - slack, 0.0)


@register("minorant", "minorant_brute_force_grid")
def minorant_brute_force_grid(n: int, rng: RngStream) -> Outcome:
    """The sweep minorant equals the O(n²) evaluation bit for bit on random grids."""
    mismatches = 0
    excess = 0.0
    for gen in split(rng, BRUTE_FORCE_GRIDS):
        path, alpha = _random_grid(gen)
        result = compute_minorant(path, alpha)
        if not np.array_equal(result.values, brute_force_minorant(path, alpha)):
            mismatches += 1
        excess = max(excess, _lipschitz_excess(np.asarray(path.times), result.values, alpha))
    return combine(
        [
            exact_outcome(float(mismatches), 0.0, BRUTE_FORCE_GRIDS, "grids differing"),
            exact_outcome(excess, 0.0, BRUTE_FORCE_GRIDS, "Lipschitz excess"),
        ]
    )


@register("minorant", "minorant_brute_force_events")
def minorant_brute_force_events(n: int, rng: RngStream) -> Outcome:
    """Same equality on compound Poisson paths, evaluated at their breakpoints."""
    count = max(n // 50, 50)
    mismatches = 0
    for gen in split(rng, count):
        spec = CompoundPoissonDrift(
            d=float(gen.uniform(-0.5, 0.5)),
            rate=float(gen.uniform(0.5, 5.0)),
            jump=JumpLaw(name="norm", params={"loc": 0.0, "scale": float(gen.uniform(0.2, 2))}),
        )
        path = simulate_compound_poisson(spec, (-10.0, 10.0), gen)
        alpha = abs(spec.d) + float(gen.uniform(0.1, 2.0))
        if not np.array_equal(
            compute_minorant(path, alpha).values, brute_force_minorant(path, alpha)
        ):
            mismatches += 1
    return exact_outcome(float(mismatches), 0.0, count, "event paths differing")


@register("minorant", "recipe_matches_first_contact")
def recipe_matches_first_contact(n: int, rng: RngStream) -> Outcome:
    """The recipe time D is the first contact point after 0 on Brownian grids."""
    count = max(n // 100, 20)
    alpha = 1.0
    spec = BrownianWithDrift(beta=0.0)
    window = recipe_window(alpha)
    mismatches = 0
    for gen in split(rng, count):
        path = simulate_brownian_two_sided(spec, window, 1e-2, gen)
        _, d_idx = recipe_indices(path, alpha)
        contacts = extract_contact_set(
            path, compute_minorant(path, alpha), buffer=boundary_buffer(alpha)
        )
        if contacts.D is None or contacts.D != float(path.times[d_idx]):
            mismatches += 1
    return exact_outcome(float(mismatches), 0.0, count, "paths where D disagrees")
