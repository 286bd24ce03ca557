"""α-Lipschitz minorants, contact sets and recipe times."""

from src.minorant.engine import (
    ContactTimes,
    MinorantResult,
    RecipeTimes,
    Sawtooth,
    boundary_buffer,
    brute_force_minorant,
    check_existence,
    compute_minorant,
    contact_tolerance,
    extract_contact_set,
    minorant_at,
    recipe_indices,
    recipe_times,
    recipe_window,
    sawtooth_segment,
)

__all__ = [
    "ContactTimes",
    "MinorantResult",
    "RecipeTimes",
    "Sawtooth",
    "boundary_buffer",
    "brute_force_minorant",
    "check_existence",
    "compute_minorant",
    "contact_tolerance",
    "extract_contact_set",
    "minorant_at",
    "recipe_indices",
    "recipe_times",
    "recipe_window",
    "sawtooth_segment",
]
