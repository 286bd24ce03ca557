"""Excursions away from the contact set and their features."""

from src.excursions.extract import (
    FEATURE_COLUMNS,
    Excursion,
    ExcursionBatch,
    ExcursionFeatures,
    FeatureTable,
    StraddlingExcursion,
    batch_features,
    excursion_features,
    extract_generic_excursions,
    straddling_excursion,
)

__all__ = [
    "FEATURE_COLUMNS",
    "Excursion",
    "ExcursionBatch",
    "ExcursionFeatures",
    "FeatureTable",
    "StraddlingExcursion",
    "batch_features",
    "excursion_features",
    "extract_generic_excursions",
    "straddling_excursion",
]
