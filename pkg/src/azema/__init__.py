"""The Azéma supermartingale of the first positive contact time."""

from src.azema.supermartingale import (
    AzemaPathResult,
    AzemaSamples,
    SurvivalCurve,
    azema_integrand,
    compute_Z_D,
    ito_identity_residual,
    ito_residuals,
    sample_azema,
    survival_curve,
)

__all__ = [
    "AzemaPathResult",
    "AzemaSamples",
    "SurvivalCurve",
    "azema_integrand",
    "compute_Z_D",
    "ito_identity_residual",
    "ito_residuals",
    "sample_azema",
    "survival_curve",
]
