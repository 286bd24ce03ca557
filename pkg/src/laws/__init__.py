"""Closed-form laws of Brownian excursions away from the contact set, and quadrature tools."""

from src.laws.brownian import (
    FeatureKind,
    HittingTimeLaw,
    LawParams,
    MeanFeatures,
    check_integral_identity,
    conditional_density_gamma,
    density_frak_T,
    density_last_exit,
    feature_cdf,
    feature_density,
    feature_laplace,
    frak_T_cdf,
    hitting_time_law,
    joint_density_tau_gamma,
    joint_density_tau_u,
    laplace_last_exit,
    levy_measure_density,
    mean_features,
    psi_joint_laplace,
    second_moment_zeta,
    straddle_laplace,
    three_variable_laplace,
)
from src.laws.quadrature import TabulatedCdf, integrate_density

__all__ = [
    "FeatureKind",
    "HittingTimeLaw",
    "LawParams",
    "MeanFeatures",
    "TabulatedCdf",
    "check_integral_identity",
    "conditional_density_gamma",
    "density_frak_T",
    "density_last_exit",
    "feature_cdf",
    "feature_density",
    "feature_laplace",
    "frak_T_cdf",
    "hitting_time_law",
    "integrate_density",
    "joint_density_tau_gamma",
    "joint_density_tau_u",
    "laplace_last_exit",
    "levy_measure_density",
    "mean_features",
    "psi_joint_laplace",
    "second_moment_zeta",
    "straddle_laplace",
    "three_variable_laplace",
]
