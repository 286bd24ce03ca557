"""Direct samplers realizing the Brownian path decompositions."""

from src.sampler.bessel import (
    SplitPath,
    bessel_minimum_mean,
    sample_bes3_drift,
    sample_bessel_from_min,
    sample_brownian_excursion,
    sample_conditioned_bm_marginal,
    sample_williams_path,
)
from src.sampler.decomposition import (
    DDecomposition,
    SampledStraddle,
    StraddlingBatch,
    StraddlingSample,
    first_crossing,
    first_frak_T,
    frak_T_times,
    post_D_at,
    sample_D_decomposition,
    sample_D_decomposition_batch,
    sample_frak_T_pathwise,
    sample_post_D,
    sample_straddling_batch,
    sample_straddling_excursion,
    sample_straddling_features,
)
from src.sampler.excursion import (
    Provenance,
    SampledExcursion,
    TauGammaSample,
    pathwise_excursion,
    sample_features_direct,
    sample_features_direct_batch,
    sample_generic_excursion,
    sample_inverse_gaussian_hitting,
    sample_tau_gamma,
    sample_tau_gamma_batch,
)

__all__ = [
    "DDecomposition",
    "Provenance",
    "SampledExcursion",
    "SampledStraddle",
    "SplitPath",
    "StraddlingBatch",
    "StraddlingSample",
    "TauGammaSample",
    "bessel_minimum_mean",
    "first_crossing",
    "first_frak_T",
    "frak_T_times",
    "pathwise_excursion",
    "post_D_at",
    "sample_D_decomposition",
    "sample_D_decomposition_batch",
    "sample_bes3_drift",
    "sample_bessel_from_min",
    "sample_brownian_excursion",
    "sample_conditioned_bm_marginal",
    "sample_features_direct",
    "sample_features_direct_batch",
    "sample_frak_T_pathwise",
    "sample_generic_excursion",
    "sample_inverse_gaussian_hitting",
    "sample_post_D",
    "sample_straddling_batch",
    "sample_straddling_excursion",
    "sample_straddling_features",
    "sample_tau_gamma",
    "sample_tau_gamma_batch",
    "sample_williams_path",
]
