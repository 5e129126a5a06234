"""Coefficients, Hadamard convolutions, and boundary growth of 2-gon disk mappings."""

from .coeffs import (
    N_DIRECT_MAX,
    CoefficientTable,
    coeff_alpha_zero,
    coeff_at,
    coeff_direct,
    coeff_limit_L,
    coeff_table_recursive,
    g3_closed_form,
    normalized_G,
    normalized_g_at,
)
from .conv_analysis import (
    EPS_BOUNDARY,
    GrowthClass,
    ProbabilityEstimate,
    SequenceSpec,
    TailRule,
    VanishingReport,
    angle_fold,
    classify_pair,
    classify_sequence,
    const_sequence,
    fj_sequence,
    geom_sequence,
    g3_supermultiplicativity,
    infinite_conv_coeff,
    normalize_sequence,
    unbounded_probability_mc,
    unbounded_volume_exact,
    uniform_sum_cdf_exact,
    vanishing_coeff_diagnostic,
)
from .errors import DomainError, PrecisionError
from .series import (
    AlphaParam,
    AsymptoticEstimate,
    LogMode,
    PowerMode,
    TruncatedSeries,
    default_schedule,
    evaluate,
    hadamard,
    product_coeff_stream,
    radial_asymptotic,
    two_gon_series,
    two_gon_value,
)
from .specfun import binom_real, gamma, gamma_ratio_coeff, log_gamma

__version__ = "0.1.0"

__all__ = [
    "AlphaParam",
    "AsymptoticEstimate",
    "CoefficientTable",
    "DomainError",
    "EPS_BOUNDARY",
    "GrowthClass",
    "LogMode",
    "N_DIRECT_MAX",
    "PowerMode",
    "PrecisionError",
    "ProbabilityEstimate",
    "SequenceSpec",
    "TailRule",
    "TruncatedSeries",
    "VanishingReport",
    "angle_fold",
    "binom_real",
    "classify_pair",
    "classify_sequence",
    "coeff_alpha_zero",
    "coeff_at",
    "coeff_direct",
    "coeff_limit_L",
    "coeff_table_recursive",
    "const_sequence",
    "default_schedule",
    "evaluate",
    "fj_sequence",
    "g3_closed_form",
    "g3_supermultiplicativity",
    "gamma",
    "gamma_ratio_coeff",
    "geom_sequence",
    "hadamard",
    "infinite_conv_coeff",
    "log_gamma",
    "normalize_sequence",
    "normalized_G",
    "normalized_g_at",
    "product_coeff_stream",
    "radial_asymptotic",
    "two_gon_series",
    "two_gon_value",
    "unbounded_probability_mc",
    "unbounded_volume_exact",
    "uniform_sum_cdf_exact",
    "vanishing_coeff_diagnostic",
]
