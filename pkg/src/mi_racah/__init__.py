"""Exact construction and verification of multi-indexed (q-)Racah polynomials."""
from .multi_indexed import (
    IndexSet,
    MiSystem,
    count_zeros,
    denominator_poly,
    fit_denominator,
    fit_mi_poly,
    leading_coefficients,
    mi_poly,
)
from .params import ParameterError, ParameterSet, mirror_params, shift, twist
from .verify import CHECKS, RunConfig, run

__all__ = [
    "CHECKS", "IndexSet", "MiSystem", "ParameterError", "ParameterSet", "RunConfig",
    "count_zeros", "denominator_poly", "fit_denominator", "fit_mi_poly",
    "leading_coefficients", "mi_poly", "mirror_params", "run", "shift", "twist",
]
