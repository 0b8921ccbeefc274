"""Scalars, multi-indices, Hermitian matrices and PSD testing."""

from .scalars import (
    DEFAULT_PSD_TOL,
    MACHINE_EPS,
    Backend,
    Number,
    as_array,
    format_number,
    parse_number,
    to_scalar,
)
from .multiindex import MultiIndex, grlex_key, monomial_count, monomials
from .herm import (
    ComplexVector,
    HermMatrix,
    basis_coordinates,
    basis_label,
    cadjoint,
    cmatmul,
    hermitian_basis,
)
from .jacobi import eig_min, eig_min_batch, jacobi_eigh
from .psd import (
    PsdVerdict,
    ldl_witness,
    psd_check,
    psd_check_approx,
    psd_check_exact,
    psd_check_many,
)

__all__ = [
    "DEFAULT_PSD_TOL",
    "MACHINE_EPS",
    "Backend",
    "Number",
    "as_array",
    "format_number",
    "parse_number",
    "to_scalar",
    "MultiIndex",
    "grlex_key",
    "monomial_count",
    "monomials",
    "ComplexVector",
    "HermMatrix",
    "basis_coordinates",
    "basis_label",
    "cadjoint",
    "cmatmul",
    "hermitian_basis",
    "eig_min",
    "eig_min_batch",
    "jacobi_eigh",
    "PsdVerdict",
    "ldl_witness",
    "psd_check",
    "psd_check_approx",
    "psd_check_exact",
    "psd_check_many",
]
