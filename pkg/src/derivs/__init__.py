"""Exact derivatives of the distribution function and the identities that express them."""

from .classical import classical_takagi
from .poly import DerivMode, SparsePoly, cdf_polynomial, mixed_partial_oracle, weight_ring
from .theorem import (
    basechange_eval,
    derivative_transfer_eval,
    finite_difference,
    hlsrq_partial,
    hsrq_partial,
    normalized_derivative,
    theorem_rhs,
)

__all__ = [
    "DerivMode",
    "SparsePoly",
    "basechange_eval",
    "cdf_polynomial",
    "classical_takagi",
    "derivative_transfer_eval",
    "finite_difference",
    "hlsrq_partial",
    "hsrq_partial",
    "mixed_partial_oracle",
    "normalized_derivative",
    "theorem_rhs",
    "weight_ring",
]
