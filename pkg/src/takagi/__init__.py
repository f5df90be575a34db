"""Generalized Takagi functions: truncations, exact values and bounds."""

from .bounds import sup_bound, tail_bound_base
from .psi import PsiMap, enumerate_psi
from .truncation import (
    clear_caches,
    direct_integrand,
    takagi_D_direct,
    takagi_D_recursive,
    takagi_T,
    tuple_count,
)

__all__ = [
    "PsiMap",
    "clear_caches",
    "direct_integrand",
    "enumerate_psi",
    "sup_bound",
    "tail_bound_base",
    "takagi_D_direct",
    "takagi_D_recursive",
    "takagi_T",
    "tuple_count",
]
