"""Step functions on q-adic partitions."""

from .functions import base_diff, phi_l, twisted_digits, w_fn, z_fn
from .step import StepFunction, StepOp, as_fraction_table, compose_phi, step_combine

__all__ = [
    "StepFunction",
    "StepOp",
    "as_fraction_table",
    "base_diff",
    "compose_phi",
    "phi_l",
    "step_combine",
    "twisted_digits",
    "w_fn",
    "z_fn",
]
