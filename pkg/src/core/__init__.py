"""Exact base-q geometry and the permutation/weight context."""

from .errors import (
    QAdicError,
    ConfigError,
    NotABijection,
    OrderViolation,
    InvalidWeights,
    FieldError,
    LevelCapExceeded,
    EmptyMultiIndex,
    CombinatorialGuard,
)
from .system import (
    SystemConfig,
    WeightVec,
    MultiIndex,
    parse_rational,
    validate_config,
    sigma_power,
    sigma_inverse_power,
    permuted_weights,
)
from .qadic import (
    QAdicPoint,
    QAdicInterval,
    check_cells,
    phi_apply,
    locate,
    grid,
)

__all__ = [
    "QAdicError",
    "ConfigError",
    "NotABijection",
    "OrderViolation",
    "InvalidWeights",
    "FieldError",
    "LevelCapExceeded",
    "EmptyMultiIndex",
    "CombinatorialGuard",
    "SystemConfig",
    "WeightVec",
    "MultiIndex",
    "parse_rational",
    "validate_config",
    "sigma_power",
    "sigma_inverse_power",
    "permuted_weights",
    "QAdicPoint",
    "QAdicInterval",
    "check_cells",
    "phi_apply",
    "locate",
    "grid",
]
