"""The level-2 selectors and the Radon-Nikodym step functions.

Every function here reads the twisted second digit sigma^{b_1}(b_0) of the
cell I_2(b_1 b_0); the table below is shared by all of them.
"""

import logging
from fractions import Fraction

import numpy as np

from src.core import ConfigError, SystemConfig, WeightVec, check_cells
from src.core.system import sigma_power

from .step import StepFunction, as_fraction_table

logger = logging.getLogger(__name__)


def twisted_digits(cfg: SystemConfig) -> np.ndarray:
    """Entry b_1*q + b_0 is sigma^{b_1}(b_0)."""
    table = []
    for b1 in cfg.digits:
        power = sigma_power(cfg, b1)
        table.extend(power[b0] for b0 in cfg.digits)
    return np.array(table, dtype=int)


def _check_weights(cfg: SystemConfig, *vectors: WeightVec) -> None:
    for w in vectors:
        if w.q != cfg.q:
            raise ConfigError(f"weight vector {w!r} has {w.q} components, expected {cfg.q}")


def phi_l(cfg: SystemConfig, l: int) -> StepFunction:
    """Phi_l: 1 on I_2(b_1 b_0) iff sigma^{b_1}(b_0) = l."""
    if not 0 <= l < cfg.q:
        raise ConfigError(f"Phi_l needs 0 <= l <= {cfg.q - 1}, got {l}")
    hits = twisted_digits(cfg) == l
    return StepFunction(cfg.q, 2, as_fraction_table(int(h) for h in hits))


def base_diff(cfg: SystemConfig, r: WeightVec, l: int) -> StepFunction:
    """Phi_l / r_l - Phi_{q-1} / r_{q-1}, the mean-zero integrand of every Takagi sum."""
    if not 0 <= l <= cfg.q - 2:
        raise ConfigError(f"base difference needs 0 <= l <= {cfg.q - 2}, got {l}")
    _check_weights(cfg, r)
    last = cfg.q - 1
    twisted = twisted_digits(cfg)
    values = []
    for t in twisted:
        if t == l:
            values.append(1 / r[l])
        elif t == last:
            values.append(-1 / r[last])
        else:
            values.append(Fraction(0))
    return StepFunction(cfg.q, 2, as_fraction_table(values))


def w_fn(cfg: SystemConfig, s: WeightVec, r: WeightVec) -> StepFunction:
    """W[s; r]: value s_t / r_t on I_2(b_1 b_0) with t = sigma^{b_1}(b_0)."""
    _check_weights(cfg, s, r)
    ratios = [s[t] / r[t] for t in cfg.digits]
    return StepFunction(cfg.q, 2, as_fraction_table(ratios[t] for t in twisted_digits(cfg)))


def z_fn(
    cfg: SystemConfig,
    e: WeightVec,
    s: WeightVec,
    d: WeightVec,
    r: WeightVec,
    k: int,
) -> StepFunction:
    """
    Z_k: the density of mu_{e,s} against mu_{d,r} on the level-k cells.

    Value on I_k(n) is mu_{e,s}(I_k(n)) / mu_{d,r}(I_k(n)); Z_0 is 1.
    """
    # measure imports the step algebra, so the dependency stays local here
    from src.measure.mu import MeasureContext, mass_table

    _check_weights(cfg, e, s, d, r)
    if k < 0:
        raise ConfigError(f"level must be >= 0, got {k}")
    check_cells(cfg.q, k)
    top = mass_table(MeasureContext(cfg, e, s), k)
    bottom = mass_table(MeasureContext(cfg, d, r), k)
    logger.debug("Z_%d over %d cells", k, len(top))
    return StepFunction(cfg.q, k, top / bottom)
