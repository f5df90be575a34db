"""Truncations D_{d,r,u,k} and the generalized Takagi function T_{d,r,u}.

The direct form sums the integrals of products of shifted base differences
over every increasing shift tuple; it is the cross-check oracle. The
recursive form peels off the smallest shift, moves to the rescaled measure
of the cell it lands in, and lowers the order by one; it is the production
path.

At a q-adic point x of level K every tuple whose largest shift is >= K
integrates to zero over [0, x] (each such factor has zero conditional
expectation on the level-K cells), so D is constant in k for k >= K - 1 and
T(x) is D at k = K. T(0) = 0 because the integration range is empty, and
T(1) = 0 because each full-interval integral vanishes.

Prefix-integral tables are memoized. Their keys hold the base-difference
tables themselves, so a cached entry always matches the integrand in use.
Recursive values are memoized per (context, u, k, x): first-order D_k is
D_{k-1} plus one term, and deeper orders reuse the inner values shared
between neighbouring points and depths.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from src import config
from src.core import (
    CombinatorialGuard,
    ConfigError,
    MultiIndex,
    QAdicPoint,
    SystemConfig,
    WeightVec,
    check_cells,
    locate,
    phi_apply,
)
from src.measure import MeasureContext, integral_profile, interval_measure
from src.stepfn import StepFunction, as_fraction_table, base_diff, compose_phi

from .psi import enumerate_psi

logger = logging.getLogger(__name__)

Table = tuple[Fraction, ...]


def tuple_count(u: MultiIndex, k: int) -> int:
    """C(k+1, |u|) * |u|!/u!: number of (shift tuple, psi) pairs in the direct sum."""
    if k + 1 < u.order:
        return 0
    return comb(k + 1, u.order) * (factorial(u.order) // u.factorial)


@lru_cache(maxsize=256)
def _diffs(cfg: SystemConfig, r: WeightVec) -> tuple[StepFunction, ...]:
    return tuple(base_diff(cfg, r, l) for l in range(cfg.q - 1))


def _diff_tables(mc: MeasureContext) -> tuple[Table, ...]:
    return tuple(tuple(bd.values) for bd in _diffs(mc.cfg, mc.r))


@lru_cache(maxsize=256)
def _summed_products(
    cfg: SystemConfig, tables: tuple[Table, ...], u: MultiIndex, k: int
) -> StepFunction:
    level = k + 2
    total = np.full(cfg.q**level, Fraction(0), dtype=object)
    if k + 1 < u.order:
        return StepFunction(cfg.q, level, total)

    shifted = {}
    for l in u.support():
        bd = StepFunction(cfg.q, 2, as_fraction_table(tables[l]))
        for i in range(k + 1):
            shifted[l, i] = compose_phi(bd, i, cfg).relevel(level).values

    arrangements = enumerate_psi(cfg, u)
    logger.debug(
        "direct D: |u|=%d k=%d, %d tuples x %d arrangements",
        u.order, k, comb(k + 1, u.order), len(arrangements),
    )
    for shifts in combinations(range(k + 1), u.order):
        for psi in arrangements:
            product = shifted[psi.slots[0], shifts[0]]
            for l, i in zip(psi.slots[1:], shifts[1:]):
                product = product * shifted[l, i]
            total = total + product
    return StepFunction(cfg.q, level, total)


def _check_direct(mc: MeasureContext, u: MultiIndex, k: int) -> None:
    u.check_for(mc.cfg)
    if k < 0:
        raise ConfigError(f"truncation depth must be >= 0, got {k}")
    terms = tuple_count(u, k)
    if terms > config.MAX_TUPLE_TERMS:
        raise CombinatorialGuard(
            f"direct D with |u|={u.order}, k={k} needs {terms} terms "
            f"(cap {config.MAX_TUPLE_TERMS})"
        )
    check_cells(mc.cfg.q, k + 2)


def direct_integrand(mc: MeasureContext, u: MultiIndex, k: int) -> StepFunction:
    """
    The level-(k+2) step function summed inside the direct D.

    Sum over 0 <= i_1 < ... < i_|u| <= k and every psi_u of
    prod_m base_diff(psi(m)) o phi^{i_m}.
    """
    _check_direct(mc, u, k)
    return _summed_products(mc.cfg, _diff_tables(mc), u, k)


@lru_cache(maxsize=256)
def _direct_profile(
    mc: MeasureContext, tables: tuple[Table, ...], u: MultiIndex, k: int, level: int
) -> np.ndarray:
    return integral_profile(mc, _summed_products(mc.cfg, tables, u, k), level)


@lru_cache(maxsize=1024)
def _base_profile(mc: MeasureContext, table: Table, level: int) -> np.ndarray:
    f = StepFunction(mc.cfg.q, 2, as_fraction_table(table))
    return integral_profile(mc, f, level)


def _base_integral(mc: MeasureContext, table: Table, y: QAdicPoint) -> Fraction:
    """The integral of a level-2 function over [0, y]."""
    level = max(2, y.level)
    return _base_profile(mc, table, level)[y.cells_below(level)]


def takagi_D_direct(mc: MeasureContext, u: MultiIndex, k: int, x: QAdicPoint) -> Fraction:
    """D_{d,r,u,k}(x) by summing over every shift tuple and arrangement."""
    _check_direct(mc, u, k)
    if x.is_zero or tuple_count(u, k) == 0:
        return Fraction(0)
    level = max(k + 2, x.level)
    profile = _direct_profile(mc, _diff_tables(mc), u, k, level)
    return profile[x.cells_below(level)] / mc.cfg.q


def takagi_D_recursive(mc: MeasureContext, u: MultiIndex, k: int, x: QAdicPoint) -> Fraction:
    """D_{d,r,u,k}(x) by the order-lowering recursion."""
    if k < 0:
        raise ConfigError(f"truncation depth must be >= 0, got {k}")
    u.check_for(mc.cfg)
    return _recursive(mc, u, k, x)


@lru_cache(maxsize=1 << 17)
def _recursive(mc: MeasureContext, u: MultiIndex, k: int, x: QAdicPoint) -> Fraction:
    cfg = mc.cfg
    if x.is_zero or k + 1 < u.order:
        return Fraction(0)

    if u.order == 1:
        (l,) = u.support()
        table = _diff_tables(mc)[l]
        if k == 0:
            # the level-0 cell has no digit, so the j = 0 term stays on mu_{d,r}
            return _base_integral(mc, table, x) / cfg.q
        previous = _recursive(mc, u, k - 1, x)
        y = phi_apply(x, k)
        if y.is_zero:
            return previous
        cell = locate(x, k)
        term = interval_measure(mc, cell) * _base_integral(mc.rescaled(cell.index), table, y)
        return previous + term / cfg.q

    total = Fraction(0)
    diffs = _diffs(cfg, mc.r)
    for j in range(k - u.order + 2):
        y = phi_apply(x, j + 1)
        if y.is_zero:
            break
        shifted = phi_apply(x, j)
        cell = locate(x, j + 1)
        inner = mc.rescaled(cell.index)
        mass = interval_measure(mc, cell)
        for alpha in u.support():
            value = diffs[alpha](shifted)
            if value == 0:
                continue
            total += value * mass * _recursive(inner, u.minus(alpha), k - j - 1, y)
    return total


def takagi_T(mc: MeasureContext, u: MultiIndex, x: QAdicPoint) -> Fraction:
    """T_{d,r,u}(x) at a q-adic point, exactly."""
    u.check_for(mc.cfg)
    if x.is_zero or x.is_one:
        return Fraction(0)
    return takagi_D_recursive(mc, u, x.level, x)


def clear_caches() -> None:
    """Drop every memoized integrand and prefix table."""
    _summed_products.cache_clear()
    _direct_profile.cache_clear()
    _base_profile.cache_clear()
    _recursive.cache_clear()
    _diffs.cache_clear()
