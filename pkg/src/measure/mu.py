"""The permutation-twisted measure mu_{d,r} and its distribution function.

The mass of I_k(n_{k-1}...n_0) is d_{n_{k-1}} times the factors
r_{sigma^{n_{i+1}}(n_i)} for consecutive digit pairs. Everything below is
either that product (interval_measure, cdf) or a dense level-M mass table
weighted against a step function (integrals and conditional expectations).
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, TypeVar

import numpy as np

from src.core import (
    ConfigError,
    QAdicInterval,
    QAdicPoint,
    SystemConfig,
    WeightVec,
    check_cells,
    permuted_weights,
)
from src.core.system import sigma_power
from src.stepfn.step import StepFunction

logger = logging.getLogger(__name__)

V = TypeVar("V")


@dataclass(frozen=True)
class MeasureContext:
    """The parameters (sigma, d, r) of mu_{d,r}."""

    cfg: SystemConfig

    d: WeightVec
    """First-level weights: mu(I_1(n)) = d_n."""

    r: WeightVec
    """Refinement weights, twisted by sigma at every deeper level."""

    def __post_init__(self) -> None:
        for name, w in (("d", self.d), ("r", self.r)):
            if w.q != self.cfg.q:
                raise ConfigError(f"{name} has {w.q} components, expected {self.cfg.q}")

    @classmethod
    def coupled(cls, cfg: SystemConfig, r: WeightVec) -> "MeasureContext":
        """mu_{r,r}, whose distribution function is L_r."""
        return cls(cfg, r, r)

    @classmethod
    def uniform_first(cls, cfg: SystemConfig, r: WeightVec) -> "MeasureContext":
        """mu_{q,r}: uniform first digit, r below it."""
        return cls(cfg, WeightVec.uniform(cfg.q), r)

    def rescaled(self, n: int) -> "MeasureContext":
        """mu_{r_{sigma^n}, r}, the measure seen inside a cell whose last digit is n."""
        return MeasureContext(self.cfg, permuted_weights(self.cfg, self.r, n), self.r)

    def transition(self, prev: int, digit: int) -> Fraction:
        """r_{sigma^{prev}(digit)}."""
        return self.r[sigma_power(self.cfg, prev)[digit]]

    def transition_table(self) -> np.ndarray:
        """Entry b_1*q + b_0 is r_{sigma^{b_1}(b_0)}."""
        q = self.cfg.q
        table = []
        for b1 in range(q):
            power = sigma_power(self.cfg, b1)
            table.extend(self.r[power[b0]] for b0 in range(q))
        return np.array(table, dtype=object)

    def to_dict(self) -> dict:
        return {**self.cfg.to_dict(), "d": self.d.to_list(), "r": self.r.to_list()}


def _check_base(mc: MeasureContext, q: int) -> None:
    if q != mc.cfg.q:
        raise ConfigError(f"object has base {q}, measure has base {mc.cfg.q}")


def interval_measure(mc: MeasureContext, iv: QAdicInterval) -> Fraction:
    """mu_{d,r}(I_k(n)) by the closed product over the digit word."""
    _check_base(mc, iv.q)
    if iv.level == 0:
        return Fraction(1)
    digits = iv.digits()
    mass = mc.d[digits[0]]
    for prev, digit in zip(digits, digits[1:]):
        mass *= mc.transition(prev, digit)
    return mass


def mass_table(mc: MeasureContext, k: int) -> np.ndarray:
    """
    All level-k masses as a read-only object array indexed by n.

    Built level by level: the children of a cell with last digit b_1 get
    the factors r_{sigma^{b_1}(c)}, which is a tile of the q^2 transition
    table. Tables are memoized per (context, level); lru_cache is thread-safe.
    """
    check_cells(mc.cfg.q, k)
    return _mass_table(mc, k)


@lru_cache(maxsize=64)
def _mass_table(mc: MeasureContext, k: int) -> np.ndarray:
    q = mc.cfg.q
    if k == 0:
        masses = np.array([Fraction(1)], dtype=object)
    else:
        masses = np.array(list(mc.d), dtype=object)
        transitions = mc.transition_table()
        for level in range(2, k + 1):
            masses = np.repeat(masses, q) * np.tile(transitions, q ** (level - 2))
    logger.debug("mass table level %d: %d cells", k, len(masses))
    masses.flags.writeable = False
    return masses


def cdf_from_masses(
    x: QAdicPoint,
    first: Callable[[int], V],
    transition: Callable[[int, int], V],
    zero: V,
    one: V,
) -> V:
    """
    Greedy prefix sum for mu([0, x)) over any commutative ring of values.

    [0, a_1...a_K) is the union over i of the cells a_1...a_{i-1}c with
    c < a_i; the running prefix product is extended by one factor per digit.
    """
    if x.is_one:
        return one
    total, prefix, prev = zero, one, None
    for digit in x.digits():
        factor = first if prev is None else (lambda c, p=prev: transition(p, c))
        for c in range(digit):
            total = total + prefix * factor(c)
        prefix = prefix * factor(digit)
        prev = digit
    return total


def cdf(mc: MeasureContext, x: QAdicPoint) -> Fraction:
    """L_{d,r}(x) = mu_{d,r}([0, x]); points carry no mass."""
    _check_base(mc, x.q)
    return Fraction(
        cdf_from_masses(x, lambda c: mc.d[c], mc.transition, Fraction(0), Fraction(1))
    )


def _weighted_cells(mc: MeasureContext, f: StepFunction, level: int) -> np.ndarray:
    _check_base(mc, f.q)
    level = max(level, f.level)
    return f.relevel(level).values * mass_table(mc, level)


def _total(values: np.ndarray) -> Fraction:
    return Fraction(sum(values, Fraction(0)))


def integral_profile(mc: MeasureContext, f: StepFunction, level: int = 0) -> np.ndarray:
    """Prefix integrals: entry n is the integral of f over [0, n/q^M], M = max(level, f.level)."""
    weighted = _weighted_cells(mc, f, level)
    profile = np.empty(len(weighted) + 1, dtype=object)
    profile[0] = Fraction(0)
    profile[1:] = np.cumsum(weighted)
    return profile


def integrate_step(mc: MeasureContext, f: StepFunction, x: QAdicPoint) -> Fraction:
    """The integral of f over [0, x] against mu_{d,r}."""
    _check_base(mc, x.q)
    if x.is_zero:
        return Fraction(0)
    level = max(f.level, x.level)
    weighted = _weighted_cells(mc, f, level)
    return _total(weighted[: x.cells_below(level)])


def expectation(mc: MeasureContext, f: StepFunction, iv: QAdicInterval) -> Fraction:
    """E(f; iv): the integral of f over iv."""
    _check_base(mc, iv.q)
    level = max(f.level, iv.level)
    cells = iv.cell_range(level)
    return _total(_weighted_cells(mc, f, level)[cells.start : cells.stop])


def partial_expectation(
    mc: MeasureContext, f: StepFunction, iv: QAdicInterval, x: QAdicPoint
) -> Fraction:
    """The integral of f over iv intersected with [0, x]."""
    _check_base(mc, iv.q)
    _check_base(mc, x.q)
    level = max(f.level, iv.level, x.level)
    cells = iv.cell_range(level)
    stop = min(cells.stop, x.cells_below(level))
    if stop <= cells.start:
        return Fraction(0)
    return _total(_weighted_cells(mc, f, level)[cells.start : stop])


def cond_expect(mc: MeasureContext, f: StepFunction, k: int) -> StepFunction:
    """E(f | F_k): on I_k(n) the value E(f; I_k(n)) / mu(I_k(n))."""
    _check_base(mc, f.q)
    if k < 0:
        raise ConfigError(f"level must be >= 0, got {k}")
    if f.level <= k:
        return f.relevel(k)
    q = mc.cfg.q
    weighted = _weighted_cells(mc, f, f.level)
    blocks = weighted.reshape(q**k, q ** (f.level - k)).sum(axis=1)
    logger.debug("conditional expectation from level %d onto %d", f.level, k)
    return StepFunction(q, k, blocks / mass_table(mc, k))


def lebesgue_level1_integral(cfg: SystemConfig, n: int, x: QAdicPoint) -> Fraction:
    """Lebesgue measure of I_1(n) intersected with [0, x]."""
    if not 0 <= n < cfg.q:
        raise ConfigError(f"digit must be in 0..{cfg.q - 1}, got {n}")
    width = Fraction(1, cfg.q)
    return min(max(x.value - n * width, Fraction(0)), width)
