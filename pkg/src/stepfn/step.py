"""Exact step functions on q-adic partitions.

A StepFunction of level m is a dense table of q^m Fractions, entry n being
the value on I_m(n). F_m-measurability is carried by the level alone.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable

import numpy as np

from src.core import ConfigError, QAdicInterval, QAdicPoint, SystemConfig, check_cells, locate


def as_fraction_table(values: Iterable[Any]) -> np.ndarray:
    table = np.array([Fraction(v) for v in values], dtype=object)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, eq=False)
class StepFunction:
    """A level-m function, constant on every I_m(n)."""

    q: int
    level: int
    values: np.ndarray

    def __post_init__(self) -> None:
        check_cells(self.q, self.level)
        values = self.values
        if not isinstance(values, np.ndarray) or values.dtype != object:
            values = as_fraction_table(values)
        elif values.flags.writeable:
            values = values.copy()
            values.flags.writeable = False
        if values.shape != (self.q**self.level,):
            raise ConfigError(
                f"level-{self.level} table needs {self.q**self.level} values, got {values.shape}"
            )
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, q: int, c: Any, level: int = 0) -> "StepFunction":
        return cls(q, level, as_fraction_table([c] * q**level))

    @classmethod
    def from_values(cls, q: int, values: Iterable[Any]) -> "StepFunction":
        """Infer the level from the table length (which must be a power of q)."""
        table = as_fraction_table(values)
        level, size = 0, 1
        while size < len(table):
            size *= q
            level += 1
        if size != len(table):
            raise ConfigError(f"{len(table)} values is not a power of q={q}")
        return cls(q, level, table)

    @classmethod
    def indicator(cls, iv: QAdicInterval) -> "StepFunction":
        table = [0] * iv.q**iv.level
        table[iv.index] = 1
        return cls(iv.q, iv.level, as_fraction_table(table))

    def relevel(self, level: int) -> "StepFunction":
        """The same function on the finer level-`level` partition."""
        if level < self.level:
            raise ConfigError(f"cannot relevel a level-{self.level} function down to {level}")
        if level == self.level:
            return self
        check_cells(self.q, level)
        return StepFunction(self.q, level, np.repeat(self.values, self.q ** (level - self.level)))

    def __call__(self, x: QAdicPoint) -> Fraction:
        """Value at x, using the half-open cell convention of locate."""
        return self.values[locate(x, self.level).index]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, StepFunction) or other.q != self.q:
            return NotImplemented
        level = max(self.level, other.level)
        return bool(np.all(self.relevel(level).values == other.relevel(level).values))

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "StepFunction") -> "StepFunction":
        return step_combine(StepOp.ADD, self, other)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return step_combine(StepOp.ADD, self, step_combine(StepOp.SCALE, -1, other))

    def __mul__(self, other: "StepFunction") -> "StepFunction":
        return step_combine(StepOp.MULTIPLY, self, other)

    def __neg__(self) -> "StepFunction":
        return step_combine(StepOp.SCALE, -1, self)

    def to_list(self) -> list[str]:
        return [f"{v.numerator}/{v.denominator}" for v in self.values]

    def __repr__(self) -> str:
        shown = ", ".join(str(v) for v in self.values[:8])
        more = ", ..." if len(self.values) > 8 else ""
        return f"StepFunction(q={self.q}, level={self.level}, [{shown}{more}])"


class StepOp(str, Enum):
    ADD = "add"
    SCALE = "scale"
    MULTIPLY = "multiply"


def step_combine(op: StepOp | str, *args: Any) -> StepFunction:
    """
    Pointwise step algebra.

    add(f, g, ...) and multiply(f, g, ...) re-level every operand to the
    largest level; scale(c, f) multiplies by the rational c.
    """
    op = StepOp(op)
    if op is StepOp.SCALE:
        factor, f = args
        return StepFunction(f.q, f.level, f.values * Fraction(factor))

    if not args:
        raise ConfigError(f"{op.value} needs at least one step function")
    q = args[0].q
    if any(f.q != q for f in args):
        raise ConfigError("cannot combine step functions of different bases")
    level = max(f.level for f in args)
    check_cells(q, level)
    result = args[0].relevel(level).values
    for f in args[1:]:
        if op is StepOp.ADD:
            result = result + f.relevel(level).values
        else:
            result = result * f.relevel(level).values
    return StepFunction(q, level, result)


def compose_phi(f: StepFunction, i: int, cfg: SystemConfig) -> StepFunction:
    """
    f o phi^i as a level-(m+i) function.

    The value on the word b_{i-1}...b_0 a_{m-1}...a_0 is f on a_{m-1}...a_0,
    so the table is f's table repeated q^i times.
    """
    if f.q != cfg.q:
        raise ConfigError(f"step function has base {f.q}, context has {cfg.q}")
    if i < 0:
        raise ConfigError(f"phi power must be >= 0, got {i}")
    if i == 0:
        return f
    check_cells(f.q, f.level + i)
    return StepFunction(f.q, f.level + i, np.tile(f.values, f.q**i))
