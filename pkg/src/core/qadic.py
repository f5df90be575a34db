"""Exact base-q geometry: q-adic points, level-k intervals and the shift map.

Digit words are most-significant-first everywhere: the interval I_k(n)
with n = n_{k-1}...n_0 has digits() == (n_{k-1}, ..., n_0).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from src import config
from .errors import ConfigError, LevelCapExceeded
from .system import parse_rational


def check_cells(q: int, level: int) -> None:
    """Refuse dense tables with more than MAX_TABLE_CELLS cells."""
    if level < 0:
        raise ConfigError(f"level must be >= 0, got {level}")
    if q**level > config.MAX_TABLE_CELLS:
        raise LevelCapExceeded(
            f"level {level} at q={q} needs {q**level} cells "
            f"(cap {config.MAX_TABLE_CELLS})"
        )


def to_digits(q: int, n: int, k: int) -> tuple[int, ...]:
    """Base-q digits of n, padded to exactly k places, most significant first."""
    out = []
    for _ in range(k):
        n, d = divmod(n, q)
        out.append(d)
    return tuple(reversed(out))


def from_digits(q: int, digits: tuple[int, ...]) -> int:
    n = 0
    for d in digits:
        n = n * q + d
    return n


@dataclass(frozen=True)
class QAdicPoint:
    """
    The exact point x = m / q^K in [0, 1].

    Stored canonically: trailing zero digits are stripped, so x = 1 is
    (K=0, m=1) and x = 0 is (K=0, m=0).
    """

    q: int
    level: int
    numerator: int

    def __post_init__(self) -> None:
        if self.q < 2 or self.level < 0:
            raise ConfigError(f"bad q-adic point: q={self.q}, level={self.level}")
        if not 0 <= self.numerator <= self.q**self.level:
            raise ConfigError(
                f"x out of [0,1]: {self.numerator}/{self.q}^{self.level}"
            )
        level, m = self.level, self.numerator
        while level > 0 and m % self.q == 0:
            m //= self.q
            level -= 1
        object.__setattr__(self, "level", level)
        object.__setattr__(self, "numerator", m)

    @classmethod
    def from_fraction(cls, q: int, value: Any) -> "QAdicPoint":
        """Build from a rational whose reduced denominator is a power of q."""
        x = parse_rational(value)
        if not 0 <= x <= 1:
            raise ConfigError(f"x out of [0,1]: {x}")
        den, level = x.denominator, 0
        while den % q == 0:
            den //= q
            level += 1
        if den != 1:
            raise ConfigError(f"x = {x} is not a q-adic rational for q={q}")
        return cls(q, level, x.numerator * (q**level // x.denominator))

    @classmethod
    def one(cls, q: int) -> "QAdicPoint":
        return cls(q, 0, 1)

    @classmethod
    def zero(cls, q: int) -> "QAdicPoint":
        return cls(q, 0, 0)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.q**self.level)

    @property
    def is_one(self) -> bool:
        return self.level == 0 and self.numerator == 1

    @property
    def is_zero(self) -> bool:
        return self.numerator == 0

    def digits(self) -> tuple[int, ...]:
        """The K base-q digits of x < 1, most significant first."""
        if self.is_one:
            raise ConfigError("x = 1 has no finite digit word below 1")
        return to_digits(self.q, self.numerator, self.level)

    def cells_below(self, level: int) -> int:
        """Number of level-`level` cells inside [0, x) (requires level >= self.level)."""
        if self.is_one:
            return self.q**level
        return self.numerator * self.q ** (level - self.level)

    def __str__(self) -> str:
        v = self.value
        return f"{v.numerator}/{v.denominator}"

    def __repr__(self) -> str:
        return f"QAdicPoint({self})"


@dataclass(frozen=True)
class QAdicInterval:
    """
    The level-k interval I_k(n) = [n/q^k, (n+1)/q^k).

    The last interval of each level, n = q^k - 1, is closed on the right.
    """

    q: int
    level: int
    index: int

    def __post_init__(self) -> None:
        if self.level < 0 or not 0 <= self.index < self.q**self.level:
            raise ConfigError(
                f"I_{self.level}({self.index}) does not exist for q={self.q}"
            )

    @classmethod
    def from_digits(cls, q: int, digits: tuple[int, ...]) -> "QAdicInterval":
        return cls(q, len(digits), from_digits(q, digits))

    def digits(self) -> tuple[int, ...]:
        return to_digits(self.q, self.index, self.level)

    @property
    def left(self) -> Fraction:
        return Fraction(self.index, self.q**self.level)

    @property
    def right(self) -> Fraction:
        return Fraction(self.index + 1, self.q**self.level)

    @property
    def is_last(self) -> bool:
        return self.index == self.q**self.level - 1

    def contains(self, x: QAdicPoint) -> bool:
        v = x.value
        if self.is_last:
            return self.left <= v <= self.right
        return self.left <= v < self.right

    def children(self) -> list["QAdicInterval"]:
        return [
            QAdicInterval(self.q, self.level + 1, self.index * self.q + c)
            for c in range(self.q)
        ]

    def cell_range(self, level: int) -> range:
        """Indices of the level-`level` cells (level >= self.level) inside this interval."""
        width = self.q ** (level - self.level)
        return range(self.index * width, (self.index + 1) * width)

    def __repr__(self) -> str:
        word = "".join(str(d) for d in self.digits()) if self.level else ""
        return f"I_{self.level}({self.index}:{word})"


def phi_apply(x: QAdicPoint, i: int) -> QAdicPoint:
    """phi^i(x): drop the i most significant base-q digits; phi(1) = 1."""
    if i < 0:
        raise ConfigError(f"phi power must be >= 0, got {i}")
    if x.is_one:
        return x
    if i >= x.level:
        return QAdicPoint.zero(x.q)
    modulus = x.q**x.level
    return QAdicPoint(x.q, x.level, (x.numerator * x.q**i) % modulus)


def locate(x: QAdicPoint, k: int) -> QAdicInterval:
    """The level-k interval containing x (half-open; x = 1 lies in the last one)."""
    if k < 0:
        raise ConfigError(f"level must be >= 0, got {k}")
    if x.is_one:
        return QAdicInterval(x.q, k, x.q**k - 1)
    if k >= x.level:
        return QAdicInterval(x.q, k, x.numerator * x.q ** (k - x.level))
    return QAdicInterval(x.q, k, x.numerator // x.q ** (x.level - k))


def grid(q: int, level: int) -> list[QAdicPoint]:
    """All points m / q^level, m = 0..q^level, in increasing order."""
    return [QAdicPoint(q, level, m) for m in range(q**level + 1)]
