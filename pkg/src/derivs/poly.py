"""The derivative oracle: L at a fixed q-adic point as a polynomial in the weights.

At x = m/q^K the distribution function is a finite sum of mass monomials,
so it is a polynomial in the free weights v_0..v_{q-2} once every r_{q-1}
is replaced by 1 - (v_0 + ... + v_{q-2}). Differentiating that polynomial
gives the constrained partial derivatives exactly.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.rings import PolyElement, PolyRing, ring

from src import config
from src.core import (
    ConfigError,
    LevelCapExceeded,
    MultiIndex,
    QAdicPoint,
    SystemConfig,
    WeightVec,
)
from src.core.system import sigma_power
from src.measure import cdf_from_masses

logger = logging.getLogger(__name__)


class DerivMode(str, Enum):
    """Which distribution function is differentiated."""

    COUPLED = "coupled"
    """d = r: the function L_r."""

    UNIFORM_FIRST = "uniform_first"
    """d = (1/q, ..., 1/q): the function L_{q,r}."""


@lru_cache(maxsize=None)
def weight_ring(q: int) -> PolyRing:
    """QQ[v_0, ..., v_{q-2}]."""
    R, *_ = ring([f"v{j}" for j in range(q - 1)], QQ)
    return R


def _to_qq(value: Fraction):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _to_fraction(coeff) -> Fraction:
    return Fraction(int(QQ.numer(coeff)), int(QQ.denom(coeff)))


@dataclass(frozen=True, eq=False)
class SparsePoly:
    """A polynomial over QQ in the free weights of base q."""

    q: int
    element: PolyElement

    @classmethod
    def constant(cls, q: int, value) -> "SparsePoly":
        R = weight_ring(q)
        return cls(q, R.ground_new(_to_qq(value)))

    @classmethod
    def variable(cls, q: int, j: int) -> "SparsePoly":
        """v_j for j <= q-2, and 1 - sum(v) for j = q-1."""
        R = weight_ring(q)
        if 0 <= j <= q - 2:
            return cls(q, R.gens[j])
        if j == q - 1:
            return cls(q, R.one - sum(R.gens, R.zero))
        raise ConfigError(f"weight index must be in 0..{q - 1}, got {j}")

    @classmethod
    def weights(cls, q: int) -> list["SparsePoly"]:
        """r_0..r_{q-1} as polynomials."""
        return [cls.variable(q, j) for j in range(q)]

    def _wrap(self, element: PolyElement) -> "SparsePoly":
        return SparsePoly(self.q, element)

    def _coerce(self, other) -> PolyElement:
        if isinstance(other, SparsePoly):
            if other.q != self.q:
                raise ConfigError("polynomials over different bases")
            return other.element
        return weight_ring(self.q).ground_new(_to_qq(other))

    def __add__(self, other) -> "SparsePoly":
        return self._wrap(self.element + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other) -> "SparsePoly":
        return self._wrap(self.element - self._coerce(other))

    def __mul__(self, other) -> "SparsePoly":
        return self._wrap(self.element * self._coerce(other))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.q == other.q and self.element == other.element

    __hash__ = None  # type: ignore[assignment]

    def diff_along(self, variables: Iterable[int]) -> "SparsePoly":
        """Differentiate once per listed variable index, in the given order."""
        gens = weight_ring(self.q).gens
        element = self.element
        for j in variables:
            if not 0 <= j <= self.q - 2:
                raise ConfigError(f"can only differentiate v_0..v_{self.q - 2}, got v_{j}")
            element = element.diff(gens[j])
        return self._wrap(element)

    def diff(self, u: MultiIndex) -> "SparsePoly":
        """The mixed partial of order u."""
        return self.diff_along(j for j, count in enumerate(u.u) for _ in range(count))

    def terms(self) -> dict[tuple[int, ...], Fraction]:
        """Exponent vector -> nonzero coefficient."""
        return {monom: _to_fraction(coeff) for monom, coeff in self.element.terms()}

    @property
    def total_degree(self) -> int:
        return max((sum(monom) for monom in self.terms()), default=0)

    def evaluate(self, point: Sequence[Fraction]) -> Fraction:
        """Value at v = point (the free weights r_0..r_{q-2})."""
        if len(point) != self.q - 1:
            raise ConfigError(f"need {self.q - 1} free weights, got {len(point)}")
        point = [Fraction(p) for p in point]
        return sum(
            (c * prod(p**e for p, e in zip(point, monom)) for monom, c in self.terms().items()),
            Fraction(0),
        )

    def __repr__(self) -> str:
        return f"SparsePoly(q={self.q}, {self.element})"


def cdf_polynomial(cfg: SystemConfig, mode: DerivMode, x: QAdicPoint) -> SparsePoly:
    """L(x) as a polynomial in v_0..v_{q-2}, with d chosen by mode."""
    mode = DerivMode(mode)
    if x.q != cfg.q:
        raise ConfigError(f"x has base {x.q}, context has {cfg.q}")
    if x.level > config.MAX_POLY_LEVEL:
        raise LevelCapExceeded(
            f"polynomial oracle accepts points up to level {config.MAX_POLY_LEVEL}, "
            f"got level {x.level}"
        )
    return _cdf_polynomial(cfg, mode, x)


@lru_cache(maxsize=1024)
def _cdf_polynomial(cfg: SystemConfig, mode: DerivMode, x: QAdicPoint) -> SparsePoly:
    q = cfg.q
    r = SparsePoly.weights(q)
    if mode is DerivMode.COUPLED:
        d = r
    else:
        d = [SparsePoly.constant(q, Fraction(1, q))] * q
    powers = [sigma_power(cfg, n) for n in range(q)]
    poly = cdf_from_masses(
        x,
        lambda c: d[c],
        lambda prev, c: r[powers[prev][c]],
        SparsePoly.constant(q, 0),
        SparsePoly.constant(q, 1),
    )
    logger.debug("cdf polynomial at %s (%s): %d terms", x, mode.value, len(poly.element))
    return poly


def mixed_partial_oracle(
    cfg: SystemConfig,
    mode: DerivMode,
    x: QAdicPoint,
    u: MultiIndex,
    r: WeightVec,
) -> Fraction:
    """The partial derivative of order u of L(x), evaluated at r."""
    u.check_for(cfg)
    if r.q != cfg.q:
        raise ConfigError(f"r has {r.q} components, expected {cfg.q}")
    return cdf_polynomial(cfg, DerivMode(mode), x).diff(u).evaluate(r.free)
