"""The right-hand side of the derivative identity and its intermediate forms.

Every parametric derivative of L_r at x is expressed through the Takagi
functions T_{q,r,v} of the uniform-first measure. The pieces that lead
there (base change, derivative transfer, the truncated mixed-partial series
and its combination) are evaluated separately so that each can be checked
against the polynomial oracle.
"""

import logging
from fractions import Fraction

from src.core import (
    ConfigError,
    MultiIndex,
    QAdicPoint,
    SystemConfig,
    WeightVec,
    locate,
)
from src.measure import MeasureContext, cdf, lebesgue_level1_integral
from src.takagi import takagi_D_direct, takagi_T

from .poly import DerivMode, mixed_partial_oracle

logger = logging.getLogger(__name__)


def _first_digit_terms(cfg: SystemConfig, s: WeightVec, x: QAdicPoint) -> tuple[int, Fraction]:
    """The level-1 cell index of x and the weight sum_n s_n 1_{I_1(n)}(x)."""
    if s.q != cfg.q or x.q != cfg.q:
        raise ConfigError(f"weights and point must have base {cfg.q}")
    cell = locate(x, 1).index
    return cell, s[cell]


def _selector_gap(cell: int, j: int, q: int) -> int:
    """1_{I_1(j)}(x) - 1_{I_1(q-1)}(x) for x in I_1(cell)."""
    return int(cell == j) - int(cell == q - 1)


def _lebesgue_gap(cfg: SystemConfig, l: int, x: QAdicPoint) -> Fraction:
    return lebesgue_level1_integral(cfg, l, x) - lebesgue_level1_integral(cfg, cfg.q - 1, x)


def _combine(
    cfg: SystemConfig,
    r: WeightVec,
    u: MultiIndex,
    x: QAdicPoint,
    takagi,
) -> Fraction:
    """
    The shared shape of theorem_rhs and hlsrq_partial.

    takagi(v) supplies T_{q,r,v}(x) or one of its truncations.
    """
    u.check_for(cfg)
    q = cfg.q
    cell, weight = _first_digit_terms(cfg, r, x)
    if u.order == 1:
        (l,) = u.support()
        uniform = MeasureContext.uniform_first(cfg, r)
        return (
            _selector_gap(cell, l, q) * (cdf(uniform, x) - x.value)
            + weight * q * takagi(u)
            + _lebesgue_gap(cfg, l, x)
        )
    total = weight * q * takagi(u)
    for j in u.support():
        gap = _selector_gap(cell, j, q)
        if gap:
            total += gap * q * takagi(u.minus(j))
    return total


def theorem_rhs(cfg: SystemConfig, r: WeightVec, u: MultiIndex, x: QAdicPoint) -> Fraction:
    """
    The closed form of (1 / (q u!)) d^u L_r(x).

    For u = e_l:
        (1_{I_1(l)} - 1_{I_1(q-1)})(L_{q,r}(x) - x) + r(x) q T_{q,r,e_l}(x)
        + |I_1(l) & [0,x]| - |I_1(q-1) & [0,x]|
    For |u| >= 2:
        sum_{u_j > 0} (1_{I_1(j)} - 1_{I_1(q-1)}) q T_{q,r,u-e_j}(x) + r(x) q T_{q,r,u}(x)
    where r(x) = sum_n r_n 1_{I_1(n)}(x).
    """
    uniform = MeasureContext.uniform_first(cfg, r)
    return _combine(cfg, r, u, x, lambda v: takagi_T(uniform, v, x))


def normalized_derivative(
    cfg: SystemConfig, r: WeightVec, u: MultiIndex, x: QAdicPoint
) -> Fraction:
    """The left-hand side: d^u L_r(x) / (q u!) from the polynomial oracle."""
    raw = mixed_partial_oracle(cfg, DerivMode.COUPLED, x, u, r)
    return raw / (cfg.q * u.factorial)


def _truncated(cfg: SystemConfig, r: WeightVec, v: MultiIndex, x: QAdicPoint, k: int) -> Fraction:
    """D_{q,r,v,k-2}(x), zero while the shift range 0..k-2 is empty."""
    if k < 2:
        return Fraction(0)
    return takagi_D_direct(MeasureContext.uniform_first(cfg, r), v, k - 2, x)


def hsrq_partial(
    cfg: SystemConfig, r: WeightVec, u: MultiIndex, x: QAdicPoint, k: int
) -> Fraction:
    """
    u! q D_{q,r,u,k-2}(x): the mixed-partial series of L_{q,s} at s = r, truncated.

    Stabilizes to d^u L_{q,r}(x) once k >= level(x) + 1.
    """
    u.check_for(cfg)
    return u.factorial * cfg.q * _truncated(cfg, r, u, x, k)


def hlsrq_partial(
    cfg: SystemConfig, r: WeightVec, u: MultiIndex, x: QAdicPoint, k: int
) -> Fraction:
    """theorem_rhs with every T_{q,r,v} replaced by its truncation D_{q,r,v,k-2}."""
    if k < 0:
        raise ConfigError(f"truncation depth must be >= 0, got {k}")
    return _combine(cfg, r, u, x, lambda v: _truncated(cfg, r, v, x, k))


def basechange_eval(cfg: SystemConfig, s: WeightVec, x: QAdicPoint) -> tuple[Fraction, Fraction]:
    """
    Both sides of L_s(x) = q s(x) (L_{q,s}(x) - x) + q sum_n s_n |I_1(n) & [0,x]|.

    s(x) = sum_n s_n 1_{I_1(n)}(x).
    """
    q = cfg.q
    _, weight = _first_digit_terms(cfg, s, x)
    lhs = cdf(MeasureContext.coupled(cfg, s), x)
    lebesgue = sum(
        (s[n] * lebesgue_level1_integral(cfg, n, x) for n in range(q)), Fraction(0)
    )
    rhs = q * weight * (cdf(MeasureContext.uniform_first(cfg, s), x) - x.value) + q * lebesgue
    return lhs, rhs


def derivative_transfer_eval(
    cfg: SystemConfig, s: WeightVec, u: MultiIndex, x: QAdicPoint
) -> tuple[Fraction, Fraction]:
    """
    Both sides of the base change differentiated u times.

    lhs = (1/q) d^u L_s(x). The rhs uses only derivatives of L_{q,s}:
    sum_{u_j > 0} u_j (1_{I_1(j)} - 1_{I_1(q-1)}) d^{u-e_j} L_{q,s}(x) + s(x) d^u L_{q,s}(x),
    where the |u| = 1 case keeps L_{q,s}(x) - x and the Lebesgue terms.
    """
    u.check_for(cfg)
    q = cfg.q
    cell, weight = _first_digit_terms(cfg, s, x)
    lhs = mixed_partial_oracle(cfg, DerivMode.COUPLED, x, u, s) / q
    rhs = weight * mixed_partial_oracle(cfg, DerivMode.UNIFORM_FIRST, x, u, s)
    if u.order == 1:
        (l,) = u.support()
        uniform = MeasureContext.uniform_first(cfg, s)
        rhs += _selector_gap(cell, l, q) * (cdf(uniform, x) - x.value)
        rhs += _lebesgue_gap(cfg, l, x)
        return lhs, rhs
    for j in u.support():
        gap = _selector_gap(cell, j, q)
        if gap:
            lowered = mixed_partial_oracle(cfg, DerivMode.UNIFORM_FIRST, x, u.minus(j), s)
            rhs += u.u[j] * gap * lowered
    return lhs, rhs


def finite_difference(
    cfg: SystemConfig, r: WeightVec, l: int, x: QAdicPoint, h: Fraction
) -> Fraction:
    """
    Central difference of L_r(x) along v_l (r_{q-1} moves the opposite way).

    A diagnostic only; it approximates d L_r / d v_l with an O(h^2) error.
    """
    if not 0 <= l <= cfg.q - 2:
        raise ConfigError(f"direction must be in 0..{cfg.q - 2}, got {l}")
    h = Fraction(h)
    if h <= 0:
        raise ConfigError(f"finite-difference step must be positive, got {h}")

    def shifted(sign: int) -> WeightVec:
        free = list(r.free)
        free[l] += sign * h
        return WeightVec.from_free(free)

    upper = cdf(MeasureContext.coupled(cfg, shifted(1)), x)
    lower = cdf(MeasureContext.coupled(cfg, shifted(-1)), x)
    logger.debug("finite difference at %s, step %s", x, h)
    return (upper - lower) / (2 * h)
