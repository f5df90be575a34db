"""The classical Takagi function at dyadic points."""

from fractions import Fraction

from src.core import ConfigError, QAdicPoint


def classical_takagi(x: QAdicPoint) -> Fraction:
    """
    tau(x) = sum_{n >= 0} 2^{-n} dist(2^n x, Z).

    At x = m/2^K every term with n >= K is zero, so the sum is finite.
    """
    if x.q != 2:
        raise ConfigError(f"the classical Takagi function is dyadic, got q={x.q}")
    value = x.value
    total = Fraction(0)
    for n in range(x.level):
        scaled = value * 2**n
        frac = scaled - (scaled.numerator // scaled.denominator)
        total += min(frac, 1 - frac) / 2**n
    return total
