"""The permutation and weight context shared by every measure.

A SystemConfig fixes the base q and the permutation sigma (with
sigma^q = id). WeightVec holds the strictly positive probability vectors
that parametrize the measures (d, r, e, s and the uniform vector), and
MultiIndex is the derivative order over the free weights r_0..r_{q-2}.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Any, Iterable, Iterator, Sequence

from .errors import (
    ConfigError,
    EmptyMultiIndex,
    InvalidWeights,
    NotABijection,
    OrderViolation,
)


def parse_rational(text: Any) -> Fraction:
    """Parse "p/q" (or an integer) into an exact Fraction.

    Floats are refused so that no binary rounding sneaks in.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise ConfigError(f"expected an exact rational 'p/q', got {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    raw = str(text).strip()
    if "." in raw or "e" in raw.lower():
        raise ConfigError(f"expected an exact rational 'p/q', got {raw!r}")
    try:
        return Fraction(raw)
    except (ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"not a rational number: {raw!r}") from e


@dataclass(frozen=True)
class SystemConfig:
    """
    The pair (q, sigma).

    Construction validates the permutation, so every SystemConfig in
    circulation satisfies sigma^q = id.

    Examples:
        SystemConfig(q=2, sigma=(1, 0))      # Gray family, swap
        SystemConfig(q=3, sigma=(1, 2, 0))   # 3-cycle 0 -> 1 -> 2 -> 0
    """

    q: int
    """Base of the expansion (q >= 2)."""

    sigma: tuple[int, ...]
    """Image table: sigma[j] is the image of digit j."""

    def __post_init__(self) -> None:
        object.__setattr__(self, "sigma", tuple(int(s) for s in self.sigma))
        if self.q < 2:
            raise ConfigError(f"q must be at least 2, got {self.q}")
        if len(self.sigma) != self.q:
            raise ConfigError(
                f"sigma must have {self.q} entries, got {len(self.sigma)}"
            )
        seen: set[int] = set()
        for j, image in enumerate(self.sigma):
            if not 0 <= image < self.q:
                raise NotABijection(f"sigma({j}) = {image} is outside 0..{self.q - 1}")
            if image in seen:
                raise NotABijection(f"sigma maps two digits onto {image}")
            seen.add(image)

        for point in range(self.q):
            image = point
            for _ in range(self.q):
                image = self.sigma[image]
            if image != point:
                raise OrderViolation(point, image, self.q)

    @classmethod
    def identity(cls, q: int) -> "SystemConfig":
        return cls(q=q, sigma=tuple(range(q)))

    @property
    def digits(self) -> range:
        return range(self.q)

    def to_dict(self) -> dict[str, Any]:
        return {"q": self.q, "sigma": list(self.sigma)}

    def __repr__(self) -> str:
        return f"SystemConfig(q={self.q}, sigma={list(self.sigma)})"


def validate_config(q: int, sigma: Sequence[int]) -> SystemConfig:
    """Validate (q, sigma) and return the SystemConfig.

    Raises:
        NotABijection: repeated or out-of-range images.
        OrderViolation: sigma^q != id (reported at the smallest failing point).
    """
    return SystemConfig(q=q, sigma=tuple(sigma))


def sigma_power(cfg: SystemConfig, n: int) -> tuple[int, ...]:
    """Image table of sigma^(n mod q)."""
    table = tuple(range(cfg.q))
    for _ in range(n % cfg.q):
        table = tuple(cfg.sigma[t] for t in table)
    return table


def sigma_inverse_power(cfg: SystemConfig, j: int) -> tuple[int, ...]:
    """Image table of sigma^(-j), computed as sigma^(q - j mod q)."""
    return sigma_power(cfg, cfg.q - (j % cfg.q))


@dataclass(frozen=True)
class WeightVec:
    """
    A strictly positive rational probability vector of length q.

    Plays the roles of d, r, e, s and of the uniform vector (1/q, ..., 1/q).
    """

    w: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        try:
            values = tuple(parse_rational(c) for c in self.w)
        except ConfigError as e:
            raise InvalidWeights(str(e)) from e
        object.__setattr__(self, "w", values)
        if len(values) < 2:
            raise InvalidWeights("a weight vector needs at least two components")
        for j, c in enumerate(values):
            if not 0 < c < 1:
                raise InvalidWeights(f"component {j} = {c} is not strictly between 0 and 1")
        if sum(values) != 1:
            raise InvalidWeights(f"components sum to {sum(values)}, not 1")

    @classmethod
    def from_free(cls, free: Iterable[Any]) -> "WeightVec":
        """Build from the first q-1 components; the last is 1 minus their sum."""
        head = tuple(parse_rational(c) for c in free)
        return cls(head + (1 - sum(head),))

    @classmethod
    def uniform(cls, q: int) -> "WeightVec":
        return cls(tuple(Fraction(1, q) for _ in range(q)))

    @property
    def q(self) -> int:
        return len(self.w)

    @property
    def free(self) -> tuple[Fraction, ...]:
        """The independent components r_0..r_{q-2}."""
        return self.w[:-1]

    def __getitem__(self, j: int) -> Fraction:
        return self.w[j]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.w)

    def __len__(self) -> int:
        return len(self.w)

    def min(self) -> Fraction:
        return min(self.w)

    def max(self) -> Fraction:
        return max(self.w)

    def to_list(self) -> list[str]:
        return [f"{c.numerator}/{c.denominator}" for c in self.w]

    def __repr__(self) -> str:
        return f"WeightVec({', '.join(self.to_list())})"


def permuted_weights(cfg: SystemConfig, r: WeightVec, n: int) -> WeightVec:
    """The vector r_{sigma^n}: component j is r[sigma^n(j)]."""
    if r.q != cfg.q:
        raise ConfigError(f"weight vector has {r.q} components, expected {cfg.q}")
    table = sigma_power(cfg, n)
    return WeightVec(tuple(r[table[j]] for j in range(cfg.q)))


@dataclass(frozen=True)
class MultiIndex:
    """
    Derivative order u = (u_0, ..., u_{q-2}) over the free weights.

    Index q-1 is never differentiated: r_{q-1} = 1 - sum of the others.
    """

    u: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", tuple(int(c) for c in self.u))
        if not self.u:
            raise ConfigError("a multi-index needs at least one component")
        if any(c < 0 for c in self.u):
            raise ConfigError(f"multi-index components must be >= 0, got {list(self.u)}")

    @classmethod
    def unit(cls, q: int, l: int) -> "MultiIndex":
        """The unit vector e_l of length q-1."""
        if not 0 <= l <= q - 2:
            raise ConfigError(f"e_l needs 0 <= l <= {q - 2}, got {l}")
        return cls(tuple(1 if j == l else 0 for j in range(q - 1)))

    @classmethod
    def of_order(cls, q: int, order: int) -> list["MultiIndex"]:
        """All multi-indices of length q-1 with |u| = order, lexicographically descending."""
        found: list[MultiIndex] = []

        def extend(prefix: tuple[int, ...], remaining: int) -> None:
            if len(prefix) == q - 2:
                found.append(cls(prefix + (remaining,)))
                return
            for c in range(remaining, -1, -1):
                extend(prefix + (c,), remaining - c)

        extend((), order)
        return found

    @property
    def order(self) -> int:
        """|u| = u_0 + ... + u_{q-2}."""
        return sum(self.u)

    @property
    def factorial(self) -> int:
        """u! = u_0! * ... * u_{q-2}!."""
        return prod(factorial(c) for c in self.u)

    def support(self) -> list[int]:
        """Indices alpha with u_alpha > 0, ascending."""
        return [a for a, c in enumerate(self.u) if c > 0]

    def minus(self, alpha: int) -> "MultiIndex":
        """u - e_alpha."""
        if self.u[alpha] == 0:
            raise ConfigError(f"cannot lower component {alpha} of {list(self.u)}")
        return MultiIndex(tuple(c - (1 if j == alpha else 0) for j, c in enumerate(self.u)))

    def check_for(self, cfg: SystemConfig, require_order: bool = True) -> None:
        """Check the length against q and, by default, that |u| >= 1."""
        if len(self.u) != cfg.q - 1:
            raise ConfigError(
                f"multi-index must have q-1 = {cfg.q - 1} components, got {len(self.u)}"
            )
        if require_order and self.order < 1:
            raise EmptyMultiIndex(f"derivative order |u| must be >= 1, got {list(self.u)}")

    def __repr__(self) -> str:
        return f"MultiIndex({list(self.u)})"
