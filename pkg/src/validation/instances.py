"""Seeded random instances for the verification suites."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import numpy as np

from src.core import SystemConfig, WeightVec
from src.stepfn import StepFunction, as_fraction_table

# q=2 with the identity and the swap, q=3 with the identity and a 3-cycle
STANDARD_CONFIGS: tuple[SystemConfig, ...] = (
    SystemConfig(q=2, sigma=(0, 1)),
    SystemConfig(q=2, sigma=(1, 0)),
    SystemConfig(q=3, sigma=(0, 1, 2)),
    SystemConfig(q=3, sigma=(1, 2, 0)),
)

MAX_DENOMINATOR = 64


def random_weights(rng: np.random.Generator, q: int) -> WeightVec:
    """
    A strictly positive probability vector with a common denominator D <= 64.

    q-1 distinct cut points in 1..D-1 split D into q positive parts.
    """
    denominator = int(rng.integers(q, MAX_DENOMINATOR + 1))
    cuts = sorted(int(c) for c in rng.choice(np.arange(1, denominator), size=q - 1, replace=False))
    edges = [0, *cuts, denominator]
    return WeightVec(tuple(Fraction(b - a, denominator) for a, b in zip(edges, edges[1:])))


def random_step(rng: np.random.Generator, q: int, level: int) -> StepFunction:
    """A level-`level` step function with small random rational values."""
    numerators = rng.integers(-5, 6, size=q**level)
    denominators = rng.integers(1, 7, size=q**level)
    values = [Fraction(int(a), int(b)) for a, b in zip(numerators, denominators)]
    return StepFunction(q, level, as_fraction_table(values))


@dataclass(frozen=True)
class Instance:
    """A configuration with one random vector per role (d, r, e, s)."""

    cfg: SystemConfig
    weights: tuple[tuple[str, WeightVec], ...]

    def __getattr__(self, role: str) -> WeightVec:
        if role.startswith("_") or role == "weights":
            raise AttributeError(role)
        for name, w in self.weights:
            if name == role:
                return w
        raise AttributeError(role)

    def describe(self, **extra: Any) -> dict[str, Any]:
        """Flat description for counterexample reports."""
        out: dict[str, Any] = {"q": self.cfg.q, "sigma": list(self.cfg.sigma)}
        for name, w in self.weights:
            out[name] = w
        out.update(extra)
        return out


def draw_instances(
    rng: np.random.Generator,
    trials: int,
    roles: tuple[str, ...] = ("d", "r"),
    configs: tuple[SystemConfig, ...] = STANDARD_CONFIGS,
) -> list[Instance]:
    """`trials` instances per configuration, in configuration order."""
    out = []
    for cfg in configs:
        for _ in range(trials):
            out.append(Instance(cfg, tuple((role, random_weights(rng, cfg.q)) for role in roles)))
    return out
