"""Arrangements psi_u of a multi-index."""

from dataclasses import dataclass

from sympy.utilities.iterables import multiset_permutations

from src.core import MultiIndex, SystemConfig


@dataclass(frozen=True)
class PsiMap:
    """A map psi: {1..|u|} -> {0..q-2}, slot m stored at position m-1."""

    slots: tuple[int, ...]

    def counts(self, q: int) -> tuple[int, ...]:
        """Preimage sizes, which equal u for an arrangement of u."""
        return tuple(self.slots.count(j) for j in range(q - 1))

    def __len__(self) -> int:
        return len(self.slots)

    def __iter__(self):
        return iter(self.slots)

    def __repr__(self) -> str:
        return f"PsiMap({list(self.slots)})"


def enumerate_psi(cfg: SystemConfig, u: MultiIndex) -> list[PsiMap]:
    """All |u|!/u! arrangements in lexicographic order."""
    u.check_for(cfg)
    letters = [j for j, count in enumerate(u.u) for _ in range(count)]
    return [PsiMap(tuple(p)) for p in multiset_permutations(letters)]
