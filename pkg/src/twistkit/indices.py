"""Index sets for the degree-d family.

``I_d`` indexes the ``b``/``Y`` coordinates, ``J_d`` indexes the reduced
nilpotent basis at ``s = [1:0]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import PreconditionError

Index = tuple[int, int]

_EXCLUDED = frozenset({(0, 0), (0, 1), (1, 0), (1, 1)})


@dataclass(frozen=True)
class IndexSet:
    d: int
    I: tuple[Index, ...]
    J: tuple[Index, ...]

    def k(self, i: int, j: int) -> int:
        return min(i, j)

    def in_I(self, idx: Index) -> bool:
        return idx in self._I_set

    def in_J(self, idx: Index) -> bool:
        return idx in self._J_set

    @property
    def _I_set(self) -> frozenset[Index]:
        return _as_set(self.I)

    @property
    def _J_set(self) -> frozenset[Index]:
        return _as_set(self.J)

    @property
    def kernel_f_indices(self) -> tuple[Index, ...]:
        """Indices (i, j) in I_d with i <= d - 2, labelling the f-generators."""
        return tuple(ij for ij in self.I if ij[0] <= self.d - 2)


@lru_cache(maxsize=None)
def _as_set(items: tuple[Index, ...]) -> frozenset[Index]:
    return frozenset(items)


@lru_cache(maxsize=None)
def build_index_sets(d: int) -> IndexSet:
    if not isinstance(d, int) or d < 3:
        raise PreconditionError(f"d ≥ 3 required (got d = {d})")
    I = tuple(
        (i, j) for i in range(d) for j in range(d) if (i, j) not in _EXCLUDED
    )
    J = tuple((i, j) for (i, j) in I if j != 0 and (i, j) not in ((0, 2), (1, 2)))
    return IndexSet(d=d, I=I, J=J)
