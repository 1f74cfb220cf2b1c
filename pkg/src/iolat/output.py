"""Generator sets and the simple-minded output operation out1.

out1(G, A) is computed in three steps: close the input upward from its
infimum, collect the heads of every generator whose body lies in that
upset, then close those heads upward from their infimum.
"""
from __future__ import annotations

from typing import Iterable

from .errors import LatticeMismatch
from .lattice import Lattice, OutputSet


class GeneratorSet:
    """Finite set of ``(body, head)`` pairs bound to one lattice."""

    __slots__ = ("lattice", "_pairs", "_pairset", "__weakref__")

    def __init__(self, lattice: Lattice, pairs: Iterable[tuple[str, str]] = ()):
        self.lattice = lattice
        seen = set()
        for body, head in pairs:
            seen.add((lattice.index(body), lattice.index(head)))
        key = lattice._order_key
        self._pairs = tuple(sorted(seen, key=lambda p: (key[p[0]], key[p[1]])))
        self._pairset = frozenset(seen)

    @property
    def index_pairs(self) -> tuple[tuple[int, int], ...]:
        return self._pairs

    @property
    def pairs(self) -> tuple[tuple[str, str], ...]:
        names = self.lattice.elements
        return tuple((names[b], names[h]) for b, h in self._pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __len__(self):
        return len(self._pairs)

    def __contains__(self, pair):
        body, head = pair
        if body not in self.lattice or head not in self.lattice:
            return False
        return (self.lattice.index(body), self.lattice.index(head)) in self._pairset

    def __eq__(self, other):
        if not isinstance(other, GeneratorSet):
            return NotImplemented
        return other.lattice is self.lattice and other._pairs == self._pairs

    def __hash__(self):
        return hash((id(self.lattice), self._pairs))

    def __le__(self, other: GeneratorSet) -> bool:
        if other.lattice is not self.lattice:
            raise LatticeMismatch("generator sets belong to different lattices")
        return self._pairset <= other._pairset

    def union(self, other: GeneratorSet) -> GeneratorSet:
        if other.lattice is not self.lattice:
            raise LatticeMismatch("generator sets belong to different lattices")
        return GeneratorSet(self.lattice, self.pairs + other.pairs)

    def __repr__(self):
        return f"GeneratorSet({list(self.pairs)!r})"


def _bound(lattice: Lattice, g: GeneratorSet) -> None:
    if g.lattice is not lattice:
        raise LatticeMismatch("generator set is bound to a different lattice")


def jump_image(g: GeneratorSet, A: OutputSet | Iterable[str]) -> OutputSet:
    """Heads of all pairs in ``g`` whose body is in ``A``."""
    A = g.lattice.subset(A)
    mask = 0
    for body, head in g.index_pairs:
        if A.mask >> body & 1:
            mask |= 1 << head
    return OutputSet(g.lattice, mask)


def cn_up(lattice: Lattice, A: OutputSet | Iterable[str]) -> OutputSet:
    """Upset of the infimum of ``A``; ``{top}`` for the empty set."""
    A = lattice.subset(A)
    return OutputSet(lattice, lattice.up_masks[lattice.inf_index(A.mask)])


def out1(lattice: Lattice, g: GeneratorSet, A: OutputSet | Iterable[str]) -> OutputSet:
    """Simple-minded output of ``g`` for input set ``A``."""
    _bound(lattice, g)
    closed_input = cn_up(lattice, A)
    heads = jump_image(g, closed_input)
    return cn_up(lattice, heads)


def out1_index(lattice: Lattice, g: GeneratorSet, mask: int) -> int:
    """``out1`` on bitmasks, for bulk checks. Returns the output mask."""
    up = lattice.up_masks
    closed = up[lattice.inf_index(mask)]
    heads = 0
    for body, head in g.index_pairs:
        if closed >> body & 1:
            heads |= 1 << head
    return up[lattice.inf_index(heads)]


def heads_below(lattice: Lattice, g: GeneratorSet, body: int) -> list[tuple[int, int]]:
    """Generator pairs whose body lies in the upset of ``body`` (index form)."""
    closed = lattice.up_masks[body]
    return [(b, h) for b, h in g.index_pairs if closed >> b & 1]


__all__ = [
    "GeneratorSet",
    "jump_image",
    "cn_up",
    "out1",
    "out1_index",
    "heads_below",
]
