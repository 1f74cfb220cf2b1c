"""Finite bounded meet-lattices: construction, validation and order queries.

Elements are addressed by name at the public surface and by their
insertion index internally. Up- and down-sets are cached as ``int``
bitmasks over those indices.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from ._backend import kernels
from .errors import (
    CycleDetected,
    LatticeMismatch,
    MalformedDraft,
    NoBottom,
    NoMeet,
    NoTop,
    OutOfRange,
    TooLarge,
    TooManyAtoms,
    UnknownElement,
)

MAX_ELEMENTS = 4096
MAX_ATOMS = 6

_NAME_RE = re.compile(r"^[^\s,]+$")


def valid_name(name: str) -> bool:
    return isinstance(name, str) and bool(_NAME_RE.match(name))


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class PosetDraft:
    """Unvalidated poset given by its elements and Hasse cover edges.

    ``bottom``/``top`` are optional declarations, checked against the
    inferred bounds.
    """

    elements: Sequence[str]
    covers: Sequence[tuple[str, str]] = ()
    bottom: str | None = None
    top: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "covers", tuple((lo, hi) for lo, hi in self.covers))


class OutputSet:
    """Immutable set of lattice elements, iterated in canonical order.

    Canonical order is (rank from bottom, insertion index), where the rank
    of an element is the length of the longest chain from bottom to it.
    """

    __slots__ = ("lattice", "mask", "_members")

    def __init__(self, lattice: Lattice, mask: int):
        self.lattice = lattice
        self.mask = mask
        self._members = None

    @property
    def indices(self) -> tuple[int, ...]:
        if self._members is None:
            key = self.lattice._order_key
            self._members = tuple(sorted(iter_bits(self.mask), key=key.__getitem__))
        return self._members

    @property
    def members(self) -> tuple[str, ...]:
        names = self.lattice.elements
        return tuple(names[i] for i in self.indices)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return bin(self.mask).count("1")

    def __contains__(self, name):
        idx = self.lattice._index.get(name)
        return idx is not None and bool(self.mask >> idx & 1)

    def _check(self, other: OutputSet):
        if not isinstance(other, OutputSet):
            return NotImplemented
        if other.lattice is not self.lattice:
            raise LatticeMismatch("output sets belong to different lattices")
        return None

    def __eq__(self, other):
        if isinstance(other, OutputSet):
            return other.lattice is self.lattice and other.mask == self.mask
        if isinstance(other, (set, frozenset)):
            return set(self.members) == other
        return NotImplemented

    def __hash__(self):
        return hash((id(self.lattice), self.mask))

    def __le__(self, other: OutputSet):
        self._check(other)
        return self.mask & ~other.mask == 0

    def issubset(self, other: OutputSet) -> bool:
        return self <= other

    def __or__(self, other: OutputSet) -> OutputSet:
        self._check(other)
        return OutputSet(self.lattice, self.mask | other.mask)

    def __and__(self, other: OutputSet) -> OutputSet:
        self._check(other)
        return OutputSet(self.lattice, self.mask & other.mask)

    def __str__(self):
        return " ".join(self.members)

    def __repr__(self):
        return f"OutputSet({list(self.members)!r})"


class Lattice:
    """A validated finite lattice. Build one with :func:`build_lattice`.

    Attributes:
        elements: element names in insertion order.
        bottom, top: names of the least and greatest element.
        leq_matrix: ``(n, n)`` uint8 matrix, ``leq_matrix[i, j] == 1`` iff i <= j.
        meet_table: ``(n, n)`` int32 matrix of meet indices.
    """

    def __init__(self, elements, leq_matrix, meet_table, bottom: int, top: int):
        self.elements: tuple[str, ...] = tuple(elements)
        self._index = {name: i for i, name in enumerate(self.elements)}
        self.leq_matrix = leq_matrix
        self.leq_matrix.setflags(write=False)
        self.meet_table = meet_table
        self.meet_table.setflags(write=False)
        self.bottom_index = bottom
        self.top_index = top
        n = len(self.elements)
        self.size = n
        self.up_masks = _row_masks(leq_matrix)
        self.down_masks = _row_masks(leq_matrix.T)
        self._meet_rows = meet_table.tolist()
        self.rank = self._ranks()
        self._order_key = [(self.rank[i], i) for i in range(n)]
        self.full_mask = (1 << n) - 1

    def _ranks(self):
        # longest chain from bottom; processing by downset size is a linear extension
        n = self.size
        order = sorted(range(n), key=lambda i: bin(self.down_masks[i]).count("1"))
        rank = [0] * n
        for j in order:
            below = self.down_masks[j] & ~(1 << j)
            rank[j] = max((rank[i] + 1 for i in iter_bits(below)), default=0)
        return rank

    @property
    def bottom(self) -> str:
        return self.elements[self.bottom_index]

    @property
    def top(self) -> str:
        return self.elements[self.top_index]

    def __len__(self):
        return self.size

    def __contains__(self, name):
        return name in self._index

    def __repr__(self):
        return f"<Lattice |L|={self.size} bottom={self.bottom} top={self.top}>"

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except (KeyError, TypeError):
            raise UnknownElement(name) from None

    def mask_of(self, names: Iterable[str]) -> int:
        mask = 0
        for name in names:
            mask |= 1 << self.index(name)
        return mask

    def subset(self, names: Iterable[str] | OutputSet) -> OutputSet:
        """Coerce element names (or an OutputSet of this lattice) to an OutputSet."""
        if isinstance(names, OutputSet):
            if names.lattice is not self:
                raise LatticeMismatch("output set belongs to a different lattice")
            return names
        if isinstance(names, str):
            names = [names]
        return OutputSet(self, self.mask_of(names))

    def leq(self, x: str, y: str) -> bool:
        return bool(self.leq_matrix[self.index(x), self.index(y)])

    def meet(self, a: str, b: str) -> str:
        return self.elements[self._meet_rows[self.index(a)][self.index(b)]]

    def upset(self, x: str) -> OutputSet:
        return OutputSet(self, self.up_masks[self.index(x)])

    def downset(self, x: str) -> OutputSet:
        return OutputSet(self, self.down_masks[self.index(x)])

    def inf_index(self, mask: int) -> int:
        """Index of the infimum of the element set ``mask``; top for the empty set."""
        rows = self._meet_rows
        return reduce(lambda acc, i: rows[acc][i], iter_bits(mask), self.top_index)

    def inf_set(self, names: Iterable[str] | OutputSet) -> str:
        """Greatest lower bound of a set of elements, folding the binary meet.

        The empty set has infimum top.
        """
        return self.elements[self.inf_index(self.subset(names).mask)]

    def canonical(self, names: Iterable[str]) -> tuple[str, ...]:
        return self.subset(names).members

    def covers(self) -> list[tuple[str, str]]:
        """Hasse cover edges ``(lower, upper)`` in canonical order."""
        out = []
        for i in sorted(range(self.size), key=self._order_key.__getitem__):
            strict_up = self.up_masks[i] & ~(1 << i)
            for j in iter_bits(strict_up):
                between = strict_up & self.down_masks[j] & ~(1 << j)
                if not between:
                    out.append((i, j))
        out.sort(key=lambda e: (self._order_key[e[0]], self._order_key[e[1]]))
        return [(self.elements[i], self.elements[j]) for i, j in out]

    def to_draft(self) -> PosetDraft:
        return PosetDraft(self.elements, self.covers())


def build_lattice(draft: PosetDraft) -> Lattice:
    """Validate a poset draft and return the lattice it describes.

    Raises:
        MalformedDraft: bad or duplicate names, covers to undeclared elements.
        CycleDetected: two distinct elements below each other.
        NoBottom, NoTop: the least / greatest element is missing or not unique,
            or disagrees with a declared bottom/top.
        NoMeet: the first pair (in element order) without a greatest lower bound.
        TooLarge: more than ``MAX_ELEMENTS`` elements.
    """
    names = list(draft.elements)
    if not names:
        raise MalformedDraft("a lattice needs at least one element")
    if len(names) > MAX_ELEMENTS:
        raise TooLarge(f"{len(names)} elements exceeds the cap of {MAX_ELEMENTS}")
    index = {}
    for name in names:
        if not valid_name(name):
            raise MalformedDraft(f"invalid element name {name!r}")
        if name in index:
            raise MalformedDraft(f"duplicate element {name!r}")
        index[name] = len(index)
    lower, upper = [], []
    for lo, hi in draft.covers:
        for name in (lo, hi):
            if name not in index:
                raise MalformedDraft(f"cover references undeclared element {name!r}")
        lower.append(index[lo])
        upper.append(index[hi])

    n = len(names)
    leq = kernels.transitive_closure(n, lower, upper)
    both = leq & leq.T
    np.fill_diagonal(both, 0)
    if both.any():
        i, j = map(int, np.argwhere(both)[0])
        raise CycleDetected(names[i], names[j])

    bottoms = [names[i] for i in range(n) if leq[i].all()]
    tops = [names[j] for j in range(n) if leq[:, j].all()]
    if len(bottoms) != 1:
        raise NoBottom(_minimal(leq, names))
    if len(tops) != 1:
        raise NoTop(_maximal(leq, names))
    if draft.bottom is not None and draft.bottom != bottoms[0]:
        raise NoBottom([draft.bottom, bottoms[0]])
    if draft.top is not None and draft.top != tops[0]:
        raise NoTop([draft.top, tops[0]])

    meet, bad_i, bad_j = kernels.meet_table(leq)
    if bad_i >= 0:
        raise NoMeet(names[bad_i], names[bad_j])
    return Lattice(names, leq, meet, index[bottoms[0]], index[tops[0]])


def _row_masks(matrix) -> list[int]:
    packed = np.packbits(np.ascontiguousarray(matrix, dtype=np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _minimal(leq, names):
    n = len(names)
    return [names[i] for i in range(n) if leq[:, i].sum() == 1]


def _maximal(leq, names):
    n = len(names)
    return [names[i] for i in range(n) if leq[i].sum() == 1]


def chain_lattice(length: int, prefix: str = "c") -> Lattice:
    """Chain ``c0 < c1 < ... < c{length-1}``."""
    names = [f"{prefix}{i}" for i in range(length)]
    return build_lattice(PosetDraft(names, list(zip(names, names[1:]))))


def diamond_lattice() -> Lattice:
    """The four-element lattice 0 < a, b < 1 with a, b incomparable."""
    return build_lattice(
        PosetDraft(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    )


def powerset_point_name(atoms: Sequence[str]) -> str:
    return "{" + "+".join(atoms) + "}"


def gen_powerset_lattice(atoms: Sequence[str]) -> Lattice:
    """Lattice of atom sets read as conjunctions of propositional letters.

    A set with more atoms is a stronger point, so it sits lower: the full
    set is bottom, the empty set (named ``{}``) is top and the meet is set
    union. Points are named like ``{p1+p2}``.
    """
    atoms = list(atoms)
    if not 1 <= len(atoms) <= MAX_ATOMS:
        raise TooManyAtoms(f"need 1..{MAX_ATOMS} atoms, got {len(atoms)}")
    if len(set(atoms)) != len(atoms):
        raise MalformedDraft("duplicate atoms")
    for atom in atoms:
        if not valid_name(atom) or any(c in atom for c in "{}+"):
            raise MalformedDraft(f"invalid atom name {atom!r}")
    subsets = [
        combo for size in range(len(atoms), -1, -1) for combo in combinations(atoms, size)
    ]
    names = [powerset_point_name(s) for s in subsets]
    covers = []
    for s in subsets:
        for atom in s:
            smaller = tuple(a for a in s if a != atom)
            covers.append((powerset_point_name(s), powerset_point_name(smaller)))
    return build_lattice(PosetDraft(names, covers))


def gen_divisor_lattice(n: int) -> Lattice:
    """Divisors of ``n`` ordered by divisibility; meet is gcd, bottom 1, top n."""
    if not isinstance(n, int) or not 2 <= n <= 10**6:
        raise OutOfRange(f"n must be an integer in [2, 10^6], got {n!r}")
    divisors = sorted(d for d in range(1, math.isqrt(n) + 1) if n % d == 0)
    divisors = sorted(set(divisors) | {n // d for d in divisors})
    primes = [p for p in divisors if p > 1 and all(p % q for q in range(2, math.isqrt(p) + 1))]
    covers = [(str(d), str(d * p)) for d in divisors for p in primes if n % (d * p) == 0]
    return build_lattice(PosetDraft([str(d) for d in divisors], covers))


def require_same(*lattices: Lattice) -> Lattice:
    first = lattices[0]
    for other in lattices[1:]:
        if other is not first:
            raise LatticeMismatch("objects are bound to different lattices")
    return first
