"""Derivations over a generator set: the SI/WO/AND closure, proof trees,
normal-form proof synthesis and proof checking.

Rules, for pairs ``(body, head)``::

    SI    (a, x)   b <= a   /  (b, x)
    WO    (a, x)   x <= y   /  (a, y)
    AND   (a, x)   (a, y)   /  (a, x & y)

plus the axioms: every pair of G, and ``(top, top)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Iterable

from ._backend import kernels
from .errors import LatticeMismatch, NotDerivable, ParseError
from .lattice import Lattice, OutputSet
from .output import GeneratorSet, heads_below


class Rule(str, Enum):
    AXIOM_G = "AXIOM_G"
    AXIOM_TOP = "AXIOM_TOP"
    SI = "SI"
    WO = "WO"
    AND = "AND"

    def __str__(self):
        return self.value


_ARITY = {Rule.AXIOM_G: 0, Rule.AXIOM_TOP: 0, Rule.SI: 1, Rule.WO: 1, Rule.AND: 2}
_CODES = [Rule.AXIOM_G, Rule.AXIOM_TOP, Rule.SI, Rule.WO, Rule.AND]


@dataclass(frozen=True)
class ProofTree:
    """One rule application and the subtrees proving its premises.

    ``side`` records the order fact used by SI (``(b, a)`` for ``b <= a``)
    and WO (``(x, y)`` for ``x <= y``); it is ``None`` for other rules.
    """

    conclusion: tuple[str, str]
    rule: Rule
    premises: tuple[ProofTree, ...] = ()
    side: tuple[str, str] | None = None

    def __post_init__(self):
        if type(self.conclusion) is not tuple:
            object.__setattr__(self, "conclusion", tuple(self.conclusion))
        if type(self.rule) is not Rule:
            object.__setattr__(self, "rule", Rule(self.rule))
        if type(self.premises) is not tuple:
            object.__setattr__(self, "premises", tuple(self.premises))
        if self.side is not None and type(self.side) is not tuple:
            object.__setattr__(self, "side", tuple(self.side))

    @property
    def body(self) -> str:
        return self.conclusion[0]

    @property
    def head(self) -> str:
        return self.conclusion[1]

    def depth(self) -> int:
        return 1 + max((p.depth() for p in self.premises), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def leaves(self) -> list[ProofTree]:
        if not self.premises:
            return [self]
        return [leaf for p in self.premises for leaf in p.leaves()]

    def to_dict(self) -> dict:
        out = {"concl": list(self.conclusion), "rule": self.rule.value}
        if self.side is not None:
            out["side"] = list(self.side)
        out["premises"] = [p.to_dict() for p in self.premises]
        return out

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data, _path="$") -> ProofTree:
        if not isinstance(data, dict):
            raise ParseError("<proof>", None, f"{_path}: expected an object")
        try:
            concl = data["concl"]
            rule = Rule(data["rule"])
        except KeyError as exc:
            raise ParseError("<proof>", None, f"{_path}: missing key {exc}") from None
        except ValueError:
            raise ParseError("<proof>", None, f"{_path}: unknown rule {data['rule']!r}") from None
        if not (isinstance(concl, list) and len(concl) == 2 and all(isinstance(c, str) for c in concl)):
            raise ParseError("<proof>", None, f"{_path}.concl: expected [body, head]")
        side = data.get("side")
        if side is not None and not (
            isinstance(side, list) and len(side) == 2 and all(isinstance(c, str) for c in side)
        ):
            raise ParseError("<proof>", None, f"{_path}.side: expected a pair of names")
        premises = data.get("premises", [])
        if not isinstance(premises, list):
            raise ParseError("<proof>", None, f"{_path}.premises: expected a list")
        subtrees = tuple(
            cls.from_dict(p, f"{_path}.premises[{i}]") for i, p in enumerate(premises)
        )
        return cls(tuple(concl), rule, subtrees, tuple(side) if side else None)

    @classmethod
    def from_json(cls, text: str) -> ProofTree:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError("<proof>", exc.lineno, exc.msg) from None
        return cls.from_dict(data)

    def render(self) -> str:
        """Indented text form, conclusion first, one node per line."""
        rows = []

        def walk(node, depth):
            text = "  " * depth + f"({node.body}, {node.head})"
            if node.side is not None:
                text += f"   [{node.side[0]} <= {node.side[1]}]"
            rows.append((text, node.rule.value))
            for p in node.premises:
                walk(p, depth + 1)

        walk(self, 0)
        width = max(len(t) for t, _ in rows) + 2
        rule_width = max(len(r) for _, r in rows)
        return "\n".join(t.ljust(width) + r.rjust(rule_width) for t, r in rows)


class DerivClosure:
    """The set of pairs derivable from a generator set, with witnesses.

    Built by :func:`closure`. Witness trees are assembled on demand from
    the per-pair rule records of the fixpoint.
    """

    def __init__(self, lattice: Lattice, generators: GeneratorSet, present, rule, prem1, prem2):
        self.lattice = lattice
        self.generators = generators
        self._present = present.tolist()
        self._rule = rule.tolist()
        self._prem1 = prem1.tolist()
        self._prem2 = prem2.tolist()
        self._witness_cache: dict[tuple[int, int], ProofTree] = {}
        n = lattice.size
        self.head_masks = [
            sum(1 << y for y in range(n) if self._present[b][y]) for b in range(n)
        ]

    def has_index(self, body: int, head: int) -> bool:
        return bool(self._present[body][head])

    def __contains__(self, pair) -> bool:
        body, head = pair
        return self.has_index(self.lattice.index(body), self.lattice.index(head))

    def __len__(self):
        return sum(bin(m).count("1") for m in self.head_masks)

    @property
    def pairs(self) -> frozenset[tuple[str, str]]:
        names = self.lattice.elements
        n = self.lattice.size
        return frozenset(
            (names[b], names[y]) for b in range(n) for y in range(n) if self._present[b][y]
        )

    def heads(self, body: str) -> OutputSet:
        return OutputSet(self.lattice, self.head_masks[self.lattice.index(body)])

    def rule_of(self, pair) -> Rule:
        body, head = pair
        code = self._rule[self.lattice.index(body)][self.lattice.index(head)]
        if code < 0:
            raise NotDerivable(body, head)
        return _CODES[code]

    def witness(self, pair) -> ProofTree:
        body, head = pair
        return self._witness(self.lattice.index(body), self.lattice.index(head))

    def _witness(self, b: int, y: int) -> ProofTree:
        cached = self._witness_cache.get((b, y))
        if cached is not None:
            return cached
        names = self.lattice.elements
        n = self.lattice.size
        code = self._rule[b][y]
        if code < 0:
            raise NotDerivable(names[b], names[y])
        rule = _CODES[code]
        concl = (names[b], names[y])
        p1, p2 = self._prem1[b][y], self._prem2[b][y]
        if rule in (Rule.AXIOM_G, Rule.AXIOM_TOP):
            tree = ProofTree(concl, rule)
        elif rule is Rule.SI:
            a = p1 // n
            tree = ProofTree(concl, rule, (self._witness(a, y),), (names[b], names[a]))
        elif rule is Rule.WO:
            x = p1 % n
            tree = ProofTree(concl, rule, (self._witness(b, x),), (names[x], names[y]))
        else:
            tree = ProofTree(
                concl, rule, (self._witness(b, p1 % n), self._witness(b, p2 % n))
            )
        self._witness_cache[(b, y)] = tree
        return tree


def _bound(lattice: Lattice, g: GeneratorSet) -> None:
    if g.lattice is not lattice:
        raise LatticeMismatch("generator set is bound to a different lattice")


@lru_cache(maxsize=256)
def _closure(lattice: Lattice, g: GeneratorSet) -> DerivClosure:
    bodies = [b for b, _ in g.index_pairs]
    heads = [h for _, h in g.index_pairs]
    present, rule, prem1, prem2 = kernels.derivation_fixpoint(
        lattice.leq_matrix, lattice.meet_table, bodies, heads, lattice.top_index
    )
    return DerivClosure(lattice, g, present, rule, prem1, prem2)


def closure(lattice: Lattice, g: GeneratorSet) -> DerivClosure:
    """Least set of pairs that contains ``g`` and ``(top, top)`` and is closed
    under SI, WO and AND.

    When a pair can be obtained several ways in the same round, its witness
    uses the first applicable rule in the order SI, WO, AND with the
    lowest-indexed premises.
    """
    _bound(lattice, g)
    return _closure(lattice, g)


def derivable(
    lattice: Lattice, g: GeneratorSet, A: OutputSet | Iterable[str], x: str
) -> bool:
    """Whether ``(A, x)`` is derivable, i.e. ``(inf A, x)`` is in the closure.

    An empty ``A`` stands for the empty conjunction, top.
    """
    _bound(lattice, g)
    body = lattice.inf_index(lattice.subset(A).mask)
    return closure(lattice, g).has_index(body, lattice.index(x))


def synthesize_proof(
    lattice: Lattice, g: GeneratorSet, A: OutputSet | Iterable[str], x: str
) -> ProofTree:
    """Normal-form derivation of ``(inf A, x)``.

    With no generator body above ``inf A`` the tree is ``(top, top)``
    followed by one SI step. Otherwise every generator ``(b_i, x_i)`` with
    ``b_i`` above ``inf A`` is strengthened by SI to body ``inf A``, the
    results are combined by a right-leaning chain of binary AND steps, and
    one WO step reaches ``x``. Reflexive SI/WO steps are kept.

    Raises:
        NotDerivable: ``x`` is not reachable from ``A``.
    """
    _bound(lattice, g)
    names = lattice.elements
    a = lattice.inf_index(lattice.subset(A).mask)
    xi = lattice.index(x)
    top = lattice.top_index
    body = names[a]
    leaves = heads_below(lattice, g, a)

    if not leaves:
        if xi != top:
            raise NotDerivable(body, x)
        axiom = ProofTree((names[top], names[top]), Rule.AXIOM_TOP)
        return ProofTree((body, names[top]), Rule.SI, (axiom,), (body, names[top]))

    strengthened = [
        ProofTree(
            (body, names[h]),
            Rule.SI,
            (ProofTree((names[b], names[h]), Rule.AXIOM_G),),
            (body, names[b]),
        )
        for b, h in leaves
    ]
    node = strengthened[-1]
    for left in reversed(strengthened[:-1]):
        node = ProofTree((body, lattice.meet(left.head, node.head)), Rule.AND, (left, node))
    if not lattice.leq(node.head, x):
        raise NotDerivable(body, x)
    return ProofTree((body, x), Rule.WO, (node,), (node.head, x))


@dataclass(frozen=True)
class ProofCheck:
    """Verdict of :func:`check_proof`.

    ``path`` lists premise indices from the root to the first offending
    node (empty for the root).
    """

    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""
    nodes_checked: int = field(default=0, compare=False)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "valid"
        where = "root" if not self.path else "root" + "".join(f".premises[{i}]" for i in self.path)
        return f"invalid at {where}: {self.reason}"


def _node_violation(lattice: Lattice, g: GeneratorSet, t: ProofTree) -> str | None:
    index = lattice.index
    body, head = t.conclusion
    bi, hi = index(body), index(head)
    if t.side is not None:
        index(t.side[0]), index(t.side[1])
    rule = t.rule
    premises = t.premises
    if len(premises) != _ARITY[rule]:
        return f"{rule} needs {_ARITY[rule]} premise(s), got {len(premises)}"
    leq = lattice.leq_matrix
    if rule is Rule.AXIOM_G:
        if (bi, hi) not in g._pairset:
            return f"({body}, {head}) is not a generator"
    elif rule is Rule.AXIOM_TOP:
        if bi != lattice.top_index or hi != lattice.top_index:
            return f"AXIOM_TOP must conclude ({lattice.top}, {lattice.top})"
    elif rule is Rule.SI:
        a, x = premises[0].conclusion
        if x != head:
            return f"SI changes the head from {x} to {head}"
        if not leq[bi, index(a)]:
            return f"SI side condition fails: not {body} <= {a}"
        if t.side is not None and t.side != (body, a):
            return f"SI side annotation {t.side} does not match ({body}, {a})"
    elif rule is Rule.WO:
        a, x = premises[0].conclusion
        if a != body:
            return f"WO changes the body from {a} to {body}"
        if not leq[index(x), hi]:
            return f"WO side condition fails: not {x} <= {head}"
        if t.side is not None and t.side != (x, head):
            return f"WO side annotation {t.side} does not match ({x}, {head})"
    else:
        (a1, x1), (a2, x2) = premises[0].conclusion, premises[1].conclusion
        if a1 != body or a2 != body:
            return f"AND premises must share the body {body}"
        expected = lattice.meet(x1, x2)
        if head != expected:
            return f"AND concludes {head}, expected meet({x1}, {x2}) = {expected}"
        if t.side is not None:
            return "AND carries no side condition"
    return None


def check_proof(lattice: Lattice, g: GeneratorSet, t: ProofTree) -> ProofCheck:
    """Check every node of ``t`` against the rules; report the first failure
    in pre-order."""
    _bound(lattice, g)
    stack = [(t, ())]
    count = 0
    while stack:
        node, path = stack.pop()
        count += 1
        problem = _node_violation(lattice, g, node)
        if problem is not None:
            return ProofCheck(False, path, problem, count)
        for i in range(len(node.premises) - 1, -1, -1):
            stack.append((node.premises[i], path + (i,)))
    return ProofCheck(True, (), "", count)


def normal_form_violation(
    lattice: Lattice, g: GeneratorSet, t: ProofTree, A: OutputSet | Iterable[str]
) -> str | None:
    """Describe how ``t`` departs from the shape built by
    :func:`synthesize_proof` for input ``A``; ``None`` if it matches."""
    body = lattice.inf_set(A)
    if t.body != body:
        return f"root body {t.body} is not inf A = {body}"
    expected_leaves = {
        (lattice.elements[b], lattice.elements[h])
        for b, h in heads_below(lattice, g, lattice.index(body))
    }
    if not expected_leaves:
        if t.rule is not Rule.SI or len(t.premises) != 1:
            return "empty jump image: root must be a single SI step"
        if t.premises[0].rule is not Rule.AXIOM_TOP:
            return "empty jump image: SI must rest on AXIOM_TOP"
        return None
    if t.rule is not Rule.WO or len(t.premises) != 1:
        return "root must be a WO step"
    node = t.premises[0]
    seen = []
    while True:
        if node.rule is Rule.AND:
            if len(node.premises) != 2:
                return "AND must be binary"
            left, node = node.premises
            if left.rule is not Rule.SI:
                return "left premise of AND must be an SI step"
            seen.append(left)
            continue
        if node.rule is not Rule.SI:
            return f"expected SI or AND in the chain, found {node.rule}"
        seen.append(node)
        break
    leaves = []
    for step in seen:
        if len(step.premises) != 1 or step.premises[0].rule is not Rule.AXIOM_G:
            return "each SI step must rest on an AXIOM_G leaf"
        if step.body != body:
            return f"SI step must strengthen to {body}"
        leaves.append(step.premises[0].conclusion)
    if len(leaves) != len(set(leaves)) or set(leaves) != expected_leaves:
        return "leaves differ from the generators with body above inf A"
    return None
