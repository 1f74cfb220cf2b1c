"""Exhaustive and sampled checks of the lattice laws, the output rules, and
the agreement between out1 and derivability.

The semantic side of every comparison goes through :func:`iolat.output.out1`
and the syntactic side through :func:`iolat.derivation.derivable`; neither
is used to compute the other.
"""
from __future__ import annotations

import random
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable

import numpy as np

from .derivation import check_proof, derivable, normal_form_violation, synthesize_proof
from .errors import NotDerivable, TooLarge
from .lattice import (
    Lattice,
    OutputSet,
    diamond_lattice,
    gen_divisor_lattice,
    gen_powerset_lattice,
    iter_bits,
)
from .output import GeneratorSet, out1

EXHAUSTIVE_LIMIT = 12
SAMPLE_SIZE = 10_000
MAX_REPORTED = 20


@dataclass
class EquivalenceReport:
    lattice_size: int
    generator_count: int
    inputs_checked: int
    mismatches: list = field(default_factory=list)
    mismatch_count: int = 0

    @property
    def ok(self) -> bool:
        return self.mismatch_count == 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PropertyReport:
    """Outcome of a family of quantified checks.

    ``violations`` holds at most ``MAX_REPORTED`` witnesses; ``counts`` has
    the number of instances checked and failed per property.
    """

    kind: str
    lattice_size: int
    exhaustive: bool
    counts: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["failed"] == 0 for c in self.counts.values())

    def _record(self, prop: str, checked: int, failed_witnesses: list) -> None:
        entry = self.counts.setdefault(prop, {"checked": 0, "failed": 0})
        entry["checked"] += checked
        entry["failed"] += len(failed_witnesses)
        for w in failed_witnesses:
            if len(self.violations) < MAX_REPORTED:
                self.violations.append({"property": prop, "witness": w})

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "lattice_size": self.lattice_size,
            "exhaustive": self.exhaustive,
            "ok": self.ok,
            "counts": self.counts,
            "violations": self.violations,
        }


def _names(lattice: Lattice, mask: int) -> list[str]:
    return list(OutputSet(lattice, int(mask)).members)


@lru_cache(maxsize=16)
def _subset_pairs(n: int):
    """All ``(A, B)`` bitmask pairs with ``A`` a subset of ``B`` over ``n`` bits."""
    a = np.zeros(1, dtype=np.int64)
    b = np.zeros(1, dtype=np.int64)
    for k in range(n):
        bit = 1 << k
        a = np.concatenate([a, a, a | bit])
        b = np.concatenate([b, b | bit, b | bit])
    a.setflags(write=False)
    b.setflags(write=False)
    return a, b


def _input_masks(lattice: Lattice, exhaustive: bool, rng: random.Random) -> list[int]:
    n = lattice.size
    if exhaustive:
        return list(range(1 << n))
    return [rng.getrandbits(n) for _ in range(SAMPLE_SIZE)]


def _use_exhaustive(lattice: Lattice, exhaustive: bool | None) -> bool:
    if exhaustive is None:
        return lattice.size <= EXHAUSTIVE_LIMIT
    if exhaustive and lattice.size > EXHAUSTIVE_LIMIT:
        raise TooLarge(f"exhaustive checks need |L| <= {EXHAUSTIVE_LIMIT}, got {lattice.size}")
    return exhaustive


def check_lemmas(lattice: Lattice, exhaustive: bool | None = None, seed: int = 0) -> PropertyReport:
    """Check the infimum lemmas and the closure laws of ``A -> upset(inf A)``.

    Properties:
        inf_brute_force: the folded infimum equals the maximum of the common
            lower bounds, found directly from the order.
        inf_antitone: ``A <= B`` implies ``inf B <= inf A``.
        inf_greatest: ``x`` below every member of ``A`` implies ``x <= inf A``.
        inclusion, monotony, idempotence: of ``A -> upset(inf A)``.
        upset_inf: ``inf(upset(x)) == x``.
    """
    exhaustive = _use_exhaustive(lattice, exhaustive)
    rng = random.Random(seed)
    n = lattice.size
    report = PropertyReport("lemmas", n, exhaustive)
    up = lattice.up_masks
    down = lattice.down_masks
    by_down = {m: i for i, m in enumerate(down)}

    masks = _input_masks(lattice, exhaustive, rng)
    infs = {}
    lowers = {}
    for mask in masks:
        common = lattice.full_mask
        for i in iter_bits(mask):
            common &= down[i]
        lowers[mask] = common
        infs[mask] = lattice.inf_index(mask)

    failed = []
    for mask in masks:
        brute = by_down.get(lowers[mask])
        if brute != infs[mask]:
            failed.append({"A": _names(lattice, mask), "fold": lattice.elements[infs[mask]],
                           "brute_force": None if brute is None else lattice.elements[brute]})
    report._record("inf_brute_force", len(masks), failed)

    failed = [
        {"A": _names(lattice, m), "lower_bounds_not_below_inf": _names(lattice, lowers[m] & ~down[infs[m]])}
        for m in masks
        if lowers[m] & ~down[infs[m]]
    ]
    report._record("inf_greatest", len(masks), failed)

    cn = {m: up[infs[m]] for m in masks}
    failed = [{"A": _names(lattice, m)} for m in masks if m & ~cn[m]]
    report._record("inclusion", len(masks), failed)

    failed = []
    for m in masks:
        closed = cn[m]
        if up[lattice.inf_index(closed)] != closed:
            failed.append({"A": _names(lattice, m)})
    report._record("idempotence", len(masks), failed)

    if exhaustive:
        inf_arr = np.array([infs[m] for m in range(1 << n)], dtype=np.int64)
        cn_arr = np.array([cn[m] for m in range(1 << n)], dtype=np.int64)
        a, b = _subset_pairs(n)
        bad1 = ~lattice.leq_matrix[inf_arr[b], inf_arr[a]].astype(bool)
        bad2 = (cn_arr[a] & ~cn_arr[b]) != 0
        pair_count = len(a)
        idx1, idx2 = np.flatnonzero(bad1), np.flatnonzero(bad2)
    else:
        pairs = []
        for _ in range(SAMPLE_SIZE):
            big = rng.getrandbits(n)
            pairs.append((big & rng.getrandbits(n), big))
        a = [p[0] for p in pairs]
        b = [p[1] for p in pairs]
        pair_count = len(pairs)
        leq = lattice.leq_matrix
        idx1 = [k for k, (x, y) in enumerate(pairs)
                if not leq[lattice.inf_index(y), lattice.inf_index(x)]]
        idx2 = [k for k, (x, y) in enumerate(pairs)
                if up[lattice.inf_index(x)] & ~up[lattice.inf_index(y)]]
    report._record("inf_antitone", pair_count,
                   [{"A": _names(lattice, a[k]), "B": _names(lattice, b[k])} for k in idx1])
    report._record("monotony", pair_count,
                   [{"A": _names(lattice, a[k]), "B": _names(lattice, b[k])} for k in idx2])

    failed = [{"x": lattice.elements[x]} for x in range(n) if lattice.inf_index(up[x]) != x]
    report._record("upset_inf", n, failed)
    return report


def check_rules(lattice: Lattice, g: GeneratorSet, exhaustive: bool | None = None,
                seed: int = 0) -> PropertyReport:
    """Check that out1 respects SI, WO, AND and restricted AND.

    Properties:
        si: ``b <= a`` implies ``out1(G, {a}) <= out1(G, {b})``.
        wo: every out1 result is upward closed.
        and: ``x, y`` in ``out1(G, {a})`` implies ``meet(x, y)`` is too.
        restricted_and: ``(a, x), (a, y)`` in G puts ``x``, ``y`` and
            ``meet(x, y)`` in ``out1(G, {a})``.
    """
    exhaustive = _use_exhaustive(lattice, exhaustive)
    rng = random.Random(seed)
    n = lattice.size
    names = lattice.elements
    report = PropertyReport("rules", n, exhaustive)
    leq = lattice.leq_matrix
    meet = lattice.meet_table
    outs = [out1(lattice, g, [names[a]]) for a in range(n)]

    failed = []
    checked = 0
    for a in range(n):
        for b in range(n):
            if leq[b, a]:
                checked += 1
                if not outs[a] <= outs[b]:
                    failed.append({"a": names[a], "b": names[b]})
    report._record("si", checked, failed)

    results = list(outs)
    for mask in _input_masks(lattice, exhaustive, rng):
        results.append(out1(lattice, g, OutputSet(lattice, mask)))
    failed = []
    for res in results:
        for x in iter_bits(res.mask):
            if lattice.up_masks[x] & ~res.mask:
                failed.append({"output": list(res.members), "x": names[x]})
                break
    report._record("wo", len(results), failed)

    failed = []
    checked = 0
    for a in range(n):
        members = list(iter_bits(outs[a].mask))
        for x in members:
            for y in members:
                checked += 1
                if not outs[a].mask >> int(meet[x, y]) & 1:
                    failed.append({"a": names[a], "x": names[x], "y": names[y]})
    report._record("and", checked, failed)

    failed = []
    checked = 0
    for a, x in g.index_pairs:
        for a2, y in g.index_pairs:
            if a2 != a:
                continue
            checked += 1
            out = outs[a].mask
            for z in (x, y, int(meet[x, y])):
                if not out >> z & 1:
                    failed.append({"a": names[a], "x": names[x], "y": names[y], "missing": names[z]})
                    break
    report._record("restricted_and", checked, failed)
    return report


def _mode_masks(lattice: Lattice, mode: str) -> list[int]:
    if mode == "singleton":
        return [1 << i for i in range(lattice.size)]
    if mode == "all_subsets":
        if lattice.size > EXHAUSTIVE_LIMIT:
            raise TooLarge(f"all_subsets mode needs |L| <= {EXHAUSTIVE_LIMIT}, got {lattice.size}")
        return list(range(1 << lattice.size))
    raise ValueError(f"unknown mode {mode!r}")


def check_equivalence(lattice: Lattice, g: GeneratorSet, mode: str = "all_subsets") -> EquivalenceReport:
    """Compare ``x in out1(G, A)`` with derivability of ``(A, x)`` for every
    input ``A`` in scope and every element ``x``."""
    masks = _mode_masks(lattice, mode)
    names = lattice.elements
    report = EquivalenceReport(lattice.size, len(g), len(masks))
    for mask in masks:
        A = OutputSet(lattice, mask)
        semantic = out1(lattice, g, A)
        for x in names:
            in_out1 = x in semantic
            in_deriv = derivable(lattice, g, A, x)
            if in_out1 != in_deriv:
                report.mismatch_count += 1
                if len(report.mismatches) < MAX_REPORTED:
                    report.mismatches.append(
                        {"A": list(A.members), "x": x, "in_out1": in_out1, "in_deriv": in_deriv}
                    )
    return report


def _proof_outcome(lattice: Lattice, g: GeneratorSet, A: OutputSet, x: str):
    """``(derivable, problem)`` for one input; ``problem`` is ``None`` when fine."""
    if not derivable(lattice, g, A, x):
        try:
            synthesize_proof(lattice, g, A, x)
        except NotDerivable:
            return False, None
        return False, "proof synthesized for a non-derivable pair"
    try:
        tree = synthesize_proof(lattice, g, A, x)
    except NotDerivable:
        return True, "synthesis refused"
    body = lattice.inf_set(A)
    if tree.conclusion != (body, x):
        return True, f"conclusion {tree.conclusion}"
    verdict = check_proof(lattice, g, tree)
    if not verdict:
        return True, verdict.describe()
    return True, normal_form_violation(lattice, g, tree, A)


def check_proofs(lattice: Lattice, g: GeneratorSet, mode: str = "all_subsets") -> PropertyReport:
    """Synthesize and check a normal-form proof for every derivable ``(A, x)``.

    Non-derivable pairs must make :func:`synthesize_proof` raise.
    """
    masks = _mode_masks(lattice, mode)
    report = PropertyReport("proofs", lattice.size, mode == "all_subsets")
    failed = []
    refused = []
    proofs = 0
    others = 0
    # synthesis and checking see A only through inf A, so outcomes are
    # shared by every input with the same infimum
    outcome = {}
    for mask in masks:
        A = OutputSet(lattice, mask)
        a = lattice.inf_index(mask)
        for x in lattice.elements:
            key = (a, x)
            if key not in outcome:
                outcome[key] = _proof_outcome(lattice, g, A, x)
            is_derivable, problem = outcome[key]
            if is_derivable:
                proofs += 1
                if problem:
                    failed.append({"A": list(A.members), "x": x, "reason": problem})
            else:
                others += 1
                if problem:
                    refused.append({"A": list(A.members), "x": x})
    report._record("round_trip", proofs, failed)
    report._record("not_derivable_refused", others, refused)
    return report


def named_instances() -> list[tuple[str, Lattice, GeneratorSet]]:
    """Fixed instances checked alongside the fuzzed ones."""
    diamond = diamond_lattice()
    d12 = gen_divisor_lattice(12)
    pow2 = gen_powerset_lattice(["p1", "p2"])
    return [
        ("diamond", diamond, GeneratorSet(diamond, [("a", "b"), ("1", "a")])),
        ("divisor-12", d12, GeneratorSet(d12, [("2", "3")])),
        ("divisor-12-and", d12, GeneratorSet(d12, [("2", "4"), ("2", "6"), ("3", "3")])),
        ("powerset-2", pow2, GeneratorSet(pow2, [("{p1}", "{p2}")])),
    ]


def verify_instance(name: str, lattice: Lattice, g: GeneratorSet, exhaustive: bool | None = None,
                    seed: int = 0, proofs: bool = True) -> dict:
    """Run every suite on one instance and return a JSON-ready summary."""
    exhaustive = _use_exhaustive(lattice, exhaustive)
    lemmas = check_lemmas(lattice, exhaustive, seed)
    rules = check_rules(lattice, g, exhaustive, seed)
    out = {
        "name": name,
        "lattice_size": lattice.size,
        "generators": [list(p) for p in g.pairs],
        "lemmas": lemmas.to_dict(),
        "rules": rules.to_dict(),
    }
    ok = lemmas.ok and rules.ok
    mode = "all_subsets" if exhaustive else "singleton"
    equiv = check_equivalence(lattice, g, mode)
    out["equivalence"] = {"mode": mode, "ok": equiv.ok, **equiv.to_dict()}
    ok = ok and equiv.ok
    if proofs:
        proof_report = check_proofs(lattice, g, mode)
        out["proofs"] = proof_report.to_dict()
        ok = ok and proof_report.ok
    out["ok"] = ok
    return out


def run_suite(seed: int = 0, count: int = 500, sizes=(2, 10), max_generators: int = 8,
              include_named: bool = True, proofs: bool = True,
              instances: Iterable[tuple[str, Lattice, GeneratorSet]] = ()) -> dict:
    """Verify the named instances, any extra ``instances`` and ``count``
    fuzzed instances drawn from ``seed``. Deterministic for a given seed."""
    from .fuzz import fuzz_suite

    results = []
    todo = list(named_instances()) if include_named else []
    todo += list(instances)
    for k, (spec, lattice, g) in enumerate(
        fuzz_suite(seed, count, sizes=sizes, max_generators=max_generators)
    ):
        todo.append((f"fuzz-{k}", lattice, g))
    for name, lattice, g in todo:
        results.append(verify_instance(name, lattice, g, seed=seed, proofs=proofs))

    totals = {
        "instances": len(results),
        "failed_instances": sum(not r["ok"] for r in results),
        "equivalence_inputs": sum(r["equivalence"]["inputs_checked"] for r in results),
        "equivalence_mismatches": sum(r["equivalence"]["mismatch_count"] for r in results),
    }
    if proofs:
        totals["proofs_checked"] = sum(
            r["proofs"]["counts"]["round_trip"]["checked"] for r in results
        )
    return {
        "seed": seed,
        "count": count,
        "sizes": list(sizes),
        "ok": totals["failed_instances"] == 0,
        "totals": totals,
        "instances": results,
    }
