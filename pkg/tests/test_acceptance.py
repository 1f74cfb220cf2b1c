"""Acceptance criteria, one PASS/FAIL line each.

Run directly for the summary lines::

    python3 tests/test_acceptance.py

Under pytest the same lines are collected and shown in the terminal summary.
"""
import json
import subprocess
import sys
import time
from pathlib import Path

import pytest

from iolat.errors import NoMeet
from iolat.fuzz import fuzz_suite
from iolat.lattice import PosetDraft, build_lattice, gen_divisor_lattice
from iolat.output import GeneratorSet
from iolat.verify import (
    check_equivalence,
    check_lemmas,
    check_proofs,
    check_rules,
    named_instances,
    run_suite,
)

try:
    from oracles import brute_out1, divides
except ImportError:  # run as a script from elsewhere
    sys.path.insert(0, str(Path(__file__).resolve().parent))
    from oracles import brute_out1, divides

HERE = Path(__file__).resolve().parent
DATA = HERE.parent / "data"
GOLDEN = HERE / "golden"
SEED = 2024
COUNT = 500
RESULTS: list[str] = []


def record(number, title, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} [{number}] {title}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, time.perf_counter() - start


@pytest.fixture(scope="module")
def instances():
    named = named_instances()
    fuzzed = [(f"fuzz-{k}", lat, g) for k, (_, lat, g) in
              enumerate(fuzz_suite(SEED, COUNT, sizes=(2, 10), max_generators=8))]
    assert len(fuzzed) == COUNT
    assert all(2 <= lat.size <= 10 and len(g) <= 8 for _, lat, g in fuzzed)
    return named + fuzzed


def test_1_lemma_suite(instances):
    reports, elapsed = timed(lambda: [check_lemmas(lat) for _, lat, _ in instances])
    props = ("inf_antitone", "inf_greatest", "inclusion", "idempotence", "monotony")
    checked = sum(r.counts[p]["checked"] for r in reports for p in props)
    failed = sum(r.counts[p]["failed"] for r in reports for p in props)
    ok = failed == 0 and all(r.ok for r in reports) and elapsed < 5.0
    record(1, "lemma suite", ok,
           f"{len(reports)} lattices, {checked} checks, {failed} violations, {elapsed:.2f}s (< 5s)")


def test_2_rule_suite(instances):
    reports, elapsed = timed(lambda: [check_rules(lat, g) for _, lat, g in instances])
    props = ("si", "wo", "and", "restricted_and")
    checked = sum(r.counts[p]["checked"] for r in reports for p in props)
    failed = sum(r.counts[p]["failed"] for r in reports for p in props)
    ok = failed == 0 and all(r.ok for r in reports) and elapsed < 10.0
    record(2, "rule suite", ok,
           f"{len(reports)} generator sets, {checked} checks, {failed} violations, {elapsed:.2f}s (< 10s)")


def test_3_equivalence(instances):
    small = [(lat, g) for _, lat, g in instances if lat.size <= 10]
    reports, elapsed = timed(lambda: [check_equivalence(lat, g, "all_subsets") for lat, g in small])
    inputs = sum(r.inputs_checked for r in reports)
    mismatches = sum(r.mismatch_count for r in reports)
    ok = len(small) == len(instances) and mismatches == 0 and elapsed < 60.0
    record(3, "soundness and completeness", ok,
           f"{len(small)} instances, {inputs} (A, x) inputs, {mismatches} mismatches, {elapsed:.2f}s (< 60s)")


def _cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "iolat", *map(str, argv)],
                          capture_output=True, check=False)
    return proc.returncode, proc.stdout


GOLDEN_CASES = [
    ("pow2_p1.txt", ("out1", "-l", DATA / "pow2.lat", "-g", DATA / "ex1.gen", "-i", "{p1}")),
    ("divisor12.txt", ("out1", "-l", DATA / "d12.lat", "-g", DATA / "d12.gen", "-i", "2")),
    ("divisor12.json", ("out1", "-l", DATA / "d12.lat", "-g", DATA / "d12.gen", "-i", "2",
                        "--format", "json")),
    ("divisor12_proof.txt", ("prove", "-l", DATA / "d12.lat", "-g", DATA / "d12.gen", "-p", "2,6")),
    ("divisor12_proof.json", ("prove", "-l", DATA / "d12.lat", "-g", DATA / "d12.gen", "-p", "2,6",
                              "--format", "json")),
]


def test_4_golden_examples():
    # the divisor value is frozen only if the brute-force oracle agrees
    d12 = gen_divisor_lattice(12)
    elements = [str(d) for d in (1, 2, 3, 4, 6, 12)]
    oracle = brute_out1(elements, divides, [("2", "3")], ["2"])
    problems = []
    if oracle != {"3", "6", "12"}:
        problems.append(f"oracle gives {sorted(oracle)}")
    for name, argv in GOLDEN_CASES:
        expected = (GOLDEN / name).read_bytes()
        runs = [_cli(*argv) for _ in range(2)]
        if any(code != 0 or out != expected for code, out in runs):
            problems.append(name)
    ok = not problems
    record(4, "golden examples", ok,
           f"{len(GOLDEN_CASES)} files byte-identical over 2 runs" if ok else f"differs: {problems}")


def test_5_proof_round_trip(instances):
    reports = [check_proofs(lat, g, "all_subsets") for _, lat, g in instances]
    proofs = sum(r.counts["round_trip"]["checked"] for r in reports)
    failed = sum(r.counts["round_trip"]["failed"] for r in reports)
    refused = sum(r.counts["not_derivable_refused"]["checked"] for r in reports)
    wrongly = sum(r.counts["not_derivable_refused"]["failed"] for r in reports)
    ok = failed == 0 and wrongly == 0 and proofs > 0
    record(5, "proof round-trip", ok,
           f"{proofs} normal-form proofs checked, {failed} failures; "
           f"{refused} non-derivable pairs refused, {wrongly} wrongly proved")


def test_6_bowtie_rejected():
    draft = PosetDraft(
        ["0", "a1", "a2", "a3", "a4", "1"],
        [("0", "a1"), ("0", "a2"), ("a1", "a3"), ("a1", "a4"), ("a2", "a3"), ("a2", "a4"),
         ("a3", "1"), ("a4", "1")],
    )
    try:
        build_lattice(draft)
        outcome = None
    except NoMeet as exc:
        outcome = exc
    ok = outcome is not None and {outcome.a, outcome.b} == {"a3", "a4"}
    record(6, "non-lattice rejected", ok,
           f"build_lattice raised {type(outcome).__name__}({outcome.a}, {outcome.b})"
           if outcome is not None else "build_lattice accepted the poset")


def test_7_determinism():
    first, elapsed = timed(lambda: json.dumps(run_suite(seed=SEED, count=COUNT), sort_keys=True))
    second = json.dumps(run_suite(seed=SEED, count=COUNT), sort_keys=True)
    ok = first == second and json.loads(first)["ok"]
    record(7, "deterministic verify report", ok,
           f"2 runs of seed {SEED}, {len(first)} bytes each, identical={first == second}, "
           f"{elapsed:.1f}s per run")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
