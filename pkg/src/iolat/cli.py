"""Command-line front end.

Exit status: 0 success, 1 parse or validation error, 2 unknown element in
a query, 3 a check failed (verify, check-proof).
"""
from __future__ import annotations

import argparse
import json
import os
import random
import sys

from .derivation import ProofTree, check_proof, derivable, synthesize_proof
from .errors import IolatError, NotDerivable, ParseError, UnknownElement, ValidationError
from .formats import dumps_generators, dumps_lattice, load_generators, load_lattice
from .fuzz import random_generators, random_lattice
from .lattice import gen_divisor_lattice, gen_powerset_lattice
from .output import GeneratorSet, out1
from .verify import run_suite, verify_instance

EXIT_OK, EXIT_PARSE, EXIT_UNKNOWN, EXIT_FAILED = 0, 1, 2, 3


class _Style:
    def __init__(self, stream):
        mode = os.environ.get("IOLAT_COLOR", "auto")
        self.enabled = mode != "never" and hasattr(stream, "isatty") and stream.isatty()

    def __call__(self, text, good):
        if not self.enabled:
            return text
        return f"\x1b[{32 if good else 31}m{text}\x1b[0m"


def parse_elements(text: str) -> list[str]:
    """Comma-separated element names; the empty string is the empty set."""
    text = text.strip()
    if not text:
        return []
    return [part.strip() for part in text.split(",")]


def parse_pair(text: str) -> tuple[str, str]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ParseError("--pair", None, f"expected 'body,head', got {text!r}")
    return parts[0], parts[1]


def _emit(args, payload, text):
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _load(args, need_gens=True):
    lattice = load_lattice(args.lattice)
    if getattr(args, "gens", None):
        gens = load_generators(args.gens, lattice)
    elif need_gens:
        raise ParseError("<args>", None, "a generator file (-g) is required")
    else:
        gens = GeneratorSet(lattice)
    return lattice, gens


def cmd_out1(args) -> int:
    lattice, gens = _load(args)
    A = parse_elements(args.input)
    result = out1(lattice, gens, A)
    payload = {"input": list(lattice.canonical(A)), "output": list(result.members)}
    _emit(args, payload, str(result))
    return EXIT_OK


def cmd_derive(args) -> int:
    lattice, gens = _load(args)
    body, head = parse_pair(args.pair)
    ok = derivable(lattice, gens, [body], head)
    style = _Style(sys.stdout)
    _emit(args, {"pair": [body, head], "derivable": ok},
          f"derivable: {style(str(ok).lower(), ok)}")
    return EXIT_OK


def cmd_prove(args) -> int:
    lattice, gens = _load(args)
    body, head = parse_pair(args.pair)
    try:
        tree = synthesize_proof(lattice, gens, [body], head)
    except NotDerivable:
        _emit(args, {"pair": [body, head], "derivable": False}, "not derivable")
        return EXIT_OK
    if args.format == "json":
        print(tree.to_json())
    else:
        print(tree.render())
    return EXIT_OK


def cmd_check_proof(args) -> int:
    lattice, gens = _load(args)
    if args.proof and args.proof != "-":
        with open(args.proof, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = sys.stdin.read()
    tree = ProofTree.from_json(text)
    verdict = check_proof(lattice, gens, tree)
    style = _Style(sys.stdout)
    payload = {
        "valid": verdict.ok,
        "conclusion": list(tree.conclusion),
        "path": list(verdict.path),
        "reason": verdict.reason,
    }
    text_out = (
        f"{style('valid', True)}: ({tree.body}, {tree.head})"
        if verdict.ok
        else style(verdict.describe(), False)
    )
    _emit(args, payload, text_out)
    return EXIT_OK if verdict.ok else EXIT_FAILED


def _instance_line(style, r):
    status = style("PASS" if r["ok"] else "FAIL", r["ok"])
    eq = r["equivalence"]
    line = (
        f"{status} {r['name']}: |L|={r['lattice_size']} |G|={len(r['generators'])} "
        f"{eq['mode']} inputs={eq['inputs_checked']} mismatches={eq['mismatch_count']}"
    )
    if "proofs" in r:
        line += f" proofs={r['proofs']['counts']['round_trip']['checked']}"
    return line


def cmd_verify(args) -> int:
    style = _Style(sys.stdout)
    proofs = not args.no_proofs
    if args.lattice:
        lattice, gens = _load(args, need_gens=False)
        exhaustive = True if args.exhaustive else None
        report = verify_instance(os.path.basename(args.lattice), lattice, gens,
                                 exhaustive=exhaustive, seed=args.seed, proofs=proofs)
        if args.format == "json":
            print(json.dumps(report, sort_keys=True))
        else:
            print(_instance_line(style, report))
            for section in ("lemmas", "rules", "proofs"):
                if section in report:
                    for prop, c in report[section]["counts"].items():
                        print(f"  {section}.{prop}: checked={c['checked']} failed={c['failed']}")
        return EXIT_OK if report["ok"] else EXIT_FAILED

    count = 500 if args.count is None else args.count
    report = run_suite(seed=args.seed, count=count, sizes=(args.min_size, args.max_size),
                       proofs=proofs)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        for r in report["instances"]:
            if args.verbose or not r["ok"]:
                print(_instance_line(style, r))
        t = report["totals"]
        summary = (
            f"instances={t['instances']} failed={t['failed_instances']} "
            f"equivalence_inputs={t['equivalence_inputs']} "
            f"mismatches={t['equivalence_mismatches']}"
        )
        if "proofs_checked" in t:
            summary += f" proofs={t['proofs_checked']}"
        print(f"{style('PASS' if report['ok'] else 'FAIL', report['ok'])} {summary}")
    return EXIT_OK if report["ok"] else EXIT_FAILED


def cmd_gen(args) -> int:
    if args.kind == "powerset":
        lattice = gen_powerset_lattice([f"p{i}" for i in range(1, int(args.n) + 1)])
        gens = None
    elif args.kind == "divisor":
        lattice = gen_divisor_lattice(int(args.n))
        gens = None
    else:
        rng = random.Random(args.seed)
        size = int(args.n) if args.n is not None else args.size
        lattice = random_lattice(rng, size, args.density)
        gens = random_generators(rng, lattice, args.generators)
    text = dumps_lattice(lattice, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.gens_out:
        if gens is None:
            gens = GeneratorSet(lattice)
        with open(args.gens_out, "w", encoding="utf-8") as fh:
            fh.write(dumps_generators(gens, args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iolat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, lattice=True, gens=True):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("text", "json"), default="text")
        if lattice:
            p.add_argument("-l", "--lattice", required=lattice == "required")
        if gens:
            p.add_argument("-g", "--gens")
        return p

    p = add("out1", cmd_out1, "compute out1(G, A)", lattice="required")
    p.add_argument("-i", "--input", required=True, help="comma-separated input elements")

    p = add("derive", cmd_derive, "decide derivability of a pair", lattice="required")
    p.add_argument("-p", "--pair", required=True, help="body,head")

    p = add("prove", cmd_prove, "print a normal-form derivation", lattice="required")
    p.add_argument("-p", "--pair", required=True, help="body,head")

    p = add("check-proof", cmd_check_proof, "check a proof JSON (stdin)", lattice="required")
    p.add_argument("--proof", help="read the proof from this file instead of stdin")

    p = add("verify", cmd_verify, "run the verification suites")
    p.add_argument("--exhaustive", action="store_true", help="quantify over all input subsets")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, help="fuzzed instances when no lattice is given (default 500)")
    p.add_argument("--min-size", type=int, default=2)
    p.add_argument("--max-size", type=int, default=10)
    p.add_argument("--no-proofs", action="store_true", help="skip the proof round-trip")
    p.add_argument("-v", "--verbose", action="store_true")

    p = add("gen", cmd_gen, "write a generated lattice", lattice=False, gens=False)
    p.add_argument("kind", choices=("powerset", "divisor", "random"))
    p.add_argument("n", nargs="?", help="atoms (powerset), n (divisor) or size (random)")
    p.add_argument("-o", "--output")
    p.add_argument("--gens-out", help="also write a generator file (random generators for 'random')")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--size", type=int, default=6)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--generators", type=int, default=3)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.kind != "random" and args.n is None:
        parser.error(f"gen {args.kind} needs n")
    try:
        return args.func(args)
    except UnknownElement as exc:
        print(f"iolat: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ParseError, ValidationError, IolatError, OSError, ValueError) as exc:
        print(f"iolat: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
