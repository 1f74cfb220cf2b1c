"""Readers and writers for lattice and generator files.

Lattice text format::

    lattice v1
    elem <name>            # one per element; order is the tie-break order
    cover <lower> <upper>  # Hasse edge
    bottom <name>          # optional, checked against the inferred bottom
    top <name>             # optional, checked against the inferred top

JSON form: ``{"elements": [...], "covers": [[lo, hi], ...]}``.

Generator text format::

    gens v1
    gen <body> <head>

JSON form: ``{"pairs": [[body, head], ...]}``.
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import ParseError, ValidationError
from .lattice import Lattice, PosetDraft, build_lattice, valid_name
from .output import GeneratorSet


def _significant_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _looks_like_json(text: str, source) -> bool:
    return str(source).endswith(".json") or text.lstrip().startswith("{")


def parse_lattice_text(text: str, source="<string>") -> PosetDraft:
    elements, covers = [], []
    declared = {}
    seen = set()
    header = False
    for lineno, words in _significant_lines(text):
        if not header:
            if words != ["lattice", "v1"]:
                raise ParseError(source, lineno, "expected header 'lattice v1'")
            header = True
            continue
        kind, args = words[0], words[1:]
        if kind == "elem":
            if len(args) != 1:
                raise ParseError(source, lineno, "expected 'elem <name>'")
            name = args[0]
            if not valid_name(name):
                raise ParseError(source, lineno, f"invalid element name {name!r}")
            if name in seen:
                raise ParseError(source, lineno, f"duplicate element {name!r}")
            seen.add(name)
            elements.append(name)
        elif kind == "cover":
            if len(args) != 2:
                raise ParseError(source, lineno, "expected 'cover <lower> <upper>'")
            for name in args:
                if name not in seen:
                    raise ParseError(source, lineno, f"cover references undeclared element {name!r}")
            covers.append((args[0], args[1]))
        elif kind in ("bottom", "top"):
            if len(args) != 1:
                raise ParseError(source, lineno, f"expected '{kind} <name>'")
            declared[kind] = (lineno, args[0])
        else:
            raise ParseError(source, lineno, f"unknown directive {kind!r}")
    if not header:
        raise ParseError(source, 1, "empty file, expected header 'lattice v1'")
    for kind, (lineno, name) in declared.items():
        if name not in seen:
            raise ParseError(source, lineno, f"{kind} names undeclared element {name!r}")
    return PosetDraft(
        elements,
        covers,
        bottom=declared.get("bottom", (0, None))[1],
        top=declared.get("top", (0, None))[1],
    )


def parse_lattice_json(text: str, source="<string>") -> PosetDraft:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(source, exc.lineno, exc.msg) from None
    if not isinstance(data, dict) or not isinstance(data.get("elements"), list):
        raise ParseError(source, None, "expected an object with an 'elements' list")
    elements = data["elements"]
    covers = data.get("covers", [])
    if not all(isinstance(e, str) and valid_name(e) for e in elements):
        raise ParseError(source, None, "element names must be non-empty tokens without whitespace or commas")
    if not isinstance(covers, list) or not all(
        isinstance(c, list) and len(c) == 2 and all(isinstance(x, str) for x in c) for c in covers
    ):
        raise ParseError(source, None, "'covers' must be a list of [lower, upper] pairs")
    return PosetDraft(elements, [tuple(c) for c in covers], data.get("bottom"), data.get("top"))


def loads_lattice(text: str, source="<string>") -> Lattice:
    if _looks_like_json(text, source):
        draft = parse_lattice_json(text, source)
    else:
        draft = parse_lattice_text(text, source)
    try:
        return build_lattice(draft)
    except ValidationError as exc:
        raise ParseError(source, None, f"{type(exc).__name__}: {exc}") from exc


def load_lattice(path) -> Lattice:
    path = Path(path)
    return loads_lattice(_read(path), str(path))


def dumps_lattice(lattice: Lattice, fmt: str = "text") -> str:
    covers = lattice.covers()
    if fmt == "json":
        return json.dumps(
            {"elements": list(lattice.elements), "covers": [list(c) for c in covers]}
        ) + "\n"
    lines = ["lattice v1"]
    lines += [f"elem {name}" for name in lattice.elements]
    lines += [f"cover {lo} {hi}" for lo, hi in covers]
    lines += [f"bottom {lattice.bottom}", f"top {lattice.top}"]
    return "\n".join(lines) + "\n"


def loads_generators(text: str, lattice: Lattice, source="<string>") -> GeneratorSet:
    if _looks_like_json(text, source):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(source, exc.lineno, exc.msg) from None
        pairs = data.get("pairs") if isinstance(data, dict) else None
        if not isinstance(pairs, list) or not all(
            isinstance(p, list) and len(p) == 2 and all(isinstance(x, str) for x in p) for p in pairs
        ):
            raise ParseError(source, None, "expected {\"pairs\": [[body, head], ...]}")
        for body, head in pairs:
            for name in (body, head):
                if name not in lattice:
                    raise ParseError(source, None, f"unknown element {name!r}")
        return GeneratorSet(lattice, [tuple(p) for p in pairs])

    pairs = []
    header = False
    for lineno, words in _significant_lines(text):
        if not header:
            if words != ["gens", "v1"]:
                raise ParseError(source, lineno, "expected header 'gens v1'")
            header = True
            continue
        if words[0] != "gen" or len(words) != 3:
            raise ParseError(source, lineno, "expected 'gen <body> <head>'")
        for name in words[1:]:
            if name not in lattice:
                raise ParseError(source, lineno, f"unknown element {name!r}")
        pairs.append((words[1], words[2]))
    if not header:
        raise ParseError(source, 1, "empty file, expected header 'gens v1'")
    return GeneratorSet(lattice, pairs)


def load_generators(path, lattice: Lattice) -> GeneratorSet:
    path = Path(path)
    return loads_generators(_read(path), lattice, str(path))


def dumps_generators(g: GeneratorSet, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"pairs": [list(p) for p in g.pairs]}) + "\n"
    return "\n".join(["gens v1"] + [f"gen {b} {h}" for b, h in g.pairs]) + "\n"


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(path), None, exc.strerror or str(exc)) from None
    except UnicodeDecodeError:
        raise ParseError(str(path), None, "file is not valid UTF-8") from None
