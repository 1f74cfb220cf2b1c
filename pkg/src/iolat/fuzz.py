"""Seeded random lattices and generator sets.

A draw fixes a random linear order on the interior elements, relates each
forward pair with probability ``edge_density``, adds bottom and top, and
keeps the result only if every pair has a meet (rejection sampling).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from .errors import NoMeet, OutOfRange, RetryExhausted
from .lattice import Lattice, PosetDraft, build_lattice
from .output import GeneratorSet

MAX_RETRIES = 10_000


@dataclass(frozen=True)
class RandomInstanceSpec:
    element_count: int
    edge_density: float = 0.5
    generator_count: int = 3
    seed: int = 0

    def __post_init__(self):
        if not 2 <= self.element_count <= 12:
            raise OutOfRange(f"element_count must be in [2, 12], got {self.element_count}")
        if not 0.0 <= self.edge_density <= 1.0:
            raise OutOfRange(f"edge_density must be in [0, 1], got {self.edge_density}")
        if not 0 <= self.generator_count <= 8:
            raise OutOfRange(f"generator_count must be in [0, 8], got {self.generator_count}")
        if not -(2**63) <= self.seed < 2**64:
            raise OutOfRange("seed must fit in 64 bits")


def random_lattice(rng: random.Random, element_count: int, edge_density: float,
                   max_retries: int = MAX_RETRIES) -> Lattice:
    interior = [f"a{i}" for i in range(1, element_count - 1)]
    names = ["0", *interior, "1"]
    for _ in range(max_retries):
        order = interior[:]
        rng.shuffle(order)
        edges = [("0", "1")]
        edges += [("0", x) for x in interior] + [(x, "1") for x in interior]
        for i, lo in enumerate(order):
            for hi in order[i + 1:]:
                if rng.random() < edge_density:
                    edges.append((lo, hi))
        try:
            full = build_lattice(PosetDraft(names, edges))
        except NoMeet:
            continue
        # re-express through Hasse edges so files written from it are minimal
        return build_lattice(full.to_draft())
    raise RetryExhausted(
        f"no meet-complete draw after {max_retries} tries "
        f"(element_count={element_count}, edge_density={edge_density})"
    )


def random_generators(rng: random.Random, lattice: Lattice, count: int) -> GeneratorSet:
    n = lattice.size
    names = lattice.elements
    picks = rng.sample(range(n * n), min(count, n * n))
    return GeneratorSet(lattice, [(names[k // n], names[k % n]) for k in picks])


def fuzz(spec: RandomInstanceSpec, max_retries: int = MAX_RETRIES) -> Iterator[tuple[Lattice, GeneratorSet]]:
    """Endless deterministic stream of instances drawn according to ``spec``."""
    rng = random.Random(spec.seed)
    while True:
        lattice = random_lattice(rng, spec.element_count, spec.edge_density, max_retries)
        yield lattice, random_generators(rng, lattice, spec.generator_count)


def instance_specs(seed: int, count: int, sizes=(2, 10), max_generators: int = 8,
                   densities=(0.2, 0.8)) -> list[RandomInstanceSpec]:
    """``count`` specs with sizes, densities and generator counts drawn from ``seed``."""
    rng = random.Random(seed)
    specs = []
    for _ in range(count):
        specs.append(
            RandomInstanceSpec(
                element_count=rng.randint(*sizes),
                edge_density=round(rng.uniform(*densities), 4),
                generator_count=rng.randint(0, max_generators),
                seed=rng.getrandbits(63),
            )
        )
    return specs


def fuzz_suite(seed: int, count: int, **kwargs) -> Iterator[tuple[RandomInstanceSpec, Lattice, GeneratorSet]]:
    """First instance of each spec from :func:`instance_specs`."""
    for spec in instance_specs(seed, count, **kwargs):
        lattice, gens = next(fuzz(spec))
        yield spec, lattice, gens
