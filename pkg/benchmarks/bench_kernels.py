"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs on the same inputs under both backends; outputs are
checked for equality before timings are reported.
"""
import argparse
import random
import sys
import timeit

import numpy as np

from iolat import _pykernels
from iolat.fuzz import random_generators, random_lattice
from iolat.lattice import gen_divisor_lattice, gen_powerset_lattice

try:
    from iolat import _kernels
except ImportError:
    _kernels = None


def cases():
    rng = random.Random(7)
    yield "powerset-5", gen_powerset_lattice([f"p{i}" for i in range(5)]), 12
    yield "powerset-6", gen_powerset_lattice([f"p{i}" for i in range(6)]), 16
    yield "divisor-720", gen_divisor_lattice(720), 16
    yield "divisor-5040", gen_divisor_lattice(5040), 24
    yield "random-12", random_lattice(rng, 12, 0.5), 8


def inputs(lattice, gen_count):
    n = lattice.size
    lower, upper = [], []
    for lo, hi in lattice.covers():
        lower.append(lattice.index(lo))
        upper.append(lattice.index(hi))
    g = random_generators(random.Random(n), lattice, gen_count)
    body = np.array([b for b, _ in g.index_pairs], dtype=np.int64)
    head = np.array([h for _, h in g.index_pairs], dtype=np.int64)
    return (
        ("transitive_closure", (n, np.array(lower, dtype=np.int64), np.array(upper, dtype=np.int64))),
        ("meet_table", (lattice.leq_matrix,)),
        ("derivation_fixpoint", (lattice.leq_matrix, lattice.meet_table, body, head,
                                 lattice.index(lattice.top))),
    )


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def best(fn, args, repeat):
    timer = timeit.Timer(lambda: fn(*args))
    loops, _ = timer.autorange()
    return min(timer.repeat(repeat, loops)) / loops


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled kernels are not built; only the fallback is available", file=sys.stderr)
        return 1
    print(f"{'case':<14}{'|L|':>5}  {'kernel':<20}{'pure ms':>10}{'compiled ms':>13}{'speedup':>9}")
    for name, lattice, gen_count in cases():
        for kernel, kargs in inputs(lattice, gen_count):
            pure_fn, fast_fn = getattr(_pykernels, kernel), getattr(_kernels, kernel)
            if not same(pure_fn(*kargs), fast_fn(*kargs)):
                print(f"{name}: {kernel} backends disagree", file=sys.stderr)
                return 1
            pure = best(pure_fn, kargs, args.repeat)
            fast = best(fast_fn, kargs, args.repeat)
            print(f"{name:<14}{lattice.size:>5}  {kernel:<20}{pure * 1e3:>10.3f}"
                  f"{fast * 1e3:>13.3f}{pure / fast:>8.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
