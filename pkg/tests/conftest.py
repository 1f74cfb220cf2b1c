import sys
import random

import pytest
from hypothesis import strategies as st

from iolat import _pykernels
from iolat.fuzz import random_generators, random_lattice
from iolat.lattice import PosetDraft, diamond_lattice, gen_divisor_lattice, gen_powerset_lattice

try:
    from iolat import _kernels
except ImportError:  # extension not built
    _kernels = None

KERNELS = [pytest.param(_pykernels, id="pure")]
if _kernels is not None:
    KERNELS.append(pytest.param(_kernels, id="compiled"))

BOWTIE = PosetDraft(
    ["0", "a1", "a2", "a3", "a4", "1"],
    [("0", "a1"), ("0", "a2"), ("a1", "a3"), ("a1", "a4"), ("a2", "a3"), ("a2", "a4"),
     ("a3", "1"), ("a4", "1")],
)

TWO_CHAINS = PosetDraft(
    ["0", "a1", "a2", "a3", "a4", "1"],
    [("0", "a1"), ("0", "a2"), ("a1", "a3"), ("a2", "a4"), ("a3", "1"), ("a4", "1")],
)


@pytest.fixture(params=KERNELS)
def kernel_module(request):
    return request.param


@pytest.fixture
def diamond():
    return diamond_lattice()


@pytest.fixture
def d12():
    return gen_divisor_lattice(12)


@pytest.fixture
def pow2():
    return gen_powerset_lattice(["p1", "p2"])


@st.composite
def lattices(draw, min_size=2, max_size=8):
    size = draw(st.integers(min_size, max_size))
    density = draw(st.sampled_from([0.2, 0.4, 0.6, 0.8, 1.0]))
    seed = draw(st.integers(0, 2**32))
    return random_lattice(random.Random(seed), size, density)


@st.composite
def instances(draw, min_size=2, max_size=8, max_generators=8):
    lattice = draw(lattices(min_size, max_size))
    count = draw(st.integers(0, max_generators))
    seed = draw(st.integers(0, 2**32))
    return lattice, random_generators(random.Random(seed), lattice, count)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
