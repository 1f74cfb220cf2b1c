import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iolat.errors import LatticeMismatch, UnknownElement
from iolat.fuzz import random_generators
from iolat.lattice import PosetDraft, build_lattice, diamond_lattice
from iolat.output import GeneratorSet, cn_up, jump_image, out1

from conftest import instances
from oracles import brute_out1, divides, lattice_oracle, powerset


@pytest.fixture
def m5():
    middle = ["a", "b", "x", "y", "z"]
    return build_lattice(
        PosetDraft(["0", *middle, "1"], [("0", m) for m in middle] + [(m, "1") for m in middle])
    )


class TestGeneratorSet:
    def test_set_semantics(self, diamond):
        g = GeneratorSet(diamond, [("a", "b"), ("a", "b"), ("0", "1")])
        assert len(g) == 2
        assert g.pairs == (("0", "1"), ("a", "b"))
        assert ("a", "b") in g and ("b", "a") not in g and ("q", "a") not in g

    def test_unknown_elements_fail_at_construction(self, diamond):
        with pytest.raises(UnknownElement):
            GeneratorSet(diamond, [("a", "nope")])

    def test_bound_to_one_lattice(self, diamond):
        other = diamond_lattice()
        g = GeneratorSet(other, [("a", "b")])
        with pytest.raises(LatticeMismatch):
            out1(diamond, g, ["a"])
        with pytest.raises(LatticeMismatch):
            GeneratorSet(diamond) <= g

    def test_order_and_union(self, diamond):
        small = GeneratorSet(diamond, [("a", "b")])
        big = small.union(GeneratorSet(diamond, [("b", "a")]))
        assert small <= big and not big <= small


class TestJumpImage:
    def test_example_pair(self, pow2):
        g = GeneratorSet(pow2, [("{p1}", "{p2}")])
        assert jump_image(g, ["{p1}"]) == {"{p2}"}

    def test_no_pairs(self, diamond):
        assert jump_image(GeneratorSet(diamond), diamond.elements) == set()

    def test_filters_by_body(self, m5):
        g = GeneratorSet(m5, [("a", "x"), ("a", "y"), ("b", "z")])
        assert jump_image(g, ["a"]) == {"x", "y"}

    def test_foreign_output_set(self, diamond):
        g = GeneratorSet(diamond)
        with pytest.raises(LatticeMismatch):
            jump_image(g, diamond_lattice().upset("a"))


class TestCnUp:
    def test_empty_input(self, diamond):
        assert cn_up(diamond, []) == {"1"}

    def test_singleton(self, diamond):
        assert cn_up(diamond, ["a"]) == diamond.upset("a")

    def test_pair(self, diamond):
        assert cn_up(diamond, ["a", "b"]) == {"0", "a", "b", "1"}


class TestOut1:
    def test_example_one(self, pow2):
        g = GeneratorSet(pow2, [("{p1}", "{p2}")])
        result = out1(pow2, g, ["{p1}"])
        assert result == pow2.upset("{p2}") == {"{p2}", "{}"}

    def test_no_generators(self, d12):
        for A in powerset(d12.elements):
            assert out1(d12, GeneratorSet(d12), A) == {"12"}

    def test_divisors_of_12(self, d12):
        g = GeneratorSet(d12, [("2", "3")])
        expected = brute_out1([str(d) for d in (1, 2, 3, 4, 6, 12)], divides, [("2", "3")], ["2"])
        assert expected == {"3", "6", "12"}
        assert out1(d12, g, ["2"]) == expected
        assert str(out1(d12, g, ["2"])) == "3 6 12"

    def test_singleton_shortcut(self, d12):
        g = GeneratorSet(d12, [("2", "3"), ("4", "6"), ("1", "4")])
        for a in d12.elements:
            direct = cn_up(d12, jump_image(g, d12.upset(a)))
            assert out1(d12, g, [a]) == direct


@settings(max_examples=80, deadline=None)
@given(instances(max_size=8), st.integers(0, 2**16))
def test_out1_matches_brute_force(inst, seed):
    lat, g = inst
    names, leq = lattice_oracle(lat)
    rng = random.Random(seed)
    for _ in range(12):
        A = [x for x in names if rng.random() < 0.4]
        assert out1(lat, g, A) == brute_out1(names, leq, g.pairs, A)


@settings(max_examples=60, deadline=None)
@given(instances(max_size=8))
def test_tarskian_properties(inst):
    lat, _ = inst
    subsets = [lat.subset(s) for s in powerset(lat.elements)]
    for A in subsets:
        closed = cn_up(lat, A)
        assert A <= closed
        assert cn_up(lat, closed) == closed
    for A in subsets[:: max(1, len(subsets) // 12)]:
        for B in subsets:
            if A <= B:
                assert cn_up(lat, A) <= cn_up(lat, B)


@settings(max_examples=60, deadline=None)
@given(instances(max_size=9), st.integers(0, 2**16))
def test_out1_rule_properties(inst, seed):
    lat, g = inst
    names = lat.elements
    outs = {a: out1(lat, g, [a]) for a in names}
    for a in names:
        for b in names:
            if lat.leq(b, a):
                assert outs[a] <= outs[b]  # SI
        for x in outs[a]:
            assert lat.upset(x) <= outs[a]  # WO
            for y in outs[a]:
                assert lat.meet(x, y) in outs[a]  # AND
    for a, x in g.pairs:
        for a2, y in g.pairs:
            if a == a2:
                assert {x, y, lat.meet(x, y)} <= set(outs[a])
    bigger = g.union(random_generators(random.Random(seed), lat, 3))
    for A in powerset(names[:5]):
        assert out1(lat, g, A) <= out1(lat, bigger, A)
