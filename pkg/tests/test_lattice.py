import math
from itertools import combinations

import pytest
from hypothesis import given, settings

from iolat.errors import (
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
from iolat.lattice import (
    MAX_ELEMENTS,
    PosetDraft,
    build_lattice,
    chain_lattice,
    diamond_lattice,
    gen_divisor_lattice,
    gen_powerset_lattice,
)

from conftest import TWO_CHAINS, BOWTIE, lattices
from oracles import brute_inf, divides, lattice_oracle, powerset


class TestBuild:
    def test_diamond(self, diamond):
        assert diamond.bottom == "0" and diamond.top == "1"
        assert diamond.meet("a", "b") == "0"
        assert len(diamond) == 4

    def test_bowtie_has_no_meet(self):
        with pytest.raises(NoMeet) as info:
            build_lattice(BOWTIE)
        assert (info.value.a, info.value.b) == ("a3", "a4")

    def test_two_disjoint_chains_form_a_lattice(self):
        lat = build_lattice(TWO_CHAINS)
        assert lat.meet("a3", "a4") == "0"

    def test_single_point(self):
        lat = build_lattice(PosetDraft(["e"]))
        assert lat.bottom == lat.top == "e"
        assert lat.meet("e", "e") == "e"

    def test_cycle(self):
        with pytest.raises(CycleDetected):
            build_lattice(PosetDraft(["0", "a", "b", "1"],
                                     [("0", "a"), ("a", "b"), ("b", "a"), ("b", "1")]))

    def test_two_minimal_elements(self):
        with pytest.raises(NoBottom) as info:
            build_lattice(PosetDraft(["a", "b", "1"], [("a", "1"), ("b", "1")]))
        assert set(info.value.candidates) == {"a", "b"}

    def test_two_maximal_elements(self):
        with pytest.raises(NoTop):
            build_lattice(PosetDraft(["0", "a", "b"], [("0", "a"), ("0", "b")]))

    def test_declared_bounds_are_checked(self):
        draft = PosetDraft(["0", "1"], [("0", "1")], bottom="1")
        with pytest.raises(NoBottom):
            build_lattice(draft)
        draft = PosetDraft(["0", "1"], [("0", "1")], top="0")
        with pytest.raises(NoTop):
            build_lattice(draft)
        assert build_lattice(PosetDraft(["0", "1"], [("0", "1")], "0", "1")).top == "1"

    @pytest.mark.parametrize("names,covers", [
        (["a", "a"], []),
        (["a b"], []),
        (["a,b"], []),
        ([""], []),
        (["a"], [("a", "z")]),
        ([], []),
    ])
    def test_malformed(self, names, covers):
        with pytest.raises(MalformedDraft):
            build_lattice(PosetDraft(names, covers))

    def test_size_cap(self):
        names = [f"e{i}" for i in range(MAX_ELEMENTS + 1)]
        with pytest.raises(TooLarge):
            build_lattice(PosetDraft(names))

    def test_non_cover_edges_are_closed(self):
        lat = build_lattice(PosetDraft(["0", "m", "1"], [("0", "m"), ("m", "1"), ("0", "1")]))
        assert lat.covers() == [("0", "m"), ("m", "1")]


class TestQueries:
    def test_leq(self, diamond, d12):
        assert diamond.leq("0", "a")
        assert not diamond.leq("a", "b")
        assert d12.leq("2", "6") is divides(2, 6)

    def test_unknown_element(self, diamond):
        with pytest.raises(UnknownElement):
            diamond.leq("0", "z")
        with pytest.raises(UnknownElement):
            diamond.upset("z")
        with pytest.raises(UnknownElement):
            diamond.inf_set(["a", "z"])

    def test_upset(self, diamond):
        assert diamond.upset("1") == {"1"}
        assert diamond.upset("0") == set(diamond.elements)
        assert diamond.upset("a") == {"a", "1"}
        assert list(diamond.upset("a")) == ["a", "1"]

    def test_inf_set(self, diamond):
        assert diamond.inf_set([]) == "1"
        assert diamond.inf_set(["a"]) == "a"
        assert diamond.inf_set(["a", "b"]) == "0"
        assert diamond.inf_set({"a", "1"}) == "a"

    def test_output_sets_from_different_lattices(self, diamond):
        other = diamond_lattice()
        with pytest.raises(LatticeMismatch):
            diamond.upset("a") <= other.upset("a")
        with pytest.raises(LatticeMismatch):
            other.subset(diamond.upset("a"))

    def test_canonical_order_is_rank_then_insertion(self, d12):
        assert list(d12.subset(["12", "3", "6", "1", "4", "2"])) == ["1", "2", "3", "4", "6", "12"]
        assert d12.rank == [0, 1, 1, 2, 2, 3]
        assert str(d12.upset("2")) == "2 4 6 12"


class TestConstructors:
    def test_powerset_two_atoms(self, pow2):
        assert len(pow2) == 4
        assert pow2.meet("{p1}", "{p2}") == "{p1+p2}"
        assert pow2.bottom == "{p1+p2}" and pow2.top == "{}"
        assert pow2.upset("{p1+p2}") == set(pow2.elements)

    def test_powerset_one_atom_is_a_chain(self):
        lat = gen_powerset_lattice(["p"])
        assert lat.elements == ("{p}", "{}")
        assert lat.leq("{p}", "{}")

    @pytest.mark.parametrize("k", range(1, 7))
    def test_powerset_meet_is_union(self, k):
        atoms = [f"q{i}" for i in range(k)]
        lat = gen_powerset_lattice(atoms)
        assert len(lat) == 2 ** k
        subsets = [frozenset(s) for s in powerset(atoms)]
        name = {s: "{" + "+".join(a for a in atoms if a in s) + "}" for s in subsets}
        for s, t in combinations(subsets[: min(len(subsets), 20)], 2):
            assert lat.meet(name[s], name[t]) == name[s | t]
            assert lat.leq(name[s], name[t]) == (s >= t)

    @pytest.mark.parametrize("atoms", [[], [f"p{i}" for i in range(7)]])
    def test_powerset_atom_guard(self, atoms):
        with pytest.raises(TooManyAtoms):
            gen_powerset_lattice(atoms)

    def test_powerset_rejects_bad_atoms(self):
        with pytest.raises(MalformedDraft):
            gen_powerset_lattice(["p", "p"])
        with pytest.raises(MalformedDraft):
            gen_powerset_lattice(["p+q"])

    def test_divisors_of_12(self, d12):
        assert d12.elements == ("1", "2", "3", "4", "6", "12")
        assert d12.meet("4", "6") == str(math.gcd(4, 6))
        assert d12.upset("2") == {str(m) for m in range(1, 13) if 12 % m == 0 and m % 2 == 0}

    @pytest.mark.parametrize("n", [2, 6, 12, 30, 36, 60, 97, 360, 1001])
    def test_divisor_lattice_agrees_with_arithmetic(self, n):
        lat = gen_divisor_lattice(n)
        divs = [d for d in range(1, n + 1) if n % d == 0]
        assert sorted(map(int, lat.elements)) == divs
        assert lat.bottom == "1" and lat.top == str(n)
        for a in divs:
            for b in divs:
                assert lat.leq(str(a), str(b)) == divides(a, b)
                assert lat.meet(str(a), str(b)) == str(math.gcd(a, b))

    def test_prime_gives_two_chain(self):
        lat = gen_divisor_lattice(97)
        assert lat.elements == ("1", "97")

    @pytest.mark.parametrize("n", [1, 0, -4, 10**6 + 1, 2.5])
    def test_divisor_range(self, n):
        with pytest.raises(OutOfRange):
            gen_divisor_lattice(n)

    def test_divisor_upper_bound(self):
        assert len(gen_divisor_lattice(720720)) == 240

    def test_chain(self):
        lat = chain_lattice(5)
        assert lat.meet("c1", "c3") == "c1"
        assert lat.rank == [0, 1, 2, 3, 4]


@settings(max_examples=60, deadline=None)
@given(lattices(max_size=10))
def test_order_axioms(lat):
    names, leq = lattice_oracle(lat)
    for x in names:
        assert leq(x, x)
        assert leq(lat.bottom, x) and leq(x, lat.top)
        for y in names:
            if leq(x, y) and leq(y, x):
                assert x == y
            for z in names:
                if leq(x, y) and leq(y, z):
                    assert leq(x, z)


@settings(max_examples=60, deadline=None)
@given(lattices(max_size=10))
def test_meet_is_greatest_lower_bound(lat):
    names, leq = lattice_oracle(lat)
    for a in names:
        assert lat.meet(a, a) == a
        for b in names:
            m = lat.meet(a, b)
            assert m == lat.meet(b, a) == brute_inf(names, leq, [a, b])
            for c in names:
                assert lat.meet(lat.meet(a, b), c) == lat.meet(a, lat.meet(b, c))


@settings(max_examples=40, deadline=None)
@given(lattices(max_size=8))
def test_infimum_lemmas(lat):
    names, leq = lattice_oracle(lat)
    subsets = [list(s) for s in powerset(names)]
    for A in subsets:
        inf_a = lat.inf_set(A)
        assert inf_a == brute_inf(names, leq, A)
        for x in names:
            if all(leq(x, a) for a in A):
                assert leq(x, inf_a)
    for B in subsets[:: max(1, len(subsets) // 16)]:
        for A in powerset(B):
            assert leq(lat.inf_set(B), lat.inf_set(A))
    for x in names:
        assert lat.inf_set(lat.upset(x)) == x
