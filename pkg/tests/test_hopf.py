import itertools
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcrit.hopf import (
    AdditiveHopf,
    FiniteGroupHopf,
    HopfError,
    TorusHopf,
    build_hopf,
    cyclic_group,
    lie_algebra,
    rho,
)

from conftest import problem


def s3():
    perms = list(itertools.permutations(range(3)))
    names = {p: "p" + "".join(map(str, p)) for p in perms}
    table = {(names[a], names[b]): names[tuple(a[b[i]] for i in range(3))] for a in perms for b in perms}
    els = [names[p] for p in perms]
    return FiniteGroupHopf(els, table)


@pytest.mark.parametrize("H", [cyclic_group(1), cyclic_group(2), cyclic_group(3), s3(),
                               TorusHopf(["t"]), TorusHopf(["s", "t"]), AdditiveHopf("u")])
def test_axioms_hold(H):
    assert H.validate() == []


def test_broken_table_rejected():
    table = {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "s"}
    with pytest.raises(HopfError):
        build_hopf("finite-group", elements=["e", "s"], table=table)


def test_finite_coproduct_is_dual_to_multiplication():
    H = s3()
    for g in H.elements:
        expected = {}
        for a, b in itertools.product(H.elements, repeat=2):
            if H.table[a, b] == g:
                expected[a, b] = Fraction(1)
        assert H.coproduct_key(g) == expected


def test_torus_structure():
    H = TorusHopf(["s", "t"])
    assert H.coproduct_key((2, -1)) == {((2, -1), (2, -1)): 1}
    assert H.antipode_key((2, -1)) == {(-2, 1): 1}
    assert H.counit_key((5, 3)) == 1


def test_additive_coproduct_binomial():
    H = AdditiveHopf("u")
    d = H.coproduct_key((4,))
    assert d == {((k,), (4 - k,)): comb(4, k) for k in range(5)}
    assert H.antipode_key((3,)) == {(3,): -1}


def test_lie_algebras():
    assert lie_algebra(cyclic_group(2)).dim == 0
    T = lie_algebra(TorusHopf(["s", "t"]))
    assert T.dim == 2
    assert [T.evaluate_key(a, (3, -2)) for a in range(2)] == [3, -2]
    G = lie_algebra(AdditiveHopf())
    assert G.dim == 1
    assert [G.evaluate_key(0, (n,)) for n in range(4)] == [0, 1, 0, 0]


def test_cyclic_default_names():
    assert cyclic_group(3).elements == ["e", "g1", "g2"]


def test_bundled_coactions_valid():
    for name in ["a1_z2_quartic.spec", "a2_torus.spec", "a1_gm.spec"]:
        P = problem(name)
        assert P.coaction.validate() == []
        assert P.coaction.is_invariant(P.f)[0]


def test_torus_rho():
    P = problem("a2_torus.spec")
    lie = lie_algebra(P.hopf)
    x, y = P.ring.gen("x"), P.ring.gen("y")
    assert rho(P.coaction, lie, 0, x) == x
    assert rho(P.coaction, lie, 0, y) == -y


def test_non_invariant_witness():
    P = problem("a1_z2_quartic.spec")
    ok, diff = P.coaction.is_invariant(P.ring.gen("x") ** 3)
    assert not ok
    assert "e_s" in str(diff)


keys2 = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(keys2, st.integers(-3, 3), max_size=3))
def test_torus_coassociative_on_elements(h):
    H = TorusHopf(["s", "t"])
    h = {k: Fraction(c) for k, c in h.items() if c}
    assert H.iterate(h, 2) == {(k, k, k): c for k, c in h.items()}
    # counit of the projection to H+ vanishes
    assert H.counit(H.project_plus(h)) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), st.integers(0, 5))
def test_additive_coproduct_multiplicative(a, b):
    H = AdditiveHopf()
    lhs = H.coproduct(H.mul_keys((a,), (b,)))
    rhs = {}
    for (a1, a2), c1 in H.coproduct_key((a,)).items():
        for (b1, b2), c2 in H.coproduct_key((b,)).items():
            k = ((a1[0] + b1[0],), (a2[0] + b2[0],))
            rhs[k] = rhs.get(k, 0) + c1 * c2
    assert lhs == {k: v for k, v in rhs.items() if v}
