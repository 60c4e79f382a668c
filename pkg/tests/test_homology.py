from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcrit.algebra import Derivation, GradedAlgebra, Generator
from dcrit.homology import (
    Caps,
    DgaComplex,
    ExactModeError,
    PermutedComplex,
    betti,
    enumerate_basis,
    euler_characteristic,
)
from dcrit.model import build_OZ

from conftest import problem


def oz_complex(name, caps=None):
    M = build_OZ(problem(name), exact=caps is None)
    return DgaComplex("z", M.algebra, M.d, caps)


def jacobian_quotient_dims(coeffs, max_weight):
    """dim K[x]/(f') per weight, by dividing x^n by f' (coefficient lists, lowest degree first)."""
    deg = max(i for i, c in enumerate(coeffs) if c)
    lead = Fraction(coeffs[deg])
    dims = []
    for n in range(max_weight + 1):
        r = [Fraction(0)] * n + [Fraction(1)]
        while len(r) - 1 >= deg and any(r):
            top = len(r) - 1
            q = r[top] / lead
            for i, c in enumerate(coeffs):
                r[top - deg + i] -= q * c
            while r and r[-1] == 0:
                r.pop()
        dims.append(1 if any(r) else 0)
    return dims


def acyclic_sym():
    alg = GradedAlgebra([Generator("a", -1, 1, "antifield"), Generator("b", 0, 1)])
    d = Derivation(alg, {"a": alg.gen("b")}, 1)
    return DgaComplex("sym", alg, d)


def test_jacobian_oracle_itself():
    assert jacobian_quotient_dims([0, 0, 3], 4) == [1, 1, 0, 0, 0]


def test_cubic_matches_jacobian_quotient():
    rep = betti(oz_complex("a1_cubic.spec"), (-1, 0), (0, 6))
    h0 = [rep.block(0, w).betti for w in range(7)]
    assert h0 == jacobian_quotient_dims([0, 0, 3], 6)
    assert all(rep.block(-1, w).betti == 0 for w in range(7))


def test_sym_of_acyclic_is_ground_field():
    rep = betti(acyclic_sym(), (-3, 0), (0, 5))
    assert rep.totals() == {-3: 0, -2: 0, -1: 0, 0: 1}
    assert rep.block(0, 0).betti == 1


def test_torus_oz_totals():
    rep = betti(oz_complex("a2_torus.spec"), (-3, 0), (0, 6))
    assert rep.totals() == {-3: 0, -2: 1, -1: 0, 0: 1}


def test_representatives():
    rep = betti(oz_complex("a1_cubic.spec"), (0, 0), (0, 2), reps=True)
    assert rep.block(0, 0).representatives == [[["1", "1"]]]
    assert rep.block(0, 1).representatives == [[["x", "1"]]]
    assert rep.block(0, 2).representatives == []


def test_parallel_matches_serial():
    cx = oz_complex("a2_torus.spec")
    a = betti(cx, (-3, 0), (0, 6), jobs=1)
    b = betti(cx, (-3, 0), (0, 6), jobs=3)
    assert [(x.degree, x.weight, x.betti) for x in a.blocks] == \
        [(x.degree, x.weight, x.betti) for x in b.blocks]


def test_euler_characteristic():
    cx = oz_complex("a2_torus.spec")
    for w in range(7):
        chi_dim, chi_h = euler_characteristic(cx, w)
        assert chi_dim == chi_h


def test_exact_mode_refuses_laurent_and_zero_weight():
    alg = GradedAlgebra([Generator("y", 0, 1, laurent=True)])
    with pytest.raises(ExactModeError):
        enumerate_basis(alg, 0, 0)
    alg = GradedAlgebra([Generator("z", 0, 0)])
    with pytest.raises(ExactModeError):
        enumerate_basis(alg, 0, 0)


def test_truncated_mode_agrees_and_flags():
    exact = betti(oz_complex("a1_cubic.spec"), (-1, 0), (0, 3))
    wide = betti(oz_complex("a1_cubic.spec", Caps(8, 4)), (-1, 0), (0, 3))
    assert wide.mode == "truncated"
    assert [b.betti for b in wide.blocks] == [b.betti for b in exact.blocks]
    assert not any(b.flags for b in wide.blocks)
    narrow = betti(oz_complex("a1_cubic.spec", Caps(1, 1)), (-1, 0), (0, 3))
    assert any("unverified boundary" in b.flags for b in narrow.blocks)


def test_laurent_truncated():
    alg = GradedAlgebra([Generator("y", 0, 0, laurent=True), Generator("a", -1, 0, "antifield")])
    d = Derivation(alg, {"a": alg.gen("y") - alg.one()}, 1)
    rep = betti(DgaComplex("l", alg, d, Caps(3, 2)), (-1, 0), (0, 0))
    assert rep.mode == "truncated"
    assert rep.caps == Caps(3, 2)
    # K[y, 1/y]/(y - 1) = K; the edge of the window is flagged
    assert rep.block(0, 0).flags == ["unverified boundary"]


def test_block_cap_gives_omissions():
    rep = betti(oz_complex("a2_torus.spec"), (-1, 0), (0, 4), max_block=3)
    assert rep.omissions
    assert all("exceeds cap" in o["reason"] for o in rep.omissions)
    assert len(rep.blocks) + len(rep.omissions) == 2 * 5


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10_000))
def test_betti_invariant_under_basis_shuffle(seed):
    cx = oz_complex("a2_torus.spec")
    base = betti(cx, (-3, 0), (0, 5))
    shuffled = betti(PermutedComplex(cx, seed), (-3, 0), (0, 5))
    assert [b.betti for b in shuffled.blocks] == [b.betti for b in base.blocks]
