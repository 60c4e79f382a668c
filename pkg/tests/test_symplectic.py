import itertools

import pytest

from dcrit.model import build_OZ
from dcrit.stacky import BVAlgebra
from dcrit.symplectic import (
    FormContext,
    antibracket,
    canonical_pairs,
    check_closed,
    check_master,
    check_nondegenerate,
    lambda_BG,
    master_action,
    omega,
    pairing_matrix,
    verify_three_conditions,
)

from conftest import BUNDLED, problem, random_element


def ctx(name, model=None):
    return FormContext(model or build_OZ(problem(name)))


@pytest.mark.parametrize("name", BUNDLED)
def test_three_conditions_closed_nondegenerate(name):
    c = ctx(name)
    assert all(r.ok for r in verify_three_conditions(c))
    w = omega(c)
    assert check_closed(c, w)
    assert check_nondegenerate(c, w)


def test_cubic_pairing():
    c = ctx("a1_cubic.spec")
    dirs, M = pairing_matrix(c, omega(c))
    assert dirs == ["d(x)", "d(v_x)"]
    # omega = d(v) d(x) = -d(x) d(v)
    assert M == [[0, -1], [1, 0]]


def test_point_pairing_is_empty():
    c = ctx("pt_z2.spec")
    assert pairing_matrix(c, omega(c)) == ([], [])
    assert check_nondegenerate(c, omega(c))


def test_torus_pairing_block_antidiagonal():
    c = ctx("a2_torus.spec")
    dirs, M = pairing_matrix(c, omega(c))
    assert dirs == ["d(x)", "d(y)", "d(v_x)", "d(v_y)", "d(xi)", "dt0_t"]
    nonzero = {(i, j) for i, j in itertools.product(range(6), repeat=2) if M[i][j]}
    assert nonzero == {(0, 2), (2, 0), (1, 3), (3, 1), (4, 5), (5, 4)}


def test_finite_group_has_no_bg_form():
    c = ctx("a1_z2_quartic.spec")
    assert lambda_BG(c).is_zero()


def test_flipped_bg_form_fails_condition_two():
    c = ctx("a2_torus.spec")
    res = verify_three_conditions(c, -lambda_BG(c))
    assert [r.ok for r in res] == [True, False, True]
    assert res[1].residue


@pytest.mark.parametrize("name", ["a2_torus.spec", "a1_gm.spec"])
def test_flipped_moment_map_detected(name):
    M = build_OZ(problem(name))
    bad = M.replace_differential({n: -M.d.value(n) for n in M.algebra.index
                                  if M.algebra.generators[M.algebra.index[n]].kind == "ghost-antifield"})
    res = verify_three_conditions(FormContext(bad))
    assert not res[1].ok
    assert res[1].residue


def test_degenerate_pairing_reports_kernel():
    c = ctx("a2_torus.spec")
    w = omega(c) - omega(c)
    v = check_nondegenerate(c, w)
    assert not v
    assert len(v.witness["kernel"]) == 6


def bv(name):
    return BVAlgebra(build_OZ(problem(name)))


def test_canonical_pairs():
    b = bv("a2_torus.spec")
    A = b.algebra
    assert canonical_pairs(b) == [("x", "v_x"), ("y", "v_y"), ("xi", "theta")]
    assert antibracket(b, A.gen("x"), A.gen("v_x")) == A.one()
    assert antibracket(b, A.gen("v_x"), A.gen("x")) == -A.one()
    assert antibracket(b, A.gen("xi"), A.gen("theta")) == A.one()
    assert antibracket(b, A.gen("theta"), A.gen("xi")) == -A.one()
    assert antibracket(b, A.gen("x"), A.gen("v_y")).is_zero()


def test_cubic_master_action():
    b = bv("a1_cubic.spec")
    A = b.algebra
    S = master_action(b)
    assert S == A.gen("x") ** 3
    assert antibracket(b, S, A.gen("v_x")) == 3 * A.gen("x") ** 2


@pytest.mark.parametrize("name", BUNDLED)
def test_master_equation(name):
    assert all(check_master(bv(name)))


def test_wrong_action_detected():
    b = bv("a2_torus.spec")
    S = master_action(b) + b.algebra.gen("x") * b.algebra.gen("x")
    res = check_master(b, S)
    assert not all(res)


def _deg(x):
    (d,) = x.degrees()
    return d


def _random_homogeneous(b, rng):
    while True:
        x = random_element(b.algebra, rng, terms=1, max_exp=1)
        if x:
            return x


@pytest.mark.parametrize("name", ["a2_torus.spec", "a1_gm.spec", "a1_cubic.spec"])
def test_antibracket_antisymmetry_and_jacobi(name, rng):
    b = bv(name)
    gens = [b.algebra.gen(g.name) for g in b.algebra.generators]
    samples = gens + [_random_homogeneous(b, rng) for _ in range(6)]
    for p, q in itertools.product(samples, repeat=2):
        s = (_deg(p) + 1) * (_deg(q) + 1)
        assert antibracket(b, p, q) == -((-1) ** s) * antibracket(b, q, p)
    for p, q, r in itertools.product(samples[:8], repeat=3):
        s = (_deg(p) + 1) * (_deg(q) + 1)
        lhs = antibracket(b, p, antibracket(b, q, r))
        rhs = antibracket(b, antibracket(b, p, q), r) + (-1) ** s * antibracket(b, q, antibracket(b, p, r))
        assert lhs == rhs
