import pytest

from dcrit.model import (
    ValidationError,
    build_O_mu0,
    build_OZ,
    check_equivariance,
    check_moment_map_condition,
    check_rho_morphism,
    verify_d_squared,
    weight_homogeneous,
)
from dcrit.specfile import parse_spec

from conftest import BUNDLED, problem


def table(model):
    return {r["name"]: (r["degree"], r["weight"], r["d"]) for r in model.generator_table()}


def test_torus_oz_generators():
    t = table(build_OZ(problem("a2_torus.spec")))
    assert t == {
        "x": (0, 1, "0"),
        "y": (0, 1, "0"),
        "v_x": (-1, 1, "y"),
        "v_y": (-1, 1, "x"),
        "xi": (-2, 2, "y*v_y - x*v_x"),
    }


def test_cubic_oz_generators():
    t = table(build_OZ(problem("a1_cubic.spec")))
    assert t == {"x": (0, 1, "0"), "v_x": (-1, 2, "3*x^2")}


def test_gm_moment_map_and_supplied_weight():
    t = table(build_OZ(problem("a1_gm.spec")))
    assert t["v_x"] == (-1, 1, "0")
    assert t["xi"] == (-2, 2, "-x*v_x")


def test_mu0_grading():
    t = table(build_O_mu0(problem("a2_torus.spec")))
    assert t["v_x"][:2] == (0, 1)
    assert t["xi"][:2] == (-1, 2)
    assert t["xi"][2] == "y*v_y - x*v_x"


@pytest.mark.parametrize("name", BUNDLED)
def test_models_are_dg_and_equivariant(name):
    P = problem(name)
    for M in (build_OZ(P), build_O_mu0(P)):
        assert verify_d_squared(M)
        assert check_equivariance(M)
        assert weight_homogeneous(M)


@pytest.mark.parametrize("name", BUNDLED)
def test_moment_map_condition_and_rho(name):
    P = problem(name)
    assert all(check_moment_map_condition(P))
    assert check_rho_morphism(P)


def _spec(body):
    return parse_spec(body).problem


def test_inhomogeneous_f_needs_weights():
    P = _spec("[ring]\nvariables = x:1\n[group]\nclass = trivial\n[function]\nf = x^3 + x^2\n")
    with pytest.raises(ValidationError, match="weight"):
        build_OZ(P)


def test_zero_function_needs_weights():
    P = _spec("[ring]\nvariables = x:1\n[group]\nclass = multiplicative\n[coaction]\nx = x*t\n"
              "[function]\nf = 0\n")
    with pytest.raises(ValidationError, match="supply a weight"):
        build_OZ(P)


def test_non_invariant_rejected():
    P = _spec("[ring]\nvariables = x:1\n[group]\nclass = cyclic\norder = 2\n[coaction]\n"
              "g1: x = -x\n[function]\nf = x^3\n")
    with pytest.raises(ValidationError) as info:
        build_OZ(P)
    assert "e_g1" in str(info.value.witness)


def test_non_affine_coaction_rejected():
    P = _spec("[ring]\nvariables = x:2, y:1\n[group]\nclass = additive\n[coaction]\n"
              "x = x + y^2*t\n[function]\nf = y^3\n")
    assert P.coaction.validate() == []
    with pytest.raises(ValidationError, match="affine"):
        build_OZ(P)


def test_zero_weight_rejected_in_exact_mode():
    P = _spec("[ring]\nvariables = x:1\n[group]\nclass = multiplicative\n[coaction]\nx = x*t\n"
              "[function]\nf = 0\n[weights]\nv_x = 0\n")
    with pytest.raises(ValidationError, match="positive"):
        build_OZ(P)
    assert build_OZ(P, exact=False).algebra.n == 3
