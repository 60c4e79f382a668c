from fractions import Fraction

import pytest

from dcrit.algebra import polynomial_ring
from dcrit.specfile import (
    SpecError,
    normalize_text,
    parse_polynomial,
    parse_range,
    parse_spec,
    spec_hash,
)

from conftest import BUNDLED, load, spec_text

A = polynomial_ring([("x", 1), ("y", 1)], laurent=["y"])


def poly(s):
    return parse_polynomial(s, A)


def test_literals():
    x, y = A.gen("x"), A.gen("y")
    assert poly("x^2 - 3*x*y + 1/2") == x ** 2 - 3 * x * y + A.scalar(Fraction(1, 2))
    assert poly("-(x + y)^2") == -(x + y) * (x + y)
    assert poly("y^-2*x") == x * y ** -2
    assert poly("y^(-1)") == y ** -1
    assert poly("2/4*x") == Fraction(1, 2) * x
    assert poly("0") == A.zero()


@pytest.mark.parametrize("text,col", [("x +", 4), ("x ** 2", 4), ("z", 1), ("x^y", 3), ("(x", 3),
                                      ("1/0", 3), ("x^-1", 2)])
def test_literal_errors(text, col):
    with pytest.raises(SpecError) as info:
        parse_polynomial(text, A, line=7, column=1)
    assert info.value.line == 7
    assert info.value.column == col


def test_ranges():
    assert parse_range("-3..0") == (-3, 0)
    with pytest.raises(SpecError):
        parse_range("2..1")
    with pytest.raises(SpecError):
        parse_range("a..b")


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_specs_parse(name):
    s = load(name)
    assert s.problem.hopf.validate() == []
    assert s.problem.coaction.validate() == []
    assert len(s.sha256) == 64


def test_finite_coaction_from_substitutions():
    s = load("a1_z2_quartic.spec")
    co = s.problem.coaction
    x = s.problem.ring.gen("x")
    assert str(co.apply(x)) == "x (x) e_e - x (x) e_s"
    (m,) = x.terms
    assert co.apply(x).terms == {(m, ("e",)): 1, (m, ("s",)): -1}


def test_torus_spec():
    s = load("a2_torus.spec")
    assert s.problem.hopf.coordinates == ("t",)
    assert [t.name for t in s.tasks] == ["validate", "cohomology", "cohomology", "symplectic-check"]
    assert s.tasks[1].options == {"complex": "z", "degrees": "-3..0", "weights": "0..6"}


def test_hash_ignores_line_endings_and_trailing_space():
    text = spec_text("a1_cubic.spec")
    crlf = text.replace("\n", "  \r\n")
    assert spec_hash(text) == spec_hash(crlf)
    assert normalize_text(crlf) == normalize_text(text)
    assert spec_hash(text) != spec_hash(text + "# edit\n")


BASE = "[ring]\nvariables = x:1\n[group]\nclass = trivial\n[function]\nf = x^3\n"


@pytest.mark.parametrize("text,line,fragment", [
    ("variables = x\n", 1, "outside"),
    ("[ring\n", 1, "unterminated"),
    ("[rings]\n", 1, "unknown section"),
    (BASE + "[ring]\n", 7, "duplicate section"),
    (BASE.replace("class = trivial", "class = lie"), 4, "unknown group class"),
    (BASE.replace("f = x^3", "f = x^3 + q"), 6, "unknown variable"),
    (BASE.replace("variables = x:1", "variables = x:1, x:2"), 2, "repeated"),
    (BASE + "[tasks]\nfactor\n", 8, "unknown task"),
    (BASE.replace("trivial", "multiplicative") + "[coaction]\nz = x*t\n", 8, "unknown variable"),
    (BASE + "[coaction]\nx = -x\n", 8, "g: x = polynomial"),
])
def test_spec_errors_have_locations(text, line, fragment):
    with pytest.raises(SpecError) as info:
        parse_spec(text)
    assert info.value.line == line
    assert fragment in info.value.message


def test_missing_section():
    with pytest.raises(SpecError, match="missing section"):
        parse_spec("[ring]\nvariables = x\n")


def test_finite_table_and_torus_rank():
    s = parse_spec("[ring]\nvariables = x:1\n[group]\nclass = finite\nelements = e, a\n"
                   "table = e*e=e, e*a=a, a*e=a, a*a=e\n[coaction]\na: x = -x\n[function]\nf = x^2\n")
    assert s.problem.hopf.elements == ["e", "a"]
    s = parse_spec("[ring]\nvariables = x:1, y:1\n[group]\nclass = torus\nrank = 2\n[coaction]\n"
                   "x = x*t1\ny = y*t2\n[function]\nf = 0\n[weights]\nv_x = 1\nv_y = 1\n")
    assert s.problem.hopf.coordinates == ("t1", "t2")
