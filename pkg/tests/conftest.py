import itertools
import random
from fractions import Fraction
from importlib import resources

import pytest

from dcrit.algebra import Element
from dcrit.hopf import HTensor
from dcrit.model import build_O_mu0, build_OZ
from dcrit.specfile import parse_spec
from dcrit.stacky import BVAlgebra, CECochain

BUNDLED = ["pt_z2.spec", "a1_cubic.spec", "a1_z2_quartic.spec", "a2_torus.spec", "a1_gm.spec"]


def spec_text(name):
    return (resources.files("dcrit") / "specs" / name).read_text(encoding="utf-8")


def load(name):
    return parse_spec(spec_text(name), name)


def problem(name):
    return load(name).problem


def models(name):
    P = problem(name)
    OZ = build_OZ(P)
    return OZ, build_O_mu0(P), BVAlgebra(OZ)


def random_monomial(alg, rng, max_exp=2):
    m = []
    for g in alg.generators:
        if g.odd:
            m.append(rng.randint(0, 1))
        elif g.laurent:
            m.append(rng.randint(-max_exp, max_exp))
        else:
            m.append(rng.randint(0, max_exp))
    return tuple(m)


def random_coeff(rng):
    return Fraction(rng.randint(-3, 3), rng.randint(1, 2))


def random_element(alg, rng, terms=3, max_exp=2):
    out = {}
    for _ in range(terms):
        m = random_monomial(alg, rng, max_exp)
        out[m] = out.get(m, 0) + random_coeff(rng)
    return Element(alg, out)


def random_group_cochain(model, rng, m, terms=2, max_exp=1):
    """Random normalized cochain with m tensor factors."""
    H = model.coaction.hopf
    keys = H.sample_keys()
    out = {}
    for _ in range(terms):
        z = random_monomial(model.algebra, rng, max_exp)
        h = tuple(rng.choice(keys) for _ in range(m))
        out[(z, h)] = out.get((z, h), 0) + random_coeff(rng)
    return HTensor(model.algebra, H, out).project_plus()


def random_ce(model, rng, m, terms=2, max_exp=1):
    dim = model.lie.dim
    if m > dim:
        return CECochain(model, {})
    vals = {}
    for I in itertools.combinations(range(dim), m):
        vals[I] = random_element(model.algebra, rng, terms, max_exp)
    return CECochain(model, vals)


@pytest.fixture
def rng():
    return random.Random(20261014)


# acceptance criterion -> (passed, note); printed at the end of the run
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {note}")
