"""Task orchestration: each task turns a parsed problem into a JSON-ready section."""

from __future__ import annotations

from fractions import Fraction

from .homology import Caps, DgaComplex, betti
from .hopf import FiniteGroupHopf
from .model import (
    ValidationError,
    Verdict,
    build_O_mu0,
    build_OZ,
    check_equivariance,
    check_invariance,
    check_moment_map_condition,
    check_rho_morphism,
    verify_d_squared,
)
from .specfile import SpecError, parse_range
from .stacky import BVAlgebra, GroupComplex, compare_cohomology, comparison_totals
from .symplectic import (
    FormContext,
    check_closed,
    check_master,
    check_nondegenerate,
    omega,
    pairing_matrix,
    verify_three_conditions,
)

COMPLEXES = ("z", "dcrit", "bv", "mu0")


class TaskError(ValueError):
    pass


def frac(c) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return frac(obj)
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    return str(obj)


def verdict_dict(name: str, v: Verdict) -> dict:
    return {"check": name, "ok": bool(v.ok), "detail": v.detail, "witness": jsonable(v.witness)}


# -- validation cascade ------------------------------------------------------------

def validation_steps(problem, exact: bool = True) -> list[dict]:
    """Hopf axioms, coaction axioms, invariance, weights; stops at the first failure."""
    steps = []
    errors = problem.hopf.validate()
    steps.append(verdict_dict("hopf-axioms", Verdict(not errors, "; ".join(errors) or "ok")))
    if errors:
        return steps
    errors = problem.coaction.validate()
    steps.append(verdict_dict("coaction-axioms", Verdict(not errors, "; ".join(errors) or "ok")))
    if errors:
        return steps
    v = check_invariance(problem)
    steps.append(verdict_dict("invariance", v))
    if not v:
        return steps
    try:
        build_OZ(problem, exact)
        steps.append(verdict_dict("weights", Verdict(True, "weight homogeneous")))
    except ValidationError as exc:
        steps.append(verdict_dict("weights", Verdict(False, str(exc), exc.witness)))
    return steps


def require_valid(problem, exact: bool = True) -> list[dict]:
    steps = validation_steps(problem, exact)
    bad = [s for s in steps if not s["ok"]]
    if bad:
        raise ValidationError(f"{bad[0]['check']}: {bad[0]['detail']}", witness=bad[0]["witness"])
    return steps


def task_validate(problem, options: dict) -> dict:
    steps = validation_steps(problem)
    if all(s["ok"] for s in steps):
        for v in check_moment_map_condition(problem):
            steps.append(verdict_dict("moment-map", v))
        steps.append(verdict_dict("rho-morphism", check_rho_morphism(problem)))
        OZ = build_OZ(problem)
        for label, M in (("mu0", build_O_mu0(problem)), ("z", OZ), ("bv", BVAlgebra(OZ).dg_model())):
            steps.append(verdict_dict(f"d-squared-{label}", verify_d_squared(M)))
        steps.append(verdict_dict("equivariance-z", check_equivariance(OZ)))
    return {"ok": all(s["ok"] for s in steps), "checks": steps}


# -- build -------------------------------------------------------------------------------

def task_build(problem, options: dict) -> dict:
    require_valid(problem)
    OZ = build_OZ(problem)
    bv = BVAlgebra(OZ).dg_model()
    models = {}
    for label, M in (("mu0", build_O_mu0(problem)), ("z", OZ), ("bv", bv)):
        models[label] = {"name": M.name, "generators": jsonable(M.generator_table())}
    lie = OZ.lie
    return {
        "group": problem.hopf.kind,
        "lie_dimension": lie.dim,
        "lie_basis": [problem.hopf.element_str(b) for b in lie.basis],
        "function": str(problem.f),
        "models": models,
    }


# -- cohomology ---------------------------------------------------------------------------

def caps_from(options: dict) -> Caps | None:
    p, w = options.get("cap_poly"), options.get("cap_word")
    if p is None and w is None:
        return None
    p = int(p if p is not None else w)
    w = int(w if w is not None else p)
    if p < 0 or w < 0:
        raise TaskError("caps must be non-negative")
    return Caps(p, w)


def make_complex(problem, name: str, caps: Caps | None):
    exact = caps is None
    if name not in COMPLEXES:
        raise TaskError(f"unknown complex {name!r}; expected one of {', '.join(COMPLEXES)}")
    if name == "mu0":
        M = build_O_mu0(problem, exact)
        return DgaComplex("mu0", M.algebra, M.d, caps)
    OZ = build_OZ(problem, exact)
    if name == "z":
        return DgaComplex("z", OZ.algebra, OZ.d, caps)
    if name == "bv":
        bv = BVAlgebra(OZ)
        return DgaComplex("bv", bv.algebra, bv.d, caps)
    if not isinstance(problem.hopf, FiniteGroupHopf):
        raise TaskError("the dcrit complex is only fully computable for finite groups")
    return GroupComplex(OZ, caps)


def betti_dict(rep) -> dict:
    blocks = []
    for b in rep.blocks:
        d = {"degree": b.degree, "weight": b.weight, "dim": b.dim, "rank_in": b.rank_in,
             "rank_out": b.rank_out, "betti": b.betti, "flags": list(b.flags)}
        if b.representatives is not None:
            d["representatives"] = jsonable(b.representatives)
        blocks.append(d)
    return {
        "complex": rep.complex,
        "mode": rep.mode,
        "degrees": list(rep.degrees),
        "weights": list(rep.weights),
        "caps": None if rep.caps is None else {"poly": rep.caps.poly, "word": rep.caps.word},
        "totals": {str(k): v for k, v in sorted(rep.totals().items())},
        "blocks": blocks,
        "omissions": jsonable(rep.omissions),
    }


def _range(options, key, default):
    v = options.get(key, default)
    return parse_range(v) if isinstance(v, str) else tuple(v)


def task_cohomology(problem, options: dict) -> dict:
    caps = caps_from(options)
    require_valid(problem, caps is None)
    cx = make_complex(problem, options.get("complex", "z"), caps)
    degrees = _range(options, "degrees", "-2..0")
    weights = _range(options, "weights", "0..4")
    reps = str(options.get("reps", "false")).lower() in ("1", "true", "yes")
    rep = betti(cx, degrees, weights, reps=reps, jobs=options.get("jobs"))
    return betti_dict(rep)


# -- van Est comparison -------------------------------------------------------------------

def task_vanest_compare(problem, options: dict) -> dict:
    require_valid(problem)
    if not isinstance(problem.hopf, FiniteGroupHopf):
        raise TaskError("the comparison needs a finite group")
    degrees = _range(options, "degrees", "-1..1")
    weights = _range(options, "weights", "0..4")
    rows = compare_cohomology(build_OZ(problem), degrees, weights)
    totals = comparison_totals(rows)
    return {
        "degrees": list(degrees),
        "weights": list(weights),
        "rows": [{"degree": r.degree, "weight": r.weight, "dcrit": r.betti_dcrit, "bv": r.betti_bv,
                  "induced_rank": r.induced_rank, "iso": r.iso} for r in rows],
        "totals": {str(k): totals[k] for k in sorted(totals)},
        "quasi_isomorphism": all(t["iso"] for t in totals.values()),
    }


# -- symplectic ---------------------------------------------------------------------------

def task_symplectic(problem, options: dict) -> dict:
    require_valid(problem)
    OZ = build_OZ(problem)
    ctx = FormContext(OZ)
    conds = verify_three_conditions(ctx)
    w = omega(ctx)
    closed = check_closed(ctx, w)
    names, mat = pairing_matrix(ctx, w)
    nondeg = check_nondegenerate(ctx, w)
    master = check_master(BVAlgebra(OZ))
    checks = [{"check": f"condition-{i + 1}", "ok": c.ok, "detail": c.name, "witness": c.residue or None}
              for i, c in enumerate(conds)]
    checks.append(verdict_dict("closed", closed))
    checks.append(verdict_dict("nondegenerate", nondeg))
    checks += [verdict_dict("master", v) for v in master]
    return {
        "ok": all(c["ok"] for c in checks),
        "omega": str(w),
        "pairing": {"directions": names, "matrix": jsonable(mat)},
        "checks": checks,
    }


RUNNERS = {
    "validate": task_validate,
    "build": task_build,
    "cohomology": task_cohomology,
    "vanest-compare": task_vanest_compare,
    "symplectic-check": task_symplectic,
}


def run_task(problem, name: str, options: dict) -> dict:
    if name not in RUNNERS:
        raise SpecError(f"unknown task {name!r}")
    return RUNNERS[name](problem, dict(options))
