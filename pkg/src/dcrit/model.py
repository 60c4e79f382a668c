"""The dg-algebras O(mu^-1(0)) and O(Z) and their validity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    Derivation,
    Element,
    FormAlgebra,
    GradedAlgebra,
    Generator,
    HomogeneityError,
    dr_name,
    partial_derivative,
)
from .hopf import (
    Coaction,
    HopfAlgebra,
    HTensor,
    LieAlgebra,
    adjoint_coaction,
    dual_coaction_matrix,
    lie_algebra,
    rho,
)


class ValidationError(ValueError):
    """A problem fails one of the validation steps; ``witness`` describes why."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Verdict:
    ok: bool
    detail: str = ""
    witness: object = None

    def __bool__(self):
        return self.ok


@dataclass
class Problem:
    """Input data: base ring A, group H, coaction on A, invariant function f."""

    ring: GradedAlgebra
    hopf: HopfAlgebra
    coaction: Coaction
    f: Element
    weights: dict = field(default_factory=dict)
    name: str = ""

    @property
    def variables(self) -> list[str]:
        return [g.name for g in self.ring.generators]


def antifield_name(x: str) -> str:
    return f"v_{x}"


def ghost_antifield_name(a: int, dim: int) -> str:
    return "xi" if dim == 1 else f"xi{a + 1}"


def ghost_name(a: int, dim: int) -> str:
    return "theta" if dim == 1 else f"theta{a + 1}"


@dataclass
class DgModel:
    """A free graded-commutative algebra with a differential and an H-coaction."""

    name: str
    algebra: GradedAlgebra
    differential: dict
    coaction: Coaction | None
    problem: Problem
    lie: LieAlgebra

    def __post_init__(self):
        self.d = Derivation(self.algebra, self.differential, 1, weight=0)

    def replace_differential(self, values: dict, name: str | None = None) -> DgModel:
        """Copy with some generator values of d replaced (used for defect injection)."""
        diff = dict(self.differential)
        diff.update(values)
        out = DgModel.__new__(DgModel)
        out.name = name or self.name
        out.algebra = self.algebra
        out.differential = diff
        out.coaction = self.coaction
        out.problem = self.problem
        out.lie = self.lie
        out.d = Derivation(self.algebra, diff, 1, weight=None)
        return out

    def generator_table(self) -> list[dict]:
        rows = []
        for g in self.algebra.generators:
            rows.append({
                "name": g.name,
                "degree": g.degree,
                "weight": g.weight,
                "kind": g.kind,
                "d": str(self.d.value(g.name)),
            })
        return rows


# -- group-theoretic pieces on A -----------------------------------------------

def linear_part(problem: Problem) -> tuple[list[list[dict]], list[dict]]:
    """Matrix M and translation c with delta(x_i) = sum_j x_j (x) M[j][i] + 1 (x) c[i].

    Raises ValidationError for coactions that are not affine in the variables.
    """
    A = problem.ring
    n = A.n
    M = [[{} for _ in range(n)] for _ in range(n)]
    c = [{} for _ in range(n)]
    for i, g in enumerate(A.generators):
        for (z, (k,)), coeff in problem.coaction.images[i].terms.items():
            nz = [j for j, e in enumerate(z) if e]
            if not nz:
                c[i][k] = c[i].get(k, 0) + coeff
            elif len(nz) == 1 and z[nz[0]] == 1:
                M[nz[0]][i][k] = M[nz[0]][i].get(k, 0) + coeff
            else:
                raise ValidationError(
                    f"coaction on {g.name} is not affine; only affine actions are supported",
                    witness=str(problem.coaction.images[i]),
                )
    return M, c


def check_invariance(problem: Problem, lie: LieAlgebra | None = None) -> Verdict:
    """delta(f) = f (x) 1, together with the infinitesimal check rho(xi_a)(f) = 0."""
    ok, diff = problem.coaction.is_invariant(problem.f)
    if not ok:
        return Verdict(False, "f is not invariant: delta(f) - f (x) 1 is nonzero", str(diff))
    lie = lie or lie_algebra(problem.hopf)
    for a in range(lie.dim):
        r = rho(problem.coaction, lie, a, problem.f)
        if r:
            return Verdict(False, f"rho(xi_{a + 1})(f) is nonzero", str(r))
    return Verdict(True, "f is invariant")


def rho_matrix(problem: Problem, lie: LieAlgebra) -> list[list[Element]]:
    """R[a][i] = rho(xi_a)(x_i) in A."""
    A = problem.ring
    return [[rho(problem.coaction, lie, a, A.gen(g.name)) for g in A.generators]
            for a in range(lie.dim)]


def _homogeneous_weight(x: Element):
    ws = x.weights()
    return ws.pop() if len(ws) == 1 else None


def resolve_weights(problem: Problem, lie: LieAlgebra) -> dict:
    """Weights of the antifields and ghost-antifields, forced or supplied."""
    A = problem.ring
    over = dict(problem.weights)
    out = {}
    W = _homogeneous_weight(problem.f) if problem.f else None
    for g in A.generators:
        name = antifield_name(g.name)
        if W is not None:
            forced = W - g.weight
            if name in over and over[name] != forced:
                raise ValidationError(
                    f"weight of {name} is forced to {forced} by the weight of f, got {over[name]}")
            out[name] = forced
        elif name in over:
            out[name] = over[name]
        elif problem.f:
            raise ValidationError(f"f is not weight homogeneous; supply a weight for {name}")
        else:
            raise ValidationError(f"f = 0; supply a weight for {name}")
    R = rho_matrix(problem, lie)
    for a in range(lie.dim):
        name = ghost_antifield_name(a, lie.dim)
        ws = set()
        for i, g in enumerate(A.generators):
            for m in R[a][i].terms:
                ws.add(A.monomial_weight(m) + out[antifield_name(g.name)])
        if len(ws) > 1:
            raise ValidationError(f"moment map component for {name} is not weight homogeneous",
                                  witness=sorted(ws))
        if ws:
            forced = ws.pop()
            if name in over and over[name] != forced:
                raise ValidationError(
                    f"weight of {name} is forced to {forced} by the moment map, got {over[name]}")
            out[name] = forced
        elif name in over:
            out[name] = over[name]
        else:
            raise ValidationError(f"moment map for {name} vanishes; supply a weight for it")
    unknown = set(over) - set(out)
    if unknown:
        raise ValidationError(f"weights given for unknown generators: {sorted(unknown)}")
    return out


def _induced_images(problem: Problem, lie: LieAlgebra, algebra: GradedAlgebra,
                    xi_names: list[str]) -> dict:
    """Coaction images on all generators: A as given, T_A dual to dA, g by the adjoint coaction."""
    H = problem.hopf
    A = problem.ring
    M, _ = linear_part(problem)
    N = dual_coaction_matrix(H, M)
    images = {}
    for i, g in enumerate(A.generators):
        images[g.name] = HTensor(
            algebra, H,
            {(algebra.monomial(_monomial_dict(A, z)), h): c
             for (z, h), c in problem.coaction.images[i].terms.items()})
    for k, g in enumerate(A.generators):
        terms = {}
        for l, gl in enumerate(A.generators):
            for key, c in N[l][k].items():
                terms[(algebra.monomial({antifield_name(gl.name): 1}), (key,))] = c
        images[antifield_name(g.name)] = HTensor(algebra, H, terms)
    if lie.dim:
        C = adjoint_coaction(lie)
        D = dual_coaction_matrix(H, C)
        for a, name in enumerate(xi_names):
            terms = {}
            for b, nb in enumerate(xi_names):
                for key, c in D[b][a].items():
                    terms[(algebra.monomial({nb: 1}), (key,))] = c
            images[name] = HTensor(algebra, H, terms)
    return images


def _monomial_dict(A: GradedAlgebra, z) -> dict:
    return {g.name: e for g, e in zip(A.generators, z) if e}


def _push(algebra: GradedAlgebra, x: Element) -> Element:
    return algebra.embed_from(x)


def moment_map(problem: Problem, lie: LieAlgebra, algebra: GradedAlgebra, a: int) -> Element:
    """mu*(xi_a) = -sum_i rho(xi_a)(x_i) v_i, as an element of ``algebra``."""
    A = problem.ring
    out = algebra.zero()
    for g in A.generators:
        r = rho(problem.coaction, lie, a, A.gen(g.name))
        if r:
            out = out - _push(algebra, r) * algebra.gen(antifield_name(g.name))
    return out


def _check_problem(problem: Problem, lie: LieAlgebra):
    errors = problem.hopf.validate()
    if errors:
        raise ValidationError("Hopf axioms fail", witness=errors)
    errors = problem.coaction.validate()
    if errors:
        raise ValidationError("coaction axioms fail", witness=errors)
    v = check_invariance(problem, lie)
    if not v:
        raise ValidationError(v.detail, witness=v.witness)


def build_OZ(problem: Problem, exact: bool = True) -> DgModel:
    """O(Z): x_i (deg 0), v_i (deg -1), xi_a (deg -2); d v = df/dx, d xi = mu*(xi)."""
    lie = lie_algebra(problem.hopf)
    _check_problem(problem, lie)
    A = problem.ring
    weights = resolve_weights(problem, lie)
    xi_names = [ghost_antifield_name(a, lie.dim) for a in range(lie.dim)]
    gens = list(A.generators)
    gens += [Generator(antifield_name(g.name), -1, weights[antifield_name(g.name)], "antifield")
             for g in A.generators]
    gens += [Generator(n, -2, weights[n], "ghost-antifield") for n in xi_names]
    if exact:
        _require_positive(gens)
    alg = GradedAlgebra(gens)
    diff = {}
    for g in A.generators:
        diff[antifield_name(g.name)] = _push(alg, partial_derivative(problem.f, g.name))
    for a, name in enumerate(xi_names):
        diff[name] = moment_map(problem, lie, alg, a)
    try:
        coaction = Coaction(alg, problem.hopf, _induced_images(problem, lie, alg, xi_names))
        model = DgModel("O(Z)", alg, diff, coaction, problem, lie)
    except HomogeneityError as exc:
        raise ValidationError(f"differential is not weight homogeneous: {exc}") from exc
    return model


def build_O_mu0(problem: Problem, exact: bool = True) -> DgModel:
    """O(mu^-1(0)): x_i, v_i in degree 0 and xi_a in degree -1 with d xi = mu*(xi)."""
    lie = lie_algebra(problem.hopf)
    errors = problem.hopf.validate() + problem.coaction.validate()
    if errors:
        raise ValidationError("axioms fail", witness=errors)
    A = problem.ring
    weights = resolve_weights(problem, lie)
    xi_names = [ghost_antifield_name(a, lie.dim) for a in range(lie.dim)]
    gens = list(A.generators)
    gens += [Generator(antifield_name(g.name), 0, weights[antifield_name(g.name)], "fiber")
             for g in A.generators]
    gens += [Generator(n, -1, weights[n], "shifted-ghost") for n in xi_names]
    if exact:
        _require_positive(gens)
    alg = GradedAlgebra(gens)
    diff = {name: moment_map(problem, lie, alg, a) for a, name in enumerate(xi_names)}
    coaction = Coaction(alg, problem.hopf, _induced_images(problem, lie, alg, xi_names))
    return DgModel("O(mu^-1(0))", alg, diff, coaction, problem, lie)


def _require_positive(gens):
    bad = [g.name for g in gens if g.weight <= 0]
    if bad:
        raise ValidationError(
            f"exact mode needs positive weights; non-positive for {bad} (use truncated mode)")


def verify_d_squared(model: DgModel) -> Verdict:
    """d(d g) = 0 for every generator g."""
    d = model.d
    for g in model.algebra.generators:
        r = d(d.value(g.name))
        if r:
            return Verdict(False, f"d^2({g.name}) is nonzero", str(r))
    return Verdict(True, "d^2 = 0 on all generators")


def check_equivariance(model: DgModel) -> Verdict:
    """delta(d g) = (d (x) id) delta(g) on all generators."""
    co = model.coaction
    d = model.d
    for g in model.algebra.generators:
        lhs = co.apply(d.value(g.name))
        rhs = co.apply(model.algebra.gen(g.name)).map_vertical(lambda z: d.on_monomial(z))
        if lhs != rhs:
            return Verdict(False, f"coaction does not commute with d on {g.name}", str(lhs - rhs))
    return Verdict(True, "d is H-equivariant")


def weight_homogeneous(model: DgModel) -> Verdict:
    alg = model.algebra
    for g in alg.generators:
        val = model.d.value(g.name)
        ws = val.weights()
        if ws and ws != {g.weight}:
            return Verdict(False, f"d({g.name}) has weights {sorted(ws)} != {g.weight}")
    return Verdict(True, "d preserves weight")


# -- moment map condition on T*X = Spec Sym_A T_A --------------------------------

def cotangent_algebra(problem: Problem) -> GradedAlgebra:
    """Sym_A T_A with the fibre coordinates v_i in degree 0."""
    A = problem.ring
    gens = list(A.generators) + [Generator(antifield_name(g.name), 0, 0, "fiber")
                                 for g in A.generators]
    return GradedAlgebra(gens)


def check_moment_map_condition(problem: Problem) -> list[Verdict]:
    """d^dR mu*(xi) = iota_{rho(xi)} omega with omega = d^dR lambda, for each basis xi."""
    lie = lie_algebra(problem.hopf)
    A = problem.ring
    T = cotangent_algebra(problem)
    F = FormAlgebra(T)
    lam = F.zero()
    for g in A.generators:
        lam = lam + F.gen(antifield_name(g.name)) * F.gen(dr_name(g.name))
    omega = F.de_rham(lam)
    M, _ = linear_part(problem)
    H = problem.hopf
    out = []
    for a in range(lie.dim):
        # vector field rho(xi_a) on T*X: on x via rho, on v via the dual coaction
        field_values = {}
        for i, g in enumerate(A.generators):
            field_values[g.name] = F.embed_from(_push(T, rho(problem.coaction, lie, a, A.gen(g.name))))
            val = F.zero()
            for j, gj in enumerate(A.generators):
                c = lie.evaluate(a, H.antipode(M[i][j]))
                if c:
                    val = val + c * F.gen(antifield_name(gj.name))
            field_values[antifield_name(g.name)] = val
        iota = Derivation(F, {dr_name(n): v for n, v in field_values.items()}, 0, -1, weight=None)
        mu = F.embed_from(moment_map(problem, lie, T, a))
        lhs = F.de_rham(mu)
        rhs = iota(omega)
        if lhs == rhs:
            out.append(Verdict(True, f"moment map condition holds for xi_{a + 1}"))
        else:
            out.append(Verdict(False, f"moment map condition fails for xi_{a + 1}", str(lhs - rhs)))
    return out


def check_rho_morphism(problem: Problem) -> Verdict:
    """rho([xi_a, xi_b]) = [rho(xi_a), rho(xi_b)] on the variables of A."""
    lie = lie_algebra(problem.hopf)
    A = problem.ring
    co = problem.coaction

    def r(a, x):
        return rho(co, lie, a, x)

    for a in range(lie.dim):
        for b in range(lie.dim):
            for g in A.generators:
                x = A.gen(g.name)
                lhs = A.zero()
                for c, coeff in lie.bracket_coefficients(a, b).items():
                    lhs = lhs + coeff * r(c, x)
                rhs = r(a, r(b, x)) - r(b, r(a, x))
                if lhs != rhs:
                    return Verdict(False, f"rho is not a Lie morphism on ({a}, {b}, {g.name})",
                                   str(lhs - rhs))
    return Verdict(True, "rho is a Lie algebra morphism")


def rho_on_model(model: DgModel, a: int) -> Derivation:
    """The degree-0 derivation rho(xi_a) of the model, read off from its coaction."""
    alg = model.algebra
    lie = model.lie
    values = {}
    for g in alg.generators:
        val = rho(model.coaction, lie, a, alg.gen(g.name))
        if val:
            values[g.name] = val
    return Derivation(alg, values, 0, weight=None)
