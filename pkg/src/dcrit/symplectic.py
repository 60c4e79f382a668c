"""Forms on the cosimplicial model, the shifted symplectic 2-form, and the antibracket.

A p-form in horizontal degree m is an ``HTensor`` over a Kaehler form algebra
of O(Z) whose extra generators dt<i>_<c> are the de Rham symbols of the
coordinate c of the i-th H factor (0-based).  Finite groups contribute no
such symbols because their function algebras are etale.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Derivation,
    Element,
    FormAlgebra,
    Generator,
    dr_name,
    left_derivative,
    right_derivative,
)
from .hopf import HTensor, dual_representatives
from .linalg import determinant, kernel_and_rank
from .model import DgModel, Verdict, antifield_name


def dt_name(i: int, coord: str) -> str:
    return f"dt{i}_{coord}"


def _add(acc, key, c):
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


class FormContext:
    """Forms over O(Z) (x) H^(x)m for m up to ``max_factors``."""

    def __init__(self, model: DgModel, max_factors: int = 3):
        self.model = model
        self.hopf = model.coaction.hopf
        self.coords = tuple(self.hopf.coordinates)
        self.max_factors = max_factors
        extra = [Generator(dt_name(i, c), 0, 0, "form", form=1)
                 for i in range(max_factors) for c in self.coords]
        self.forms = FormAlgebra(model.algebra, extra)
        F = self.forms
        self.base_n = model.algebra.n
        self._dt_index = {(i, a): F.index[dt_name(i, c)]
                          for i in range(max_factors) for a, c in enumerate(self.coords)}
        self._dt_of = {v: k for k, v in self._dt_index.items()}
        values = {}
        for g in model.algebra.generators:
            dg = F.lift(model.d.value(g.name))
            values[g.name] = dg
            values[dr_name(g.name)] = F.de_rham(dg)
        self.d = Derivation(F, values, 1, weight=None)
        self._local = {}

    # -- basic elements -----------------------------------------------------
    def tensor(self, x: Element, keys=()) -> HTensor:
        x = self.forms.lift(x) if x.algebra != self.forms else x
        return HTensor(self.forms, self.hopf, {(m, tuple(keys)): c for m, c in x.terms.items()})

    def lift_z(self, x: Element) -> Element:
        return self.forms.embed_from(x)

    def _dH(self, key, pos: int) -> dict:
        """d^dR of the basis element ``key`` of H sitting at 1-factor position ``pos``."""
        out = {}
        for a in range(len(self.coords)):
            for k, c in self.hopf.partial(key, a).items():
                _add(out, (self._dt_mono(pos, a), k), c)
        return out

    def _dt_mono(self, i, a):
        m = [0] * self.forms.n
        m[self._dt_index[i, a]] = 1
        return tuple(m)

    # -- local images of generators under cofaces -----------------------------
    # A local image is a dict {(form monomial, keys): coeff} where keys covers
    # only the positions a coface touches; None stands for the unit of H.

    def _gen_image(self, idx: int, j: int, m: int) -> dict:
        F = self.forms
        g = F.generators[idx]
        unit_mono = F.unit_monomial

        def mono(i):
            t = [0] * F.n
            t[i] = 1
            return tuple(t)

        if idx < self.base_n:
            if j == 0:
                return {(self.lift_mono(z), (k,)): c
                        for (z, (k,)), c in self.model.coaction.images[idx].terms.items()}
            return {(mono(idx), (None, None) if j <= m else (None,)): Fraction(1)}
        if idx < 2 * self.base_n:
            base = idx - self.base_n
            if j == 0:
                out = {}
                for (z, (k,)), c in self.model.coaction.images[base].terms.items():
                    zf = F.lift(Element(self.model.algebra, {z: Fraction(1)}))
                    for mm, cc in F.de_rham(zf).terms.items():
                        _add(out, (mm, (k,)), c * cc)
                    zm = self.lift_mono(z)
                    for (dt, k2), cc in self._dH(k, 0).items():
                        s, mm = F.mul_monomials(zm, dt)
                        if s:
                            _add(out, (mm, (k2,)), s * c * cc)
                return out
            return {(mono(idx), (None, None) if j <= m else (None,)): Fraction(1)}
        i, a = self._dt_of[idx]
        if j == 0:
            return {(mono(self._dt_index[i + 1, a]), (None,)): Fraction(1)}
        if j == m + 1:
            return {(mono(idx), (None,)): Fraction(1)}
        if i < j - 1:
            return {(mono(idx), (None, None)): Fraction(1)}
        if i > j - 1:
            return {(mono(self._dt_index[i + 1, a]), (None, None)): Fraction(1)}
        # d^dR of Delta(t_a) across positions j-1 and j
        out = {}
        coord_key = self._coord_key(a)
        for (k1, k2), c in self.hopf.coproduct_key(coord_key).items():
            for b in range(len(self.coords)):
                for kk, cc in self.hopf.partial(k1, b).items():
                    _add(out, (mono(self._dt_index[j - 1, b]), (kk, k2)), c * cc)
                for kk, cc in self.hopf.partial(k2, b).items():
                    _add(out, (mono(self._dt_index[j, b]), (k1, kk)), c * cc)
        return out

    def _coord_key(self, a):
        k = [0] * len(self.coords)
        k[a] = 1
        return tuple(k)

    def lift_mono(self, z):
        return tuple(z) + (0,) * (self.forms.n - len(z))

    def _mul_local(self, x: dict, y: dict) -> dict:
        F = self.forms
        H = self.hopf
        out = {}
        for (m1, k1), c1 in x.items():
            for (m2, k2), c2 in y.items():
                s, m = F.mul_monomials(m1, m2)
                if not s:
                    continue
                parts = []
                for a, b in zip(k1, k2):
                    if a is None:
                        parts.append({b: Fraction(1)})
                    elif b is None:
                        parts.append({a: Fraction(1)})
                    else:
                        parts.append(H.mul_keys(a, b))
                for combo in itertools.product(*[list(p.items()) for p in parts]):
                    c = s * c1 * c2
                    for _, v in combo:
                        c *= v
                    _add(out, (m, tuple(k for k, _ in combo)), c)
        return out

    def local_image(self, z, j: int, m: int) -> dict:
        key = (z, j, m)
        hit = self._local.get(key)
        if hit is not None:
            return hit
        width = 1 if j == 0 or j == m + 1 else 2
        out = {(self.forms.unit_monomial, (None,) * width): Fraction(1)}
        for idx, e in enumerate(z):
            if e:
                img = self._gen_image(idx, j, m)
                for _ in range(e):
                    out = self._mul_local(out, img)
        self._local[key] = out
        return out

    def coface(self, T: HTensor, j: int) -> HTensor:
        H = self.hopf
        out = {}
        for (z, h), c in T.terms.items():
            m = len(h)
            if m + 1 > self.max_factors and self.coords:
                raise ValueError("horizontal degree exceeds the form context")
            loc = self.local_image(z, j, m)
            if j == 0:
                for (mm, (k,)), cc in loc.items():
                    keys = [H.unit() if k is None else {k: Fraction(1)}]
                    for combo in itertools.product(*[list(p.items()) for p in keys]):
                        _add(out, (mm, (combo[0][0],) + h), c * cc * combo[0][1])
            elif j == m + 1:
                for (mm, (k,)), cc in loc.items():
                    for u, cu in H.unit().items():
                        _add(out, (mm, h + (u,)), c * cc * cu)
            else:
                delta = H.coproduct_key(h[j - 1])
                for (mm, (a1, b1)), cc in loc.items():
                    for (a, b), cd in delta.items():
                        pa = {a: Fraction(1)} if a1 is None else H.mul_keys(a1, a)
                        pb = {b: Fraction(1)} if b1 is None else H.mul_keys(b1, b)
                        for ka, xa in pa.items():
                            for kb, xb in pb.items():
                                _add(out, (mm, h[:j - 1] + (ka, kb) + h[j:]), c * cc * cd * xa * xb)
        return HTensor(self.forms, H, out)

    def d_delta(self, T: HTensor) -> HTensor:
        out = HTensor(self.forms, self.hopf)
        groups = {}
        for k, c in T.terms.items():
            groups.setdefault(len(k[1]), {})[k] = c
        for m, terms in groups.items():
            part = HTensor(self.forms, self.hopf, terms)
            for j in range(m + 2):
                out = out + (-1) ** j * self.coface(part, j)
        return out

    def vertical(self, T: HTensor) -> HTensor:
        return T.map_vertical(self.d.on_monomial)

    def de_rham(self, T: HTensor) -> HTensor:
        F = self.forms
        out = {}
        for (z, h), c in T.terms.items():
            for mm, cc in F.de_rham.on_monomial(z).terms.items():
                _add(out, (mm, h), c * cc)
            sign = -1 if F.monomial_form(z) % 2 else 1
            for pos, k in enumerate(h):
                for (dt, kk), cc in self._dH(k, pos).items():
                    s, mm = F.mul_monomials(z, dt)
                    if s:
                        _add(out, (mm, h[:pos] + (kk,) + h[pos + 1:]), sign * s * c * cc)
        return HTensor(F, self.hopf, out)

    def d_total(self, T: HTensor) -> HTensor:
        F = self.forms
        signed = HTensor(F, self.hopf, {k: (-c if F.monomial_degree(k[0]) % 2 else c)
                                         for k, c in T.terms.items()})
        return self.vertical(T) + self.d_delta(signed)


# -- tautological forms ------------------------------------------------------------

def lambda_X(ctx: FormContext) -> HTensor:
    """sum_i v_i d^dR(x_i), in vertical degree -1 and horizontal degree 0."""
    F = ctx.forms
    A = ctx.model.problem.ring
    x = F.zero()
    for g in A.generators:
        x = x + F.gen(antifield_name(g.name)) * F.gen(dr_name(g.name))
    return ctx.tensor(x)


def lambda_BG(ctx: FormContext) -> HTensor:
    """sum_a xi_a (x) j(theta^a) with j([theta]) = d^dR(theta_1) S(theta_2)."""
    lie = ctx.model.lie
    H = ctx.hopf
    F = ctx.forms
    out = HTensor(F, H)
    if lie.dim == 0:
        return out
    xi_names = [g.name for g in ctx.model.algebra.generators if g.kind == "ghost-antifield"]
    for a, theta in enumerate(dual_representatives(lie)):
        terms = {}
        for (t1, t2), c in H.coproduct(theta).items():
            for (dt, k1), c1 in ctx._dH(t1, 0).items():
                for k, c2 in H.mul({k1: Fraction(1)}, H.antipode_key(t2)).items():
                    _add(terms, (dt, (k,)), c * c1 * c2)
        j_theta = HTensor(F, H, terms)
        piece = {}
        for m, k, c in _left_mul(F, F.gen(xi_names[a]), j_theta):
            _add(piece, (m, k), c)
        out = out + HTensor(F, H, piece)
    return out


def _left_mul(F, x: Element, T: HTensor):
    for (z, h), c in T.terms.items():
        for m, cx in x.terms.items():
            s, mm = F.mul_monomials(m, z)
            if s:
                yield mm, h, s * c * cx


@dataclass
class ConditionResult:
    name: str
    ok: bool
    residue: str = ""


def verify_three_conditions(ctx: FormContext, lam_bg: HTensor | None = None) -> list[ConditionResult]:
    """d lam_X = d^dR f;  d^Delta lam_X + d lam_BG = 0;  d^Delta lam_BG = 0."""
    F = ctx.forms
    lx = lambda_X(ctx)
    lb = lambda_BG(ctx) if lam_bg is None else lam_bg
    f = ctx.lift_z(ctx.model.algebra.embed_from(ctx.model.problem.f))
    c1 = ctx.vertical(lx) - ctx.tensor(F.de_rham(f))
    c2 = ctx.d_delta(lx) + ctx.vertical(lb)
    c3 = ctx.d_delta(lb)
    out = []
    for name, r in (("d lambda_X = d^dR f", c1),
                    ("d^Delta lambda_X + d lambda_BG = 0", c2),
                    ("d^Delta lambda_BG = 0", c3)):
        out.append(ConditionResult(name, r.is_zero(), "" if r.is_zero() else str(r)))
    return out


def omega(ctx: FormContext, lam_bg: HTensor | None = None) -> HTensor:
    lb = lambda_BG(ctx) if lam_bg is None else lam_bg
    return ctx.de_rham(lambda_X(ctx) - lb)


def check_closed(ctx: FormContext, w: HTensor) -> Verdict:
    r = ctx.d_total(w)
    return Verdict(r.is_zero(), "d^tot omega = 0" if r.is_zero() else "d^tot omega is nonzero",
                   None if r.is_zero() else str(r))


def pairing_directions(ctx: FormContext) -> list[str]:
    F = ctx.forms
    names = [dr_name(g.name) for g in ctx.model.algebra.generators]
    names += [dt_name(0, c) for c in ctx.coords]
    return [n for n in names if n in F.index]


def pairing_matrix(ctx: FormContext, w: HTensor) -> tuple[list[str], list[list[Fraction]]]:
    """Coefficients of d^dR g ^ d^dR g' at the base point, H factors evaluated by the counit."""
    F = ctx.forms
    H = ctx.hopf
    dirs = pairing_directions(ctx)
    pos = {F.index[n]: i for i, n in enumerate(dirs)}
    n = len(dirs)
    M = [[Fraction(0)] * n for _ in range(n)]
    base = ctx.model.algebra.generators
    for (z, h), c in w.terms.items():
        val = c
        for k in h:
            val *= H.counit_key(k)
        if not val:
            continue
        ok = True
        for i, g in enumerate(base):
            if z[i] and not g.laurent:
                ok = False
        if not ok:
            continue
        sym = []
        for idx, e in enumerate(z):
            if idx < len(base):
                continue
            if e:
                if idx not in pos:
                    ok = False
                sym += [idx] * e
        if not ok or len(sym) != 2:
            continue
        p, q = sym
        dp = F.generators[p].degree
        dq = F.generators[q].degree
        if p == q:
            M[pos[p]][pos[p]] += 2 * val
        else:
            M[pos[p]][pos[q]] += val
            M[pos[q]][pos[p]] += (-1) ** ((dp * dq + 1) % 2) * val
    return dirs, M


def check_nondegenerate(ctx: FormContext, w: HTensor) -> Verdict:
    dirs, M = pairing_matrix(ctx, w)
    if not dirs:
        return Verdict(True, "empty pairing, vacuously nondegenerate", {"directions": [], "matrix": []})
    det = determinant(M)
    info = {"directions": dirs, "matrix": M, "determinant": det}
    if det:
        return Verdict(True, "pairing matrix is invertible", info)
    kernel, _ = kernel_and_rank(M, len(dirs))
    info["kernel"] = kernel
    return Verdict(False, "pairing matrix is singular", info)


# -- antibracket on O(BV) ------------------------------------------------------------

def canonical_pairs(bv) -> list[tuple[str, str]]:
    """(q, p) pairs with {q, p} = 1: (x_i, v_i) and (xi_a, theta^a)."""
    model = bv.model
    A = model.problem.ring
    pairs = [(g.name, antifield_name(g.name)) for g in A.generators]
    xi_names = [g.name for g in model.algebra.generators if g.kind == "ghost-antifield"]
    pairs += list(zip(xi_names, bv.theta_names))
    return pairs


def antibracket(bv, a: Element, b: Element) -> Element:
    """{F, G} = sum (F d_r/dq)(d_l/dp G) - (F d_r/dp)(d_l/dq G)."""
    out = bv.algebra.zero()
    for q, p in canonical_pairs(bv):
        out = out + right_derivative(a, q) * left_derivative(b, p) \
            - right_derivative(a, p) * left_derivative(b, q)
    return out


def master_action(bv) -> Element:
    """S = f + sum v_i rho(xi_a)(x_i) theta^a + 1/2 sum xi_c f^c_ab theta^a theta^b."""
    from .hopf import rho
    model = bv.model
    alg = bv.algebra
    prob = model.problem
    lie = model.lie
    S = alg.embed_from(prob.f)
    for a in range(lie.dim):
        th = alg.gen(bv.theta_names[a])
        for g in prob.ring.generators:
            r = rho(prob.coaction, lie, a, prob.ring.gen(g.name))
            if r:
                S = S + alg.gen(antifield_name(g.name)) * alg.embed_from(r) * th
    xi_names = [g.name for g in model.algebra.generators if g.kind == "ghost-antifield"]
    for a in range(lie.dim):
        for b in range(lie.dim):
            for c, coeff in lie.bracket_coefficients(a, b).items():
                S = S + Fraction(coeff, 2) * alg.gen(xi_names[c]) * alg.gen(bv.theta_names[a]) \
                    * alg.gen(bv.theta_names[b])
    return S


def check_master(bv, S: Element | None = None) -> list[Verdict]:
    S = master_action(bv) if S is None else S
    out = []
    ss = antibracket(bv, S, S)
    out.append(Verdict(ss.is_zero(), "{S, S} = 0" if ss.is_zero() else "{S, S} is nonzero",
                       None if ss.is_zero() else str(ss)))
    for g in bv.algebra.generators:
        x = bv.algebra.gen(g.name)
        lhs = antibracket(bv, S, x)
        rhs = bv.d.value(g.name)
        ok = lhs == rhs
        out.append(Verdict(ok, f"{{S, {g.name}}} = d {g.name}" if ok else f"{{S, {g.name}}} != d {g.name}",
                           None if ok else str(lhs - rhs)))
    return out
