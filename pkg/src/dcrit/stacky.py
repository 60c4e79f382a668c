"""O(dCrit(f)) as normalized group cochains, O(BV(f)) as CE cochains, and van Est.

Group cochains are ``HTensor`` objects over the algebra of O(Z): a term
``(z, (h_1, ..., h_m))`` is z (x) h_1 (x) ... (x) h_m with z of degree n,
sitting in total degree n + m.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .algebra import Derivation, Element, GradedAlgebra, Generator
from .homology import Caps, WordEnumerator, betti, cohomology_data
from .hopf import FiniteGroupHopf, HTensor, LieAlgebra
from .linalg import EchelonBasis
from .model import DgModel, ghost_name, rho_on_model


def _add(acc, key, c):
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


def _by_length(T: HTensor) -> dict:
    out = {}
    for (z, h), c in T.terms.items():
        out.setdefault(len(h), {})[(z, h)] = c
    return out


# -- group cochains -------------------------------------------------------------

def d_delta(model: DgModel, T: HTensor) -> HTensor:
    """Cosimplicial differential: delta(b) (x) h + sum_j (-1)^j Delta_j(h) + (-1)^(m+1) h (x) 1."""
    out = HTensor(T.algebra, T.hopf)
    for m, terms in _by_length(T).items():
        part = HTensor(T.algebra, T.hopf, terms)
        acc = model.coaction.coface0(part)
        for j in range(1, m + 1):
            acc = acc + (-1) ** j * part.coface_delta(j)
        acc = acc + (-1) ** (m + 1) * part.append_unit()
        out = out + acc
    return out


def vertical_d(model: DgModel, T: HTensor) -> HTensor:
    return T.map_vertical(model.d.on_monomial)


def sign_by_degree(T: HTensor) -> HTensor:
    """Multiply each term by (-1)^n, n the degree of its O(Z) part."""
    alg = T.algebra
    return HTensor(alg, T.hopf, {k: (-c if alg.monomial_degree(k[0]) % 2 else c)
                                 for k, c in T.terms.items()})


def d_total_group(model: DgModel, T: HTensor) -> HTensor:
    """d^tot(b (x) h) = d b (x) h + (-1)^n d^Delta(b (x) h), then normalized."""
    out = vertical_d(model, T) + d_delta(model, sign_by_degree(T))
    return normalize(out)


def normalize(T: HTensor) -> HTensor:
    return T.project_plus()


def _iterate_cache(model: DgModel):
    cache = getattr(model, "_delta_iter", None)
    if cache is None:
        cache = model._delta_iter = {}
    return cache


def delta_iterate_monomial(model: DgModel, z, m: int) -> HTensor:
    """delta^m(z) = z_0 (x) z_1 (x) ... (x) z_m for a monomial z."""
    cache = _iterate_cache(model)
    hit = cache.get((z, m))
    if hit is None:
        T = HTensor(model.algebra, model.coaction.hopf, {(z, ()): Fraction(1)})
        for _ in range(m):
            T = model.coaction.coface0(T)
        hit = cache[z, m] = T
    return hit


def cup_product(model: DgModel, c1: HTensor, c2: HTensor) -> HTensor:
    """(b (x) h)(b' (x) h') = (-1)^(n' m) b b'_0 (x) (h_i b'_i)_i (x) h'."""
    alg = model.algebra
    H = model.coaction.hopf
    mul = alg.mul_monomials
    out = {}
    for (z1, h1), a in c1.terms.items():
        m = len(h1)
        for (z2, h2), b in c2.terms.items():
            n2 = alg.monomial_degree(z2)
            sign = -1 if (n2 * m) % 2 else 1
            for (z0, tw), c in delta_iterate_monomial(model, z2, m).terms.items():
                s, z = mul(z1, z0)
                if not s:
                    continue
                parts = [H.mul_keys(x, y) for x, y in zip(h1, tw)]
                for combo in itertools.product(*[list(p.items()) for p in parts]):
                    coeff = sign * s * a * b * c
                    for _, x in combo:
                        coeff *= x
                    _add(out, (z, tuple(k for k, _ in combo) + h2), coeff)
    return HTensor(alg, H, out)


def group_unit(model: DgModel) -> HTensor:
    return HTensor(model.algebra, model.coaction.hopf, {(model.algebra.unit_monomial, ()): Fraction(1)})


class GroupComplex:
    """The normalized group cohomology total complex, for a finite group."""

    def __init__(self, model: DgModel, caps: Caps | None = None):
        H = model.coaction.hopf
        if not isinstance(H, FiniteGroupHopf):
            raise ValueError("complete group cochain blocks need a finite group")
        if not model.coaction.preserves_weight():
            raise ValueError("the coaction does not preserve weights")
        self.name = "dcrit"
        self.model = model
        self.plus = H.plus_basis()
        self.enum = WordEnumerator(model.algebra, caps)
        self._cache = {}

    @property
    def exact(self):
        return self.enum.exact

    def words(self, k, w):
        hit = self._cache.get((k, w))
        if hit is None:
            out = []
            for n in self.enum.degrees(w):
                m = k - n
                if m < 0:
                    continue
                monos = self.enum.monomials(n, w)
                keys = list(itertools.product(self.plus, repeat=m))
                out += [(z, h) for z in monos for h in keys]
            out.sort()
            hit = self._cache[k, w] = out
        return hit

    def complete(self, k, w):
        return all(self.enum.complete(n, w) for n in self.enum.degrees(w) if n <= k)

    def apply_d(self, word):
        T = HTensor(self.model.algebra, self.model.coaction.hopf, {word: Fraction(1)})
        return d_total_group(self.model, T).terms

    def word_str(self, word):
        z, h = word
        H = self.model.coaction.hopf
        s = self.model.algebra.monomial_str(z)
        return s if not h else s + " (x) " + " (x) ".join(H.key_str(k) for k in h)


# -- Chevalley-Eilenberg cochains ------------------------------------------------

def _insert_sign(c: int, rest: tuple):
    """Sign and sorted tuple for (c, *rest) with rest sorted; sign 0 if c repeats."""
    if c in rest:
        return 0, None
    p = sum(1 for r in rest if r < c)
    return (-1) ** p, tuple(sorted(rest + (c,)))


def _perm_sign(seq) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass
class CECochain:
    """phi: wedge^m g -> O(Z), stored on sorted index tuples of the Lie basis."""

    model: DgModel
    values: dict

    def __post_init__(self):
        self.values = {I: v for I, v in self.values.items() if v}

    def __add__(self, other):
        vals = dict(self.values)
        for I, v in other.values.items():
            vals[I] = vals[I] + v if I in vals else v
        return CECochain(self.model, vals)

    def __sub__(self, other):
        return self + CECochain(self.model, {I: -v for I, v in other.values.items()})

    def __rmul__(self, c):
        return CECochain(self.model, {I: c * v for I, v in self.values.items()})

    def __eq__(self, other):
        return isinstance(other, CECochain) and self.values == other.values

    def is_zero(self):
        return not self.values

    def evaluate(self, args: tuple) -> Element:
        """phi(xi_{args[0]}, ..., xi_{args[-1]}) for any index sequence."""
        alg = self.model.algebra
        if len(set(args)) != len(args):
            return alg.zero()
        v = self.values.get(tuple(sorted(args)))
        if v is None:
            return alg.zero()
        return v if _perm_sign(args) == 1 else -v

    def __str__(self):
        if not self.values:
            return "0"
        return " + ".join(f"[{','.join(map(str, I))}]:({v})" for I, v in sorted(self.values.items()))


def _rho_derivations(model: DgModel) -> list[Derivation]:
    cache = getattr(model, "_rho_cache", None)
    if cache is None:
        cache = model._rho_cache = [rho_on_model(model, a) for a in range(model.lie.dim)]
    return cache


def d_ce(model: DgModel, phi: CECochain) -> CECochain:
    """The two-sum Chevalley-Eilenberg differential."""
    lie = model.lie
    dim = lie.dim
    rhos = _rho_derivations(model)
    alg = model.algebra
    out = {}
    ms = {len(I) for I in phi.values}
    for m in ms:
        for J in itertools.combinations(range(dim), m + 1):
            val = alg.zero()
            for k, jk in enumerate(J):
                rest = J[:k] + J[k + 1:]
                v = phi.values.get(rest)
                if v is not None and len(rest) == m:
                    val = val + (-1) ** k * rhos[jk](v)
            for k in range(len(J)):
                for l in range(k + 1, len(J)):
                    rest = J[:k] + J[k + 1:l] + J[l + 1:]
                    for c, coeff in lie.bracket_coefficients(J[k], J[l]).items():
                        s, I = _insert_sign(c, rest)
                        if s and I in phi.values:
                            val = val + ((-1) ** (k + l) * s * coeff) * phi.values[I]
            if val:
                out[J] = out[J] + val if J in out else val
    return CECochain(model, out)


def _signed_by_degree(model: DgModel, x: Element) -> Element:
    alg = model.algebra
    return Element(alg, {m: (-c if alg.monomial_degree(m) % 2 else c) for m, c in x.terms.items()})


def d_total_ce(model: DgModel, phi: CECochain) -> CECochain:
    """d^tot phi = d phi + (-1)^n d^CE phi."""
    d = model.d
    vert = CECochain(model, {I: d(v) for I, v in phi.values.items()})
    signed = CECochain(model, {I: _signed_by_degree(model, v) for I, v in phi.values.items()})
    return vert + d_ce(model, signed)


def ce_product(model: DgModel, phi: CECochain, psi: CECochain) -> CECochain:
    """Literal shuffle formula with prefactor (-1)^(n' m) / (m! m'!)."""
    alg = model.algebra
    dim = model.lie.dim
    out = {}
    mp = {len(I) for I in phi.values}
    mq = {len(I) for I in psi.values}
    for m in mp:
        phim = CECochain(model, {I: v for I, v in phi.values.items() if len(I) == m})
        for m2 in mq:
            if m + m2 > dim:
                continue
            for n2 in sorted({alg.monomial_degree(z) for I, v in psi.values.items()
                              if len(I) == m2 for z in v.terms}):
                psin = CECochain(model, {
                    I: Element(alg, {z: c for z, c in v.terms.items() if alg.monomial_degree(z) == n2})
                    for I, v in psi.values.items() if len(I) == m2})
                pref = Fraction((-1) ** ((n2 * m) % 2), math.factorial(m) * math.factorial(m2))
                for J in itertools.combinations(range(dim), m + m2):
                    val = alg.zero()
                    for sigma in itertools.permutations(J):
                        val = val + _perm_sign(sigma) * (
                            phim.evaluate(sigma[:m]) * psin.evaluate(sigma[m:]))
                    if val:
                        val = val * pref
                        out[J] = out[J] + val if J in out else val
    return CECochain(model, out)


def ce_unit(model: DgModel) -> CECochain:
    return CECochain(model, {(): model.algebra.one()})


class BVAlgebra:
    """O(Z) with ghosts theta^a (degree 1, weight 0) appended, and d_BV on generators."""

    def __init__(self, model: DgModel):
        self.model = model
        lie = model.lie
        self.theta_names = [ghost_name(a, lie.dim) for a in range(lie.dim)]
        gens = list(model.algebra.generators)
        gens += [Generator(n, 1, 0, "ghost") for n in self.theta_names]
        self.algebra = GradedAlgebra(gens)
        self.offset = model.algebra.n
        values = {}
        for g in model.algebra.generators:
            phi = CECochain(model, {(): model.algebra.gen(g.name)})
            values[g.name] = self.to_bv(d_total_ce(model, phi))
        for a, name in enumerate(self.theta_names):
            phi = CECochain(model, {(a,): model.algebra.one()})
            values[name] = self.to_bv(d_total_ce(model, phi))
        self.d = Derivation(self.algebra, values, 1, weight=0)

    def to_bv(self, phi: CECochain) -> Element:
        alg = self.algebra
        terms = {}
        for I, v in phi.values.items():
            for z, c in v.terms.items():
                m = list(z) + [0] * len(self.theta_names)
                for a in I:
                    m[self.offset + a] = 1
                terms[tuple(m)] = terms.get(tuple(m), 0) + c
        return Element(alg, terms)

    def from_bv(self, x: Element) -> CECochain:
        vals = {}
        zalg = self.model.algebra
        for m, c in x.terms.items():
            z = m[:self.offset]
            I = tuple(a for a, e in enumerate(m[self.offset:]) if e)
            vals.setdefault(I, {})
            vals[I][z] = vals[I].get(z, 0) + c
        return CECochain(self.model, {I: Element(zalg, t) for I, t in vals.items()})

    def dg_model(self) -> DgModel:
        out = DgModel.__new__(DgModel)
        out.name = "O(BV)"
        out.algebra = self.algebra
        out.differential = dict((n, self.d.value(n)) for n in self.algebra.index)
        out.coaction = None
        out.problem = self.model.problem
        out.lie = self.model.lie
        out.d = self.d
        return out


# -- van Est -----------------------------------------------------------------------

def van_est(model: DgModel, T: HTensor) -> CECochain:
    """vE(b (x) h)(xi_I) = b det[xi_{I_j}(h_k)]; zero once m exceeds dim g."""
    lie: LieAlgebra = model.lie
    alg = model.algebra
    out = {}
    for (z, h), c in T.terms.items():
        m = len(h)
        if m > lie.dim:
            continue
        for I in itertools.combinations(range(lie.dim), m):
            det = Fraction(0)
            for sigma in itertools.permutations(range(m)):
                p = Fraction(_perm_sign(sigma))
                for k in range(m):
                    p *= lie.evaluate_key(I[sigma[k]], h[k])
                    if not p:
                        break
                det += p
            if det:
                out.setdefault(I, {})
                out[I][z] = out[I].get(z, 0) + c * det
    return CECochain(model, {I: Element(alg, t) for I, t in out.items()})


@dataclass
class ComparisonRow:
    degree: int
    weight: int
    betti_dcrit: int
    betti_bv: int
    induced_rank: int

    @property
    def iso(self) -> bool:
        return self.betti_dcrit == self.betti_bv == self.induced_rank


def compare_cohomology(model: DgModel, degrees: tuple[int, int], weights: tuple[int, int]):
    """Betti tables of O(dCrit) and O(BV) and the rank of the map vE induces between them."""
    gcx = GroupComplex(model)
    bv = BVAlgebra(model)
    from .homology import DgaComplex
    bcx = DgaComplex("bv", bv.algebra, bv.d)
    rows = []
    for w in range(weights[0], weights[1] + 1):
        for k in range(degrees[0], degrees[1] + 1):
            gbasis, greps, _ = cohomology_data(gcx, k, w)
            bbasis, breps, bimage = cohomology_data(bcx, k, w)
            index = {wd: i for i, wd in enumerate(bbasis)}
            span = EchelonBasis()
            span.rows = dict(bimage.rows)
            span.tags = dict(bimage.tags)
            rank = 0
            for v in greps:
                T = HTensor(model.algebra, model.coaction.hopf, {gbasis[i]: c for i, c in v.items()})
                img = bv.to_bv(van_est(model, T))
                vec = {index[m]: c for m, c in img.terms.items()}
                if span.add(vec):
                    rank += 1
            rows.append(ComparisonRow(k, w, len(greps), len(breps), rank))
    return rows


def comparison_totals(rows: list[ComparisonRow]) -> dict:
    out = {}
    for r in rows:
        t = out.setdefault(r.degree, {"dcrit": 0, "bv": 0, "rank": 0})
        t["dcrit"] += r.betti_dcrit
        t["bv"] += r.betti_bv
        t["rank"] += r.induced_rank
    for t in out.values():
        t["iso"] = t["dcrit"] == t["bv"] == t["rank"]
    return out


def group_betti(model: DgModel, degrees, weights, **kw):
    return betti(GroupComplex(model, kw.pop("caps", None)), degrees, weights, **kw)
