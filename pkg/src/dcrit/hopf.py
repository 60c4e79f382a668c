"""Hopf algebras O(G), Sweedler calculus, comodule algebras and Lie algebras.

An element of H is a dict ``basis key -> Fraction``.  Elements of
B (x) H^(x)m, for B one of the graded algebras, are ``HTensor`` objects whose
terms are keyed by ``(monomial of B, tuple of m basis keys)``; H sits in
degree 0 so no Koszul signs arise from the H factors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Iterable

from .algebra import Element, GradedAlgebra
from .linalg import axpy, nullspace_rref, solve_square


class HopfError(ValueError):
    pass


def _add(acc: dict, key, c):
    s = acc.get(key, 0) + c
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


class HopfAlgebra:
    """Base class: structure maps on basis keys, lifted linearly to elements."""

    kind = "abstract"
    coordinates: tuple[str, ...] = ()

    # -- per-class structure on keys --------------------------------
    def unit(self) -> dict:
        raise NotImplementedError

    def mul_keys(self, a, b) -> dict:
        raise NotImplementedError

    def counit_key(self, k) -> Fraction:
        raise NotImplementedError

    def coproduct_key(self, k) -> dict:
        raise NotImplementedError

    def antipode_key(self, k) -> dict:
        raise NotImplementedError

    def algebra_generators(self) -> list:
        raise NotImplementedError

    def derivation_value(self, values: dict, k) -> Fraction:
        """Value on k of the relative derivation taking ``values`` on the generators."""
        raise NotImplementedError

    def partial(self, k, a: int) -> dict:
        raise HopfError(f"{self.kind} Hopf algebra has no coordinates")

    def inverse(self, h: dict) -> dict:
        raise HopfError("element is not invertible")

    def sample_keys(self) -> list:
        raise NotImplementedError

    def key_str(self, k) -> str:
        return str(k)

    def unit_key(self):
        """The basis key of 1, when 1 is a basis element (None otherwise)."""
        u = self.unit()
        if len(u) == 1:
            (k, c), = u.items()
            if c == 1:
                return k
        return None

    # -- linear extensions -------------------------------------------
    def mul(self, a: dict, b: dict) -> dict:
        out = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                for k, c in self.mul_keys(ka, kb).items():
                    _add(out, k, ca * cb * c)
        return out

    def counit(self, a: dict) -> Fraction:
        return sum((c * self.counit_key(k) for k, c in a.items()), Fraction(0))

    def coproduct(self, a: dict) -> dict:
        out = {}
        for k, c in a.items():
            for kk, cc in self.coproduct_key(k).items():
                _add(out, kk, c * cc)
        return out

    def antipode(self, a: dict) -> dict:
        out = {}
        for k, c in a.items():
            for kk, cc in self.antipode_key(k).items():
                _add(out, kk, c * cc)
        return out

    def iterate(self, a: dict, n: int) -> dict:
        """Delta^n a as a dict keyed by (n+1)-tuples of basis keys."""
        cur = {(k,): Fraction(c) for k, c in a.items()}
        for _ in range(n):
            nxt = {}
            for ks, c in cur.items():
                for (k1, k2), cc in self.coproduct_key(ks[-1]).items():
                    _add(nxt, ks[:-1] + (k1, k2), c * cc)
            cur = nxt
        return cur

    def project_plus(self, a: dict) -> dict:
        """h - eps(h) 1, the projection onto the augmentation ideal."""
        e = self.counit(a)
        out = dict(a)
        if e:
            for k, c in self.unit().items():
                _add(out, k, -e * c)
        return out

    def element_str(self, a: dict) -> str:
        if not a:
            return "0"
        return " + ".join(f"{c}*{self.key_str(k)}" for k, c in sorted(a.items()))

    # -- axioms --------------------------------------------------------
    def validate(self) -> list[str]:
        """Return a list of violated Hopf axioms on the sample basis (empty when valid)."""
        errors = []
        keys = self.sample_keys()
        unit = self.unit()
        for k in keys:
            h = {k: Fraction(1)}
            d = self.coproduct(h)
            left = {}
            right = {}
            for (a, b), c in d.items():
                for (a1, a2), c1 in self.coproduct_key(a).items():
                    _add(left, (a1, a2, b), c * c1)
                for (b1, b2), c2 in self.coproduct_key(b).items():
                    _add(right, (a, b1, b2), c * c2)
            if left != right:
                errors.append(f"coassociativity fails on {self.key_str(k)}")
            cl, cr = {}, {}
            sl, sr = {}, {}
            for (a, b), c in d.items():
                _add(cl, b, c * self.counit_key(a))
                _add(cr, a, c * self.counit_key(b))
                for kk, cc in self.mul(self.antipode_key(a), {b: Fraction(1)}).items():
                    _add(sl, kk, c * cc)
                for kk, cc in self.mul({a: Fraction(1)}, self.antipode_key(b)).items():
                    _add(sr, kk, c * cc)
            if cl != h or cr != h:
                errors.append(f"counit law fails on {self.key_str(k)}")
            eps = self.counit_key(k)
            target = {kk: eps * cc for kk, cc in unit.items() if eps * cc}
            if sl != target or sr != target:
                errors.append(f"antipode law fails on {self.key_str(k)}")
        for a, b in itertools.product(keys, repeat=2):
            lhs = self.coproduct(self.mul_keys(a, b))
            da, db = self.coproduct_key(a), self.coproduct_key(b)
            rhs = {}
            for (a1, a2), c1 in da.items():
                for (b1, b2), c2 in db.items():
                    for k1, x in self.mul_keys(a1, b1).items():
                        for k2, y in self.mul_keys(a2, b2).items():
                            _add(rhs, (k1, k2), c1 * c2 * x * y)
            if lhs != rhs:
                errors.append(f"coproduct not multiplicative on {self.key_str(a)}, {self.key_str(b)}")
        return errors


class FiniteGroupHopf(HopfAlgebra):
    """Functions on a finite group, basis of point indicators e_g."""

    kind = "finite-group"

    def __init__(self, elements: list[str], table: dict):
        self.elements = list(elements)
        if len(set(self.elements)) != len(self.elements):
            raise HopfError("repeated group element")
        self.table = dict(table)
        els = self.elements
        for g in els:
            for h in els:
                if (g, h) not in self.table or self.table[g, h] not in els:
                    raise HopfError(f"group table incomplete at ({g}, {h})")
        ids = [e for e in els if all(self.table[e, g] == g and self.table[g, e] == g for g in els)]
        if not ids:
            raise HopfError("group table has no identity")
        self.identity = ids[0]
        for g, h, k in itertools.product(els, repeat=3):
            if self.table[self.table[g, h], k] != self.table[g, self.table[h, k]]:
                raise HopfError(f"non-associative table at ({g}, {h}, {k})")
        self.inv = {}
        for g in els:
            cands = [h for h in els if self.table[g, h] == self.identity]
            if not cands or self.table[cands[0], g] != self.identity:
                raise HopfError(f"missing inverse for {g}")
            self.inv[g] = cands[0]
        self._coproduct = {g: {} for g in els}
        for a, b in itertools.product(els, repeat=2):
            self._coproduct[self.table[a, b]][(a, b)] = Fraction(1)

    @property
    def order(self) -> int:
        return len(self.elements)

    def unit(self):
        return {g: Fraction(1) for g in self.elements}

    def mul_keys(self, a, b):
        return {a: Fraction(1)} if a == b else {}

    def counit_key(self, k):
        return Fraction(1 if k == self.identity else 0)

    def coproduct_key(self, k):
        return self._coproduct[k]

    def antipode_key(self, k):
        return {self.inv[k]: Fraction(1)}

    def algebra_generators(self):
        return list(self.elements)

    def derivation_value(self, values, k):
        return Fraction(values.get(k, 0))

    def inverse(self, h):
        if any(not h.get(g) for g in self.elements):
            raise HopfError("function vanishes somewhere, not invertible")
        return {g: 1 / Fraction(h[g]) for g in self.elements}

    def sample_keys(self):
        return list(self.elements)

    def plus_basis(self) -> list:
        """Basis e_g, g != identity, of the augmentation ideal."""
        return [g for g in self.elements if g != self.identity]

    def key_str(self, k):
        return f"e_{k}"


def cyclic_group(n: int, names: list[str] | None = None) -> FiniteGroupHopf:
    if n < 1:
        raise HopfError("cyclic group order must be positive")
    if names is None:
        names = ["e"] + [f"g{i}" for i in range(1, n)]
    if len(names) != n:
        raise HopfError("wrong number of element names")
    table = {(names[i], names[j]): names[(i + j) % n] for i in range(n) for j in range(n)}
    return FiniteGroupHopf(names, table)


class TorusHopf(HopfAlgebra):
    """Laurent polynomials Q[t_1^+-1, ..., t_r^+-1] with every t_a grouplike."""

    kind = "torus"

    def __init__(self, names: Iterable[str]):
        self.coordinates = tuple(names)
        self.rank = len(self.coordinates)
        if self.rank < 1:
            raise HopfError("torus rank must be at least 1")
        self.zero_key = (0,) * self.rank
        if self.rank == 1:
            self.kind = "multiplicative"

    def _e(self, a, s=1):
        k = [0] * self.rank
        k[a] = s
        return tuple(k)

    def unit(self):
        return {self.zero_key: Fraction(1)}

    def mul_keys(self, a, b):
        return {tuple(x + y for x, y in zip(a, b)): Fraction(1)}

    def counit_key(self, k):
        return Fraction(1)

    def coproduct_key(self, k):
        return {(k, k): Fraction(1)}

    def antipode_key(self, k):
        return {tuple(-x for x in k): Fraction(1)}

    def algebra_generators(self):
        out = []
        for a in range(self.rank):
            out += [self._e(a), self._e(a, -1)]
        return out

    def derivation_value(self, values, k):
        total = Fraction(0)
        for a, n in enumerate(k):
            if n > 0:
                total += n * values.get(self._e(a), 0)
            elif n < 0:
                total += -n * values.get(self._e(a, -1), 0)
        return total

    def partial(self, k, a):
        n = k[a]
        if not n:
            return {}
        kk = list(k)
        kk[a] -= 1
        return {tuple(kk): Fraction(n)}

    def inverse(self, h):
        if len(h) != 1:
            raise HopfError("only monomials are invertible in a Laurent ring")
        (k, c), = h.items()
        return {tuple(-x for x in k): 1 / Fraction(c)}

    def sample_keys(self):
        rng = range(-2, 3)
        return [k for k in itertools.product(rng, repeat=self.rank) if sum(map(abs, k)) <= 2]

    def key_str(self, k):
        parts = []
        for name, n in zip(self.coordinates, k):
            if n == 1:
                parts.append(name)
            elif n:
                parts.append(f"{name}^{n}")
        return "*".join(parts) if parts else "1"


class AdditiveHopf(HopfAlgebra):
    """Polynomials Q[t] with t primitive (the additive group)."""

    kind = "additive"

    def __init__(self, name: str = "t"):
        self.coordinates = (name,)

    def unit(self):
        return {(0,): Fraction(1)}

    def mul_keys(self, a, b):
        return {(a[0] + b[0],): Fraction(1)}

    def counit_key(self, k):
        return Fraction(1 if k[0] == 0 else 0)

    def coproduct_key(self, k):
        n = k[0]
        return {((i,), (n - i,)): Fraction(comb(n, i)) for i in range(n + 1)}

    def antipode_key(self, k):
        return {k: Fraction(-1 if k[0] % 2 else 1)}

    def algebra_generators(self):
        return [(1,)]

    def derivation_value(self, values, k):
        return Fraction(values.get((1,), 0)) if k[0] == 1 else Fraction(0)

    def partial(self, k, a):
        n = k[0]
        return {(n - 1,): Fraction(n)} if n else {}

    def inverse(self, h):
        if len(h) == 1 and (0,) in h:
            return {(0,): 1 / Fraction(h[(0,)])}
        raise HopfError("only nonzero constants are invertible in Q[t]")

    def sample_keys(self):
        return [(n,) for n in range(4)]

    def key_str(self, k):
        n = k[0]
        name = self.coordinates[0]
        return "1" if n == 0 else (name if n == 1 else f"{name}^{n}")


def build_hopf(kind: str, **data) -> HopfAlgebra:
    """Construct and validate one of the supported Hopf algebras."""
    if kind == "finite-group":
        if "order" in data:
            H = cyclic_group(data["order"], data.get("elements"))
        else:
            H = FiniteGroupHopf(data["elements"], data["table"])
    elif kind in ("torus", "multiplicative"):
        names = data.get("names")
        if names is None:
            rank = data.get("rank", 1)
            names = ["t"] if rank == 1 else [f"t{i + 1}" for i in range(rank)]
        H = TorusHopf(names)
    elif kind == "additive":
        H = AdditiveHopf(data.get("name", "t"))
    else:
        raise HopfError(f"unsupported group class {kind!r}")
    errors = H.validate()
    if errors:
        raise HopfError("; ".join(errors))
    return H


def sweedler_iterate(H: HopfAlgebra, h: dict, n: int) -> dict:
    if n < 0:
        raise ValueError("n must be non-negative")
    return H.iterate(h, n)


# -- tensors B (x) H^(x)m ------------------------------------------------------

class HTensor:
    """Finite sum of pure tensors b (x) h_1 (x) ... (x) h_m (m may vary by term)."""

    __slots__ = ("algebra", "hopf", "terms")

    def __init__(self, algebra: GradedAlgebra, hopf: HopfAlgebra, terms=None):
        self.algebra = algebra
        self.hopf = hopf
        self.terms = {k: Fraction(c) for k, c in (terms or {}).items() if c}

    @classmethod
    def from_element(cls, x: Element, hopf: HopfAlgebra, hparts: dict | None = None):
        """x (x) hparts, where hparts maps key tuples to coefficients (default: empty tuple)."""
        hparts = hparts if hparts is not None else {(): Fraction(1)}
        terms = {}
        for m, c in x.terms.items():
            for hk, d in hparts.items():
                _add(terms, (m, tuple(hk)), c * d)
        return cls(x.algebra, hopf, terms)

    def _new(self, terms):
        return HTensor(self.algebra, self.hopf, terms)

    def __add__(self, other):
        t = dict(self.terms)
        for k, c in other.terms.items():
            _add(t, k, c)
        return self._new(t)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return self._new({k: -c for k, c in self.terms.items()})

    def __rmul__(self, c):
        c = Fraction(c)
        return self._new({k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, HTensor):
            return other * self if False else self.__rmul__(other)
        mul = self.algebra.mul_monomials
        H = self.hopf
        out = {}
        for (z1, h1), c1 in self.terms.items():
            for (z2, h2), c2 in other.terms.items():
                if len(h1) != len(h2):
                    raise ValueError("factorwise product needs equal tensor lengths")
                s, z = mul(z1, z2)
                if not s:
                    continue
                parts = [H.mul_keys(a, b) for a, b in zip(h1, h2)]
                for combo in itertools.product(*[list(p.items()) for p in parts]):
                    c = s * c1 * c2
                    for _, x in combo:
                        c *= x
                    _add(out, (z, tuple(k for k, _ in combo)), c)
        return self._new(out)

    def __eq__(self, other):
        if isinstance(other, HTensor):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def horizontal_degrees(self) -> set[int]:
        return {len(h) for _, h in self.terms}

    def component(self, m: int) -> HTensor:
        return self._new({k: c for k, c in self.terms.items() if len(k[1]) == m})

    def map_vertical(self, fn) -> HTensor:
        """Apply a linear map on B (monomial -> Element) to the first tensor factor."""
        out = {}
        for (z, h), c in self.terms.items():
            for z2, c2 in fn(z).terms.items():
                _add(out, (z2, h), c * c2)
        return self._new(out)

    def coface_delta(self, j: int) -> HTensor:
        """Apply the coproduct to the j-th H factor (1-based)."""
        out = {}
        for (z, h), c in self.terms.items():
            if not 1 <= j <= len(h):
                raise ValueError("coface index out of range")
            for (a, b), cc in self.hopf.coproduct_key(h[j - 1]).items():
                _add(out, (z, h[:j - 1] + (a, b) + h[j:]), c * cc)
        return self._new(out)

    def append_unit(self) -> HTensor:
        out = {}
        unit = self.hopf.unit()
        for (z, h), c in self.terms.items():
            for k, cc in unit.items():
                _add(out, (z, h + (k,)), c * cc)
        return self._new(out)

    def project_plus(self) -> HTensor:
        """Project every H factor to the augmentation ideal."""
        H = self.hopf
        out = {}
        for (z, h), c in self.terms.items():
            parts = [H.project_plus({k: Fraction(1)}) for k in h]
            for combo in itertools.product(*[list(p.items()) for p in parts]):
                cc = c
                for _, x in combo:
                    cc *= x
                _add(out, (z, tuple(k for k, _ in combo)), cc)
        return self._new(out)

    def counit_all(self) -> Element:
        """Collapse every H factor by the counit (evaluation at the identity)."""
        H = self.hopf
        t = {}
        for (z, h), c in self.terms.items():
            e = c
            for k in h:
                e *= H.counit_key(k)
            if e:
                _add(t, z, e)
        return Element(self.algebra, t)

    def __repr__(self):
        return f"HTensor({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (z, h), c in sorted(self.terms.items(), key=lambda kv: (len(kv[0][1]), kv[0])):
            s = self.algebra.monomial_str(z)
            if s == "1":
                s = str(c)
            elif c == -1:
                s = "-" + s
            elif c != 1:
                s = f"{c}*{s}"
            hs = " (x) ".join(self.hopf.key_str(k) for k in h)
            parts.append(s + (f" (x) {hs}" if h else ""))
        return " + ".join(parts).replace("+ -", "- ")


class Coaction:
    """Right H-coaction on a free graded algebra, extended multiplicatively.

    ``images`` maps generator names to HTensors with a single H factor.
    Generators without an image are coinvariant.
    """

    def __init__(self, algebra: GradedAlgebra, hopf: HopfAlgebra, images: dict):
        self.algebra = algebra
        self.hopf = hopf
        self.images = {}
        self._inverse = {}
        for i, g in enumerate(algebra.generators):
            img = images.get(g.name)
            if img is None:
                img = HTensor.from_element(algebra.gen(g.name), hopf,
                                           {(k,): c for k, c in hopf.unit().items()})
            self.images[i] = img
        self._cache = {}

    def _inverse_image(self, i):
        hit = self._inverse.get(i)
        if hit is None:
            g = self.algebra.generators[i]
            mono = self.algebra.gen(g.name).terms
            (gm, _), = mono.items()
            u = {}
            for (z, h), c in self.images[i].terms.items():
                if z != gm:
                    raise HopfError(f"coaction on Laurent variable {g.name!r} is not of the form x (x) u")
                _add(u, h[0], c)
            inv = self.hopf.inverse(u)
            neg = tuple(-e for e in gm)
            hit = self._inverse[i] = HTensor(self.algebra, self.hopf,
                                             {(neg, (k,)): c for k, c in inv.items()})
        return hit

    def on_monomial(self, z) -> HTensor:
        hit = self._cache.get(z)
        if hit is not None:
            return hit
        alg = self.algebra
        unit_h = {(k,): c for k, c in self.hopf.unit().items()}
        out = HTensor.from_element(alg.one(), self.hopf, unit_h)
        for i, e in enumerate(z):
            if e > 0:
                for _ in range(e):
                    out = out * self.images[i]
            elif e < 0:
                inv = self._inverse_image(i)
                for _ in range(-e):
                    out = out * inv
        self._cache[z] = out
        return out

    def apply(self, x: Element) -> HTensor:
        if x.algebra != self.algebra:
            x = self.algebra.embed(x)
        out = {}
        for z, c in x.terms.items():
            for k, cc in self.on_monomial(z).terms.items():
                _add(out, k, c * cc)
        return HTensor(self.algebra, self.hopf, out)

    def coface0(self, T: HTensor) -> HTensor:
        """delta (x) id on B (x) H^(x)m; the new H factor goes first."""
        out = {}
        for (z, h), c in T.terms.items():
            for (z2, h2), cc in self.on_monomial(z).terms.items():
                _add(out, (z2, h2 + h), c * cc)
        return HTensor(T.algebra, T.hopf, out)

    def iterate(self, x: Element, m: int) -> HTensor:
        """delta^m(x) = x_0 (x) x_1 (x) ... (x) x_m."""
        T = HTensor.from_element(x, self.hopf)
        for _ in range(m):
            T = self.coface0(T)
        return T

    def validate(self) -> list[str]:
        errors = []
        for i, g in enumerate(self.algebra.generators):
            img = self.images[i]
            if img.counit_all() != self.algebra.gen(g.name):
                errors.append(f"counit law fails on {g.name}")
            if self.coface0(img) != img.coface_delta(1):
                errors.append(f"coassociativity fails on {g.name}")
            for (z, _), _c in img.terms.items():
                if self.algebra.monomial_degree(z) != g.degree:
                    errors.append(f"coaction on {g.name} does not preserve degree")
                    break
        return errors

    def is_invariant(self, x: Element) -> tuple[bool, HTensor]:
        """Return (ok, delta(x) - x (x) 1)."""
        unit_h = {(k,): c for k, c in self.hopf.unit().items()}
        diff = self.apply(x) - HTensor.from_element(self.algebra.embed(x) if x.algebra != self.algebra else x,
                                                    self.hopf, unit_h)
        return diff.is_zero(), diff

    def preserves_weight(self) -> bool:
        alg = self.algebra
        for i, g in enumerate(alg.generators):
            for (z, _), _c in self.images[i].terms.items():
                if alg.monomial_weight(z) != g.weight:
                    return False
        return True


# -- Lie algebra -----------------------------------------------------------------

@dataclass
class LieAlgebra:
    """g = Der_eps(H, Q), with basis given by values on the algebra generators of H."""

    hopf: HopfAlgebra
    generators: list
    basis: list = field(default_factory=list)
    structure: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def evaluate(self, a: int, h: dict) -> Fraction:
        vals = self.basis[a]
        H = self.hopf
        return sum((c * H.derivation_value(vals, k) for k, c in h.items()), Fraction(0))

    def evaluate_key(self, a: int, k) -> Fraction:
        return self.hopf.derivation_value(self.basis[a], k)

    def bracket_coefficients(self, a: int, b: int) -> dict:
        return self.structure.get((a, b), {})


def lie_algebra(H: HopfAlgebra) -> LieAlgebra:
    """Solve the relative-derivation constraints on the algebra generators of H."""
    gens = H.algebra_generators()
    pos = {k: i for i, k in enumerate(gens)}
    unit_key = H.unit_key()
    rows = []

    def in_span(el):
        return all(k in pos or k == unit_key for k in el)

    for i, g in enumerate(gens):
        for j in range(i, len(gens)):
            h = gens[j]
            prod = H.mul_keys(g, h)
            if not in_span(prod):
                continue
            row = {}
            for k, c in prod.items():
                if k != unit_key:
                    _add(row, pos[k], c)
            _add(row, pos[g], -H.counit_key(h))
            _add(row, pos[h], -H.counit_key(g))
            if row:
                rows.append(row)
    u = H.unit()
    if unit_key is None and all(k in pos for k in u):
        rows.append({pos[k]: c for k, c in u.items()})
    null = nullspace_rref(rows, len(gens))
    basis = [{gens[i]: c for i, c in v.items()} for v in null]
    pivots = [min(v) for v in null]
    lie = LieAlgebra(H, gens, basis)
    for a in range(lie.dim):
        for b in range(lie.dim):
            vals = {}
            for g in gens:
                s = Fraction(0)
                for (k1, k2), c in H.coproduct_key(g).items():
                    s += c * (H.derivation_value(basis[a], k1) * H.derivation_value(basis[b], k2)
                              - H.derivation_value(basis[b], k1) * H.derivation_value(basis[a], k2))
                if s:
                    vals[pos[g]] = s
            coeffs = {c: vals[p] for c, p in enumerate(pivots) if vals.get(p)}
            recon = {}
            for c, x in coeffs.items():
                axpy(recon, x, null[c])
            if recon != vals:
                raise HopfError("bracket of relative derivations left the solution space")
            if coeffs:
                lie.structure[a, b] = coeffs
    return lie


def rho(coaction: Coaction, lie: LieAlgebra, a: int, x: Element) -> Element:
    """rho(xi_a)(x) = x_0 xi_a(x_1)."""
    alg = coaction.algebra
    t = {}
    for (z, h), c in coaction.apply(x).terms.items():
        v = lie.evaluate_key(a, h[0])
        if v:
            _add(t, z, c * v)
    return Element(alg, t)


def dual_representatives(lie: LieAlgebra) -> list[dict]:
    """Elements theta^a of H^+ with xi_b(theta^a) = delta_ab (a basis of g* = H+/H+^2)."""
    H = lie.hopf
    d = lie.dim
    if d == 0:
        return []
    cands = [H.project_plus({g: Fraction(1)}) for g in lie.generators]
    cols = [[lie.evaluate(b, c) for b in range(d)] for c in cands]
    chosen = []
    rows_so_far = []
    for j, col in enumerate(cols):
        trial = rows_so_far + [col]
        if _rank_dense(trial) > len(rows_so_far):
            rows_so_far = trial
            chosen.append(j)
        if len(chosen) == d:
            break
    # matrix E[b][k] = xi_b(cand_k) restricted to chosen candidates
    E = [[cols[j][b] for j in chosen] for b in range(d)]
    reps = []
    for a in range(d):
        coeff = solve_square(E, [Fraction(1 if b == a else 0) for b in range(d)])
        rep = {}
        for c, j in zip(coeff, chosen):
            for k, x in cands[j].items():
                _add(rep, k, c * x)
        reps.append(rep)
    return reps


def _rank_dense(vectors) -> int:
    from .linalg import rank
    return rank([{i: x for i, x in enumerate(v) if x} for v in vectors])


def adjoint_coaction(lie: LieAlgebra) -> list[list[dict]]:
    """Matrix C with delta(theta^a) = sum_b theta^b (x) C[b][a] for the coadjoint coaction on g*.

    Induced from h -> h_2 (x) S(h_1) h_3 on H, read modulo H+^2 through the
    Lie basis.
    """
    H = lie.hopf
    d = lie.dim
    reps = dual_representatives(lie)
    C = [[{} for _ in range(d)] for _ in range(d)]
    for a, rep in enumerate(reps):
        for (h1, h2, h3), c in H.iterate(rep, 2).items():
            tail = H.mul(H.antipode_key(h1), {h3: Fraction(1)})
            for b in range(d):
                v = lie.evaluate_key(b, h2)
                if v:
                    for k, x in tail.items():
                        _add(C[b][a], k, c * v * x)
    return C


def dual_coaction_matrix(H: HopfAlgebra, M: list[list[dict]]) -> list[list[dict]]:
    """Given delta(e^i) = sum_j e^j (x) M[j][i], the dual comodule has N[l][k] = S(M[k][l])."""
    n = len(M)
    return [[H.antipode(M[k][l]) for k in range(n)] for l in range(n)]
