"""Free graded-commutative algebras over Q.

Every algebra in the engine (the base ring A, O(Z), O(mu^-1(0)), the BV
algebra and the Kaehler form algebras built over them) is a free
graded-commutative algebra on an ordered list of generators.  A generator
carries a cohomological degree and a form degree; two symbols commute up to
the sign (-1)^(deg*deg' + form*form').  Monomials are stored as exponent
tuples in generator order, so the normal form of a word is unique and the
Koszul sign of reordering is absorbed into the coefficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

KIND_DEGREES = {
    "field": 0,
    "antifield": -1,
    "ghost-antifield": -2,
    "ghost": 1,
}


class ContextError(ValueError):
    """Operands live in different generator contexts."""


class HomogeneityError(ValueError):
    """A derivation assignment is not degree/weight homogeneous."""


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int = 0
    weight: int = 0
    kind: str = "field"
    form: int = 0
    laurent: bool = False

    def __post_init__(self):
        expected = KIND_DEGREES.get(self.kind)
        if expected is not None and self.form == 0 and expected != self.degree:
            raise ValueError(
                f"generator {self.name!r} of kind {self.kind} must have degree {expected}"
            )
        if self.laurent and (self.degree or self.form):
            raise ValueError(f"Laurent generator {self.name!r} must be of degree 0")

    @property
    def parity(self) -> tuple[int, int]:
        return (self.degree % 2, self.form % 2)

    @property
    def odd(self) -> bool:
        """True when the generator anticommutes with itself (so squares to zero)."""
        return (self.degree + self.form) % 2 == 1


def _pair(p, q) -> int:
    return (p[0] * q[0] + p[1] * q[1]) & 1


class GradedAlgebra:
    """Context object: an ordered tuple of generators."""

    def __init__(self, generators: Iterable[Generator]):
        self.generators = tuple(generators)
        self.index = {}
        for i, g in enumerate(self.generators):
            if g.name in self.index:
                raise ValueError(f"duplicate generator {g.name!r}")
            self.index[g.name] = i
        self.n = len(self.generators)
        self._par = [g.parity for g in self.generators]
        self._odd = [g.odd for g in self.generators]
        self.unit_monomial = (0,) * self.n

    def __eq__(self, other):
        return isinstance(other, GradedAlgebra) and self.generators == other.generators

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return f"GradedAlgebra({', '.join(g.name for g in self.generators)})"

    # -- monomials -----------------------------------------------------

    def mul_monomials(self, m1, m2):
        """Return (sign, monomial) for m1*m2; sign 0 means the product vanishes."""
        count = 0
        s0 = s1 = 0
        out = []
        par = self._par
        odd = self._odd
        for i in range(self.n):
            a = m1[i]
            b = m2[i]
            if a:
                p = par[i]
                count += a * ((p[0] * s0 + p[1] * s1) & 1)
            if b:
                p = par[i]
                s0 = (s0 + b * p[0]) & 1
                s1 = (s1 + b * p[1]) & 1
            e = a + b
            if odd[i] and e > 1:
                return 0, None
            out.append(e)
        return (-1 if count & 1 else 1), tuple(out)

    def monomial_parity(self, m) -> tuple[int, int]:
        s0 = s1 = 0
        for e, p in zip(m, self._par):
            if e:
                s0 += e * p[0]
                s1 += e * p[1]
        return (s0 & 1, s1 & 1)

    def monomial_degree(self, m) -> int:
        return sum(e * g.degree for e, g in zip(m, self.generators) if e)

    def monomial_weight(self, m) -> int:
        return sum(e * g.weight for e, g in zip(m, self.generators) if e)

    def monomial_form(self, m) -> int:
        return sum(e * g.form for e, g in zip(m, self.generators) if e)

    def monomial_str(self, m) -> str:
        parts = []
        for e, g in zip(m, self.generators):
            if e == 1:
                parts.append(g.name)
            elif e:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    # -- elements ------------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {self.unit_monomial: Fraction(1)})

    def scalar(self, c) -> Element:
        return Element(self, {self.unit_monomial: Fraction(c)} if c else {})

    def gen(self, name: str, power: int = 1) -> Element:
        i = self.index[name]
        g = self.generators[i]
        if power < 0 and not g.laurent:
            raise ValueError(f"negative power of non-Laurent generator {name!r}")
        if g.odd and power > 1:
            return self.zero()
        m = [0] * self.n
        m[i] = power
        return Element(self, {tuple(m): Fraction(1)})

    def monomial(self, exps: Mapping[str, int]) -> tuple:
        m = [0] * self.n
        for name, e in exps.items():
            m[self.index[name]] = e
        return tuple(m)

    def embed(self, x: Element) -> Element:
        """Map an element of a sub-context into this algebra, matching generators by name."""
        src = x.algebra
        if src == self:
            return x
        pos = []
        for g in src.generators:
            j = self.index.get(g.name)
            if j is None or self.generators[j].parity != g.parity:
                raise ContextError(f"generator {g.name!r} has no counterpart in {self!r}")
            pos.append(j)
        if pos != sorted(pos):
            raise ContextError("embedding must preserve generator order")
        terms = {}
        for m, c in x.terms.items():
            out = [0] * self.n
            for e, j in zip(m, pos):
                out[j] = e
            terms[tuple(out)] = c
        return Element(self, terms)

    def embed_from(self, x: Element) -> Element:
        """Push an element that only involves our generators into this algebra."""
        src = x.algebra
        if src == self:
            return x
        pos = {}
        for i, g in enumerate(src.generators):
            j = self.index.get(g.name)
            if j is not None:
                pos[i] = j
        # reordering odd generators would change signs
        if list(pos.values()) != sorted(pos.values()):
            raise ContextError("embedding must preserve generator order")
        terms = {}
        for m, c in x.terms.items():
            out = [0] * self.n
            for i, e in enumerate(m):
                if e:
                    if i not in pos:
                        raise ContextError(f"{src.generators[i].name!r} not in {self!r}")
                    out[pos[i]] = e
            terms[tuple(out)] = c
        return Element(self, terms)


class Element:
    """Finite Q-linear combination of normal-form monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms=None):
        self.algebra = algebra
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def _check(self, other):
        if not isinstance(other, Element):
            return self.algebra.scalar(other)
        if other.algebra != self.algebra:
            raise ContextError("elements belong to different generator contexts")
        return other

    def __add__(self, other):
        other = self._check(other)
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Element(self.algebra, t)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Element):
            c = Fraction(other)
            return Element(self.algebra, {m: v * c for m, v in self.terms.items()})
        other = self._check(other)
        mul = self.algebra.mul_monomials
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                s, m = mul(m1, m2)
                if s:
                    t[m] = t.get(m, 0) + s * c1 * c2
        return Element(self.algebra, t)

    def __rmul__(self, other):
        c = Fraction(other)
        return Element(self.algebra, {m: v * c for m, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted")
            (m, c), = self.terms.items()
            for e, g in zip(m, self.algebra.generators):
                if e and not g.laurent:
                    raise ValueError("monomial is not invertible")
            inv = Element(self.algebra, {tuple(-e for e in m): 1 / c})
            return inv ** (-n)
        out = self.algebra.one()
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Element):
            if other == 0:
                return not self.terms
            return NotImplemented
        return self.algebra == other.algebra and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def weights(self) -> set[int]:
        return {self.algebra.monomial_weight(m) for m in self.terms}

    @property
    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) != 1:
            raise HomogeneityError(f"element {self} is not of pure degree")
        return ds.pop()

    @property
    def weight(self) -> int:
        ws = self.weights()
        if len(ws) != 1:
            raise HomogeneityError(f"element {self} is not of pure weight")
        return ws.pop()

    def coefficient(self, m) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_terms():
            ms = self.algebra.monomial_str(m)
            if ms == "1":
                out.append(str(c))
            elif c == 1:
                out.append(ms)
            elif c == -1:
                out.append("-" + ms)
            else:
                out.append(f"{c}*{ms}")
        return " + ".join(out).replace("+ -", "- ")


def polynomial_ring(variables: Iterable[tuple[str, int]], laurent: Iterable[str] = ()) -> GradedAlgebra:
    """Polynomial (optionally Laurent) ring on named even variables with integer weights."""
    laurent = set(laurent)
    return GradedAlgebra(
        Generator(name, 0, w, "field", laurent=name in laurent) for name, w in variables
    )


def poly_arith(a: Element, b: Element, op: str) -> Element:
    if a.algebra != b.algebra:
        raise ContextError("mismatched variable contexts")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


class Derivation:
    """Graded derivation determined by its values on generators.

    ``degree``/``form`` is the bidegree of the derivation; it satisfies
    D(ab) = D(a) b + (-1)^<D,a> a D(b) with the bilinear parity pairing of
    the algebra.  Generators absent from ``values`` are sent to zero.
    """

    def __init__(self, algebra: GradedAlgebra, values: Mapping[str, Element], degree: int,
                 form: int = 0, weight: int | None = 0):
        self.algebra = algebra
        self.degree = degree
        self.form = form
        self.parity = (degree % 2, form % 2)
        self.values = {}
        for name, val in values.items():
            i = algebra.index[name]
            if val.algebra != algebra:
                val = algebra.embed(val)
            if val:
                g = algebra.generators[i]
                for m in val.terms:
                    if algebra.monomial_degree(m) != g.degree + degree or \
                            algebra.monomial_form(m) != g.form + form:
                        raise HomogeneityError(
                            f"value on {name!r} has wrong degree for a derivation of degree {degree}"
                        )
                    if weight is not None and algebra.monomial_weight(m) != g.weight + weight:
                        raise HomogeneityError(f"value on {name!r} is not weight homogeneous")
                self.values[i] = val
        self._cache = {}

    def on_monomial(self, m) -> Element:
        hit = self._cache.get(m)
        if hit is not None:
            return hit
        alg = self.algebra
        out = alg.zero()
        dp = self.parity
        prefix = list(alg.unit_monomial)
        for i, e in enumerate(m):
            if not e:
                continue
            dg = self.values.get(i)
            if dg is not None:
                g = alg.generators[i]
                pre = tuple(prefix)
                sign = -1 if _pair(dp, alg.monomial_parity(pre)) else 1
                if g.parity == (0, 0) or not _pair(g.parity, dp):
                    c = e
                else:
                    c = e if (e - 1) % 2 == 0 else -e
                rest = [0] * alg.n
                rest[i] = e - 1
                suffix = [0] * alg.n
                suffix[i + 1:] = m[i + 1:]
                piece = Element(alg, {pre: Fraction(sign * c)}) \
                    * Element(alg, {tuple(rest): Fraction(1)}) * dg \
                    * Element(alg, {tuple(suffix): Fraction(1)})
                out = out + piece
            prefix[i] = e
        self._cache[m] = out
        return out

    def __call__(self, x: Element) -> Element:
        if x.algebra != self.algebra:
            x = self.algebra.embed(x)
        t = {}
        for m, c in x.terms.items():
            for m2, c2 in self.on_monomial(m).terms.items():
                t[m2] = t.get(m2, 0) + c * c2
        return Element(self.algebra, t)

    def value(self, name: str) -> Element:
        return self.values.get(self.algebra.index[name], self.algebra.zero())


def extend_derivation(algebra: GradedAlgebra, values: Mapping[str, Element], deg: int,
                      form: int = 0) -> Derivation:
    return Derivation(algebra, values, deg, form)


def partial_derivative(f: Element, var: str) -> Element:
    alg = f.algebra
    if var not in alg.index:
        raise KeyError(f"unknown variable {var!r}")
    g = alg.generators[alg.index[var]]
    return Derivation(alg, {var: alg.one()}, -g.degree, -g.form, weight=-g.weight)(f)


def left_derivative(f: Element, name: str) -> Element:
    return partial_derivative(f, name)


def right_derivative(f: Element, name: str) -> Element:
    """f d/dg acting from the right: (f g) d/dg = f for odd g."""
    alg = f.algebra
    g = alg.generators[alg.index[name]]
    left = left_derivative(f, name)
    if g.parity == (0, 0):
        return left
    t = {}
    for m, c in left.terms.items():
        # f = (f d/dg) g up to the sign of moving g from the front to the back
        s = -1 if _pair(g.parity, alg.monomial_parity(m)) else 1
        t[m] = s * c
    return Element(alg, t)


# -- Kaehler forms -------------------------------------------------------

def dr_name(name: str) -> str:
    return f"d({name})"


class FormAlgebra(GradedAlgebra):
    """Kaehler forms over a free graded algebra: generators g plus symbols d(g).

    ``extra`` appends further form generators (e.g. de Rham symbols of Hopf
    algebra coordinates); they are placed last in the generator order.
    """

    def __init__(self, base: GradedAlgebra, extra: Iterable[Generator] = ()):
        self.base = base
        gens = list(base.generators)
        gens += [Generator(dr_name(g.name), g.degree, g.weight, "form", form=g.form + 1)
                 for g in base.generators]
        self.extra = tuple(extra)
        gens += list(self.extra)
        super().__init__(gens)
        self.de_rham = Derivation(
            self,
            {g.name: self.gen(dr_name(g.name)) for g in base.generators},
            0, 1,
        )

    def lift(self, x: Element) -> Element:
        return self.embed(x) if x.algebra != self else x


_FORM_CACHE: dict[GradedAlgebra, FormAlgebra] = {}


def forms_over(algebra: GradedAlgebra) -> FormAlgebra:
    fa = _FORM_CACHE.get(algebra)
    if fa is None:
        fa = _FORM_CACHE[algebra] = FormAlgebra(algebra)
    return fa


def de_rham(a: Element) -> Element:
    """Universal de Rham differential; returns an element of the form algebra."""
    alg = a.algebra
    fa = alg if isinstance(alg, FormAlgebra) else forms_over(alg)
    return fa.de_rham(fa.lift(a))
