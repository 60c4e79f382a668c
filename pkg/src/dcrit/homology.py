"""Block-wise cohomology of weight-graded complexes over Q.

A complex exposes ``words(k, w)`` (an ordered basis of the (degree, weight)
block), ``complete(k, w)`` (a completeness flag) and ``apply_d(word)`` (a sparse image).
Blocks are assembled as sparse column matrices and reduced exactly.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .algebra import Derivation, GradedAlgebra
from .linalg import EchelonBasis, column_reduce

JOBS_ENV = "DCRIT_JOBS"
DEFAULT_MAX_BLOCK = 50000


class ExactModeError(ValueError):
    pass


@dataclass(frozen=True)
class Caps:
    """Truncation caps: total exponent of degree-0 generators, number of other factors."""

    poly: int
    word: int

    def bump(self) -> Caps:
        return Caps(self.poly + 1, self.word + 1)


class WordEnumerator:
    """Normal-form monomials of a free graded algebra, grouped by (degree, weight)."""

    def __init__(self, algebra: GradedAlgebra, caps: Caps | None = None):
        self.algebra = algebra
        self.caps = caps
        self._by_weight = {}
        self._all = None
        if caps is None:
            for g in algebra.generators:
                if g.laurent:
                    raise ExactModeError(f"exact mode cannot enumerate Laurent variable {g.name}")
                if g.weight < 0 or (g.weight == 0 and not g.odd):
                    raise ExactModeError(
                        f"exact mode needs positive weight on {g.name} (weight {g.weight});"
                        " use truncated mode with caps")

    @property
    def exact(self) -> bool:
        return self.caps is None

    def _weight_table(self, w: int) -> dict:
        hit = self._by_weight.get(w)
        if hit is not None:
            return hit
        gens = self.algebra.generators
        n = len(gens)
        table = {}
        cur = [0] * n

        def rec(i, rem):
            if i == n:
                if rem == 0:
                    m = tuple(cur)
                    table.setdefault(self.algebra.monomial_degree(m), []).append(m)
                return
            g = gens[i]
            top = 1 if g.odd else (rem // g.weight if g.weight else 0)
            for e in range(0, top + 1):
                if e * g.weight > rem:
                    break
                cur[i] = e
                rec(i + 1, rem - e * g.weight)
            cur[i] = 0

        if w >= 0:
            rec(0, w)
        for v in table.values():
            v.sort()
        self._by_weight[w] = table
        return table

    def _capped(self, caps: Caps) -> dict:
        gens = self.algebra.generators
        n = len(gens)
        table = {}
        cur = [0] * n

        def rec(i, poly, word):
            if i == n:
                m = tuple(cur)
                key = (self.algebra.monomial_degree(m), self.algebra.monomial_weight(m))
                table.setdefault(key, []).append(m)
                return
            g = gens[i]
            if g.degree == 0 and not g.odd:
                lo = -(caps.poly - poly) if g.laurent else 0
                rng = range(lo, caps.poly - poly + 1)
                for e in rng:
                    cur[i] = e
                    rec(i + 1, poly + abs(e), word)
            else:
                top = 1 if g.odd else caps.word - word
                for e in range(0, min(top, caps.word - word) + 1):
                    cur[i] = e
                    rec(i + 1, poly, word + e)
            cur[i] = 0

        rec(0, 0, 0)
        for v in table.values():
            v.sort()
        return table

    def monomials(self, k: int, w: int) -> list:
        if self.caps is None:
            return self._weight_table(w).get(k, [])
        if self._all is None:
            self._all = self._capped(self.caps)
        return self._all.get((k, w), [])

    def degrees(self, w: int) -> list[int]:
        if self.caps is None:
            return sorted(self._weight_table(w))
        if self._all is None:
            self._all = self._capped(self.caps)
        return sorted({k for k, ww in self._all if ww == w})

    def complete(self, k: int, w: int) -> bool:
        """In truncated mode: raising the caps by one adds no words to the block."""
        if self.caps is None:
            return True
        bigger = WordEnumerator(self.algebra, self.caps.bump())
        return len(bigger.monomials(k, w)) == len(self.monomials(k, w))


def enumerate_basis(algebra: GradedAlgebra, k: int, w: int, caps: Caps | None = None) -> list:
    return WordEnumerator(algebra, caps).monomials(k, w)


class DgaComplex:
    """A free dg-algebra viewed as a complex; the words are its monomials."""

    def __init__(self, name: str, algebra: GradedAlgebra, d: Derivation, caps: Caps | None = None):
        self.name = name
        self.algebra = algebra
        self.d = d
        self.enum = WordEnumerator(algebra, caps)

    @property
    def exact(self):
        return self.enum.exact

    def words(self, k, w):
        return self.enum.monomials(k, w)

    def complete(self, k, w):
        return self.enum.complete(k, w)

    def degrees(self, w):
        return self.enum.degrees(w)

    def apply_d(self, word) -> dict:
        return self.d.on_monomial(word).terms

    def word_str(self, word) -> str:
        return self.algebra.monomial_str(word)


@dataclass
class BlockResult:
    degree: int
    weight: int
    dim: int
    rank_in: int
    rank_out: int
    betti: int
    representatives: list | None = None
    flags: list = field(default_factory=list)


@dataclass
class BettiReport:
    complex: str
    mode: str
    degrees: tuple
    weights: tuple
    blocks: list = field(default_factory=list)
    omissions: list = field(default_factory=list)
    caps: Caps | None = None

    def block(self, k: int, w: int) -> BlockResult | None:
        for b in self.blocks:
            if b.degree == k and b.weight == w:
                return b
        return None

    def totals(self) -> dict:
        out = {k: 0 for k in range(self.degrees[0], self.degrees[1] + 1)}
        for b in self.blocks:
            out[b.degree] += b.betti
        return out

    def betti_vector(self) -> list[int]:
        t = self.totals()
        return [t[k] for k in sorted(t)]


class BlockError(ValueError):
    pass


def _matrix(cx, src: list, tgt: list) -> list[dict]:
    index = {wd: i for i, wd in enumerate(tgt)}
    cols = []
    for wd in src:
        col = {}
        for t, c in cx.apply_d(wd).items():
            j = index.get(t)
            if j is None:
                raise KeyError(t)
            col[j] = c
        cols.append(col)
    return cols


def assemble(cx, k: int, w: int):
    """Bases and the incoming/outgoing matrices of block (k, w); asserts d_out d_in = 0.

    Returns (basis, d_in columns, d_out columns, escaped) where ``escaped`` is
    True when some differential left the enumerated neighbour blocks.
    """
    prev, cur, nxt = cx.words(k - 1, w), cx.words(k, w), cx.words(k + 1, w)
    escaped = False
    try:
        d_in = _matrix(cx, prev, cur)
    except KeyError:
        escaped = True
        d_in = _restricted(cx, prev, cur)
    try:
        d_out = _matrix(cx, cur, nxt)
    except KeyError:
        escaped = True
        d_out = _restricted(cx, cur, nxt)
    for col in d_in:
        acc = {}
        for i, c in col.items():
            for j, x in d_out[i].items():
                acc[j] = acc.get(j, 0) + c * x
        if any(acc.values()) and not escaped:
            raise BlockError(f"d_out * d_in != 0 in block ({k}, {w})")
    return cur, d_in, d_out, escaped


def _restricted(cx, src, tgt):
    """Differential matrix with terms outside the target basis dropped (truncated mode)."""
    index = {wd: i for i, wd in enumerate(tgt)}
    return [{index[t]: c for t, c in cx.apply_d(wd).items() if t in index} for wd in src]


def compute_block(cx, k: int, w: int, reps: bool = False, max_block: int = DEFAULT_MAX_BLOCK):
    sizes = [len(cx.words(j, w)) for j in (k - 1, k, k + 1)]
    if max(sizes) > max_block:
        return None, {"degree": k, "weight": w, "reason": f"block size {max(sizes)} exceeds cap {max_block}"}
    basis, d_in, d_out, escaped = assemble(cx, k, w)
    rank_out, kernel = column_reduce(d_out)
    image = EchelonBasis()
    for col in d_in:
        image.add(col)
    rank_in = len(image)
    betti = len(basis) - rank_out - rank_in
    flags = []
    if not cx.exact:
        if escaped or not all(cx.complete(j, w) for j in (k - 1, k, k + 1)):
            flags.append("unverified boundary")
    result = BlockResult(k, w, len(basis), rank_in, rank_out, betti, flags=flags)
    if reps:
        found = []
        for v in kernel:
            if image.add(v):
                found.append(v)
        result.representatives = [_vector_str(cx, basis, v) for v in found]
    if betti < 0:
        raise BlockError(f"negative Betti number in block ({k}, {w})")
    return result, None


def cohomology_data(cx, k: int, w: int):
    """(basis, representative kernel vectors, echelon basis of image + representatives)."""
    basis, d_in, d_out, _ = assemble(cx, k, w)
    _, kernel = column_reduce(d_out)
    image = EchelonBasis()
    for col in d_in:
        image.add(col)
    span = EchelonBasis()
    span.rows = dict(image.rows)
    span.tags = dict(image.tags)
    reps = [v for v in kernel if span.add(v)]
    return basis, reps, image


def _vector_str(cx, basis, v) -> list:
    return [[cx.word_str(basis[i]), _q(c)] for i, c in sorted(v.items())]


def _q(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _weight_task(args):
    cx, ks, w, reps, max_block = args
    out, omitted = [], []
    for k in ks:
        r, om = compute_block(cx, k, w, reps, max_block)
        if r is not None:
            out.append(r)
        else:
            omitted.append(om)
    return out, omitted


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(JOBS_ENV, "1")))
    except ValueError:
        return 1


def betti(cx, degrees: tuple[int, int], weights: tuple[int, int], reps: bool = False,
          jobs: int | None = None, max_block: int = DEFAULT_MAX_BLOCK) -> BettiReport:
    """Betti numbers of every block (k, w) in the given inclusive ranges."""
    ks = list(range(degrees[0], degrees[1] + 1))
    ws = list(range(weights[0], weights[1] + 1))
    jobs = jobs or default_jobs()
    tasks = [(cx, ks, w, reps, max_block) for w in ws]
    if jobs > 1 and len(ws) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(ws))) as pool:
            results = list(pool.map(_weight_task, tasks))
    else:
        results = [_weight_task(t) for t in tasks]
    report = BettiReport(cx.name, "exact" if cx.exact else "truncated", tuple(degrees), tuple(weights),
                         caps=None if cx.exact else cx.enum.caps)
    blocks = []
    for res, om in results:
        blocks += res
        report.omissions += om
    blocks.sort(key=lambda b: (b.degree, b.weight))
    report.blocks = blocks
    report.omissions.sort(key=lambda o: (o["degree"], o["weight"]))
    return report


def euler_characteristic(cx, w: int) -> tuple[int, int]:
    """(sum of (-1)^k dim, sum of (-1)^k betti) over all degrees of weight w (exact mode)."""
    ks = cx.degrees(w)
    if not ks:
        return 0, 0
    chi_dim = sum((-1) ** (k % 2) * len(cx.words(k, w)) for k in ks)
    rep = betti(cx, (ks[0], ks[-1]), (w, w), jobs=1)
    chi_h = sum((-1) ** (b.degree % 2) * b.betti for b in rep.blocks)
    return chi_dim, chi_h


class PermutedComplex:
    """The same complex with every block basis reordered by a seeded shuffle."""

    def __init__(self, cx, seed: int):
        self.cx = cx
        self.name = cx.name
        self._rng = random.Random(seed)
        self._cache = {}

    @property
    def exact(self):
        return self.cx.exact

    @property
    def enum(self):
        return self.cx.enum

    def words(self, k, w):
        hit = self._cache.get((k, w))
        if hit is None:
            hit = list(self.cx.words(k, w))
            self._rng.shuffle(hit)
            self._cache[k, w] = hit
        return hit

    def complete(self, k, w):
        return self.cx.complete(k, w)

    def apply_d(self, word):
        return self.cx.apply_d(word)

    def word_str(self, word):
        return self.cx.word_str(word)


def iter_blocks(report: BettiReport) -> Iterable[BlockResult]:
    return iter(report.blocks)
