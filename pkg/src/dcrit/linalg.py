"""Sparse exact linear algebra over Q.

Vectors are dicts ``index -> Fraction`` with no zero entries.  Elimination
uses the first nonzero index as pivot, so results depend only on the input
order and are reproducible run to run.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

SparseVector = dict


def axpy(y: dict, a, x: dict) -> None:
    """y += a*x in place, dropping cancelled entries."""
    for k, v in x.items():
        s = y.get(k, 0) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class EchelonBasis:
    """Incrementally built row-echelon basis of a subspace.

    Stored rows have distinct pivots; a row's pivot is its smallest index
    and is normalized to 1.  Rows may carry a tag vector recording which
    inserted vectors they combine.
    """

    def __init__(self):
        self.rows = {}
        self.tags = {}

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: dict, tag: dict | None = None):
        v = dict(v)
        tag = dict(tag) if tag is not None else None
        rows = self.rows
        while True:
            hits = [k for k in v if k in rows]
            if not hits:
                break
            p = min(hits)
            c = v[p]
            axpy(v, -c, rows[p])
            if tag is not None:
                axpy(tag, -c, self.tags[p])
        return v, tag

    def add(self, v: dict, tag: dict | None = None) -> bool:
        """Insert v; return False if it was already in the span."""
        r, t = self.reduce(v, tag if tag is not None else {})
        if not r:
            return False
        p = min(r)
        inv = 1 / Fraction(r[p])
        self.rows[p] = {k: x * inv for k, x in r.items()}
        self.tags[p] = {k: x * inv for k, x in t.items()}
        return True

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)[0]

    def coordinates(self, v: dict):
        """Express v (assumed in the span) through the tags; None if outside the span."""
        r, t = self.reduce(v, {})
        if r:
            return None
        return {k: -x for k, x in t.items()}


def column_reduce(columns: Sequence[dict]):
    """Rank and kernel of the map whose j-th column is ``columns[j]``.

    Returns (rank, kernel) with the kernel as a list of sparse vectors in
    the source index space, ordered by the free column that spawned them.
    """
    basis = EchelonBasis()
    kernel = []
    for j, col in enumerate(columns):
        r, t = basis.reduce(col, {j: Fraction(1)})
        if r:
            p = min(r)
            inv = 1 / Fraction(r[p])
            basis.rows[p] = {k: x * inv for k, x in r.items()}
            basis.tags[p] = {k: x * inv for k, x in t.items()}
        else:
            kernel.append(t)
    return len(basis), kernel


def kernel_and_rank(rows: Sequence[Sequence], ncols: int | None = None):
    """Kernel basis and rank of a matrix given as a list of rows (dense or sparse)."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    cols = [dict() for _ in range(ncols)]
    for i, row in enumerate(rows):
        items = row.items() if isinstance(row, dict) else enumerate(row)
        for j, x in items:
            if x:
                cols[j][i] = Fraction(x)
    rank, kernel = column_reduce(cols)
    return kernel, rank


def rank(columns: Iterable[dict]) -> int:
    basis = EchelonBasis()
    for c in columns:
        basis.add(c)
    return len(basis)


def nullspace_rref(rows: Sequence[dict], ncols: int) -> list[dict]:
    """Nullspace of a row system, returned as a reduced row-echelon basis."""
    kernel, _ = kernel_and_rank(rows, ncols)
    return reduced_basis(kernel)


def reduced_basis(vectors: Iterable[dict]) -> list[dict]:
    """Fully reduced row-echelon basis of span(vectors), sorted by pivot."""
    basis = EchelonBasis()
    for v in vectors:
        basis.add(v)
    pivots = sorted(basis.rows)
    rows = {p: dict(basis.rows[p]) for p in pivots}
    for p in reversed(pivots):
        for q in pivots:
            if q < p and p in rows[q]:
                axpy(rows[q], -rows[q][p], rows[p])
    return [rows[p] for p in pivots]


def solve_square(matrix: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan solve of a small nonsingular system."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            raise ZeroDivisionError("singular system")
        a[c], a[p] = a[p], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c]:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


def determinant(matrix: list[list[Fraction]]) -> Fraction:
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c]:
                f = a[r][c] / a[c][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def matmul_sparse(a_cols: Sequence[dict], b_cols: Sequence[dict]) -> list[dict]:
    """Columns of A*B where A, B are given by sparse columns."""
    out = []
    for col in b_cols:
        acc = {}
        for k, x in col.items():
            axpy(acc, x, a_cols[k])
        out.append(acc)
    return out
