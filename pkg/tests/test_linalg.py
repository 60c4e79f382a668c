import itertools
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dcrit.linalg import (
    EchelonBasis,
    determinant,
    kernel_and_rank,
    nullspace_rref,
    rank,
    solve_square,
)


def leibniz_det(m):
    n = len(m)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        p = Fraction(-1 if inv % 2 else 1)
        for i in range(n):
            p *= m[i][perm[i]]
        total += p
    return total


def matrices(rows, cols):
    entry = st.fractions(min_value=-3, max_value=3, max_denominator=2)
    return st.lists(st.lists(entry, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_small_kernel():
    kernel, r = kernel_and_rank([[1, 2, 3], [2, 4, 6]], 3)
    assert r == 1
    assert len(kernel) == 2
    assert nullspace_rref([{0: 1, 1: 1}], 2) == [{0: Fraction(1), 1: Fraction(-1)}]


def test_echelon_coordinates():
    b = EchelonBasis()
    b.add({0: 1, 1: 1}, {0: 1})
    b.add({1: 1}, {1: 1})
    assert b.contains({0: 2})
    assert b.coordinates({0: 2, 1: 3}) == {0: Fraction(2), 1: Fraction(1)}
    assert b.coordinates({2: 1}) is None


def test_solve_square():
    assert solve_square([[2, 1], [1, 3]], [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 5).flatmap(lambda c: matrices(r, c))))
def test_rank_nullity(m):
    ncols = len(m[0])
    kernel, r = kernel_and_rank(m, ncols)
    assert r + len(kernel) == ncols
    for v in kernel:
        for row in m:
            assert sum(row[j] * x for j, x in v.items()) == 0
    cols = [{i: m[i][j] for i in range(len(m)) if m[i][j]} for j in range(ncols)]
    rows = [{j: x for j, x in enumerate(row) if x} for row in m]
    assert rank(cols) == rank(rows) == r


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: matrices(n, n)))
def test_determinant_matches_expansion(m):
    assert determinant(m) == leibniz_det(m)
