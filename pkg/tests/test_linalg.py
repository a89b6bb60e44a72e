from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from gpt_entropy.linalg import IncrementalBasis, nullspace, particular_solution, rank, rref, solve_unique

small_ints = st.integers(-4, 4)
matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c),
                                                           min_size=r, max_size=r)))


def _as_float(a):
    return np.array([[float(x) for x in row] for row in a]) if a else np.zeros((0, 0))


def test_rref_example():
    r, piv = rref([[2, 4, 2], [1, 2, 3]])
    assert piv == [0, 2]
    assert r == [[1, 2, 0], [0, 0, 1]]


@given(matrices)
def test_rank_matches_numpy(a):
    assert rank(a) == np.linalg.matrix_rank(_as_float(a))


@given(matrices)
def test_nullspace_is_annihilated_and_complete(a):
    n_cols = len(a[0])
    ns = nullspace(a, n_cols)
    for v in ns:
        assert all(sum(Fraction(x) * y for x, y in zip(row, v)) == 0 for row in a)
    assert len(ns) == n_cols - rank(a)


@given(matrices, st.lists(small_ints, min_size=4, max_size=4))
def test_solvers_agree_with_definition(a, x):
    x = x[: len(a[0])]
    b = [sum(Fraction(p) * q for p, q in zip(row, x)) for row in a]
    part = particular_solution(a, b)
    assert part is not None
    assert [sum(Fraction(p) * q for p, q in zip(row, part)) for row in a] == b
    unique = solve_unique(a, b)
    if rank(a) == len(a[0]):
        assert unique == [Fraction(v) for v in x]
    else:
        assert unique is None


def test_inconsistent_system():
    assert particular_solution([[1, 1], [1, 1]], [Fraction(0), Fraction(1)]) is None


def test_incremental_basis():
    basis = IncrementalBasis(3)
    assert basis.try_add([1, 0, 0])
    assert basis.try_add([0, 1, 0])
    assert not basis.try_add([2, 3, 0])
    assert len(basis) == 2
    basis.pop()
    assert basis.try_add([1, 1, 0])
    assert basis.try_add([0, 0, 5])
    assert len(basis) == 3
