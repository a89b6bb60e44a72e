"""Exact linear algebra over the rationals.

Small dense routines on lists of :class:`fractions.Fraction`. They are used
for vertex enumeration and for solving decomposition systems, where floating
point pivoting would blur the vertex identities we need.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form. Returns ``(R, pivot_columns)``; ``a`` is untouched."""
    m = to_matrix(a)
    n_rows = len(m)
    n_cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: Matrix) -> int:
    if not a:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, n_cols: int | None = None) -> Matrix:
    """Basis of ``{x : a x = 0}`` as a list of column vectors."""
    if n_cols is None:
        n_cols = len(a[0])
    if not a:
        return [[Fraction(int(i == j)) for i in range(n_cols)] for j in range(n_cols)]
    r, pivots = rref(a)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for row, p in zip(r, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve_unique(a: Matrix, b: Sequence[Fraction]) -> list[Fraction] | None:
    """Solve ``a x = b`` when the solution exists and is unique, else ``None``."""
    n_cols = len(a[0])
    aug = [row[:] + [Fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n_cols in pivots:
        return None  # inconsistent
    if len(pivots) != n_cols:
        return None  # underdetermined
    x = [Fraction(0)] * n_cols
    for row, p in zip(r, pivots):
        x[p] = row[-1]
    return x


def particular_solution(a: Matrix, b: Sequence[Fraction]) -> list[Fraction] | None:
    """Some solution of ``a x = b`` (free variables set to zero), or ``None``."""
    n_cols = len(a[0])
    aug = [row[:] + [Fraction(bi)] for row, bi in zip(a, b)]
    r, pivots = rref(aug)
    if n_cols in pivots:
        return None
    x = [Fraction(0)] * n_cols
    for row, p in zip(r, pivots):
        x[p] = row[-1]
    return x


class IncrementalBasis:
    """Row space built one vector at a time, for DFS over independent subsets.

    ``try_add`` reduces the candidate against the stored echelon rows and
    keeps it only if it is independent. ``pop`` undoes the last successful add.
    """

    def __init__(self, dim: int):
        self.dim = dim
        self._rows: list[tuple[int, list[Fraction]]] = []

    def __len__(self) -> int:
        return len(self._rows)

    def try_add(self, v: Sequence[Fraction]) -> bool:
        w = list(v)
        for p, row in self._rows:
            if w[p] != 0:
                f = w[p]
                w = [x - f * y for x, y in zip(w, row)]
        p = next((i for i, x in enumerate(w) if x != 0), None)
        if p is None:
            return False
        inv = 1 / w[p]
        self._rows.append((p, [x * inv for x in w]))
        return True

    def pop(self) -> None:
        self._rows.pop()
