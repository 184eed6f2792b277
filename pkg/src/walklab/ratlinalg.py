"""Small exact linear algebra toolkit over Fraction.

Gauss-Jordan elimination with full pivoting by column order, used for
nullspaces of drift matrices, canonical subspace forms, and the tree
summability solves. Matrices are lists of lists of Fraction; rows are
copied, inputs never mutated.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[Fraction]]


def _clone(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row-echelon form and pivot column indices."""
    m = _clone(rows)
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        pivot = next((k for k in range(r, n_rows) if m[k][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for k in range(n_rows):
            if k != r and m[k][c] != 0:
                factor = m[k][c]
                m[k] = [a - factor * b for a, b in zip(m[k], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n_cols: int | None = None) -> Matrix:
    """Basis of the right nullspace, one vector per free column."""
    if not rows:
        if n_cols is None:
            raise ValueError("empty matrix needs explicit n_cols")
        return [[Fraction(int(i == j)) for j in range(n_cols)] for i in range(n_cols)]
    n_cols = len(rows[0])
    reduced, pivots = rref(rows)
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced[r][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One solution of A x = b, or None when inconsistent.

    With multiple solutions, free variables are set to zero.
    """
    if not rows:
        return None
    n_cols = len(rows[0])
    augmented = [list(row) + [b] for row, b in zip(rows, rhs)]
    reduced, pivots = rref(augmented)
    if n_cols in pivots:
        return None  # pivot in the constants column: inconsistent
    x = [Fraction(0)] * n_cols
    for r, c in enumerate(pivots):
        x[c] = reduced[r][n_cols]
    return x


def span_canonical(vectors: Sequence[Sequence]) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical form of span(vectors): nonzero rows of the RREF.

    Equal spans give equal canonical forms, so this doubles as a dictionary
    key for subspaces.
    """
    if not vectors:
        return ()
    reduced, pivots = rref(vectors)
    return tuple(tuple(row) for row in reduced[: len(pivots)])


def span_dim(vectors: Sequence[Sequence]) -> int:
    return len(span_canonical(vectors))


def join_dim(*spans: Sequence[Sequence]) -> int:
    """Dimension of the sum of the given (row-spanned) subspaces."""
    stacked = [row for span in spans for row in span]
    return span_dim(stacked)


def in_span(vector: Sequence, span: Sequence[Sequence]) -> bool:
    if all(x == 0 for x in vector):
        return True
    if not span:
        return False
    return span_dim(list(span) + [list(vector)]) == span_dim(span)
