"""Exact linear algebra over the Gaussian rationals (row reduction only)."""
from __future__ import annotations

from .exactnum import ONE, ZERO, as_gaussian

__all__ = [
    "solve", "nullspace", "rank", "mat_zero", "mat_identity", "mat_add", "mat_sub",
    "mat_scale", "mat_mul", "mat_transpose", "mat_trace", "mat_commutator", "as_matrix",
]


def _rref(rows: list, ncols: int):
    """Reduced row echelon form in place; returns pivot columns."""
    pivots = []
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r >= nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        if inv != ONE:
            rows[r] = [x * inv for x in rows[r]]
        prow = rows[r]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return pivots


def solve(A, b, free_values=None):
    """One exact solution of ``A x = b`` or ``None`` when inconsistent.

    Free variables take ``free_values[j]`` when given, otherwise zero.
    """
    A = [[as_gaussian(x) for x in row] for row in A]
    n = len(A[0]) if A else 0
    rows = [row + [as_gaussian(bi)] for row, bi in zip(A, b)]
    pivots = _rref(rows, n)
    for row in rows[len(pivots):]:
        if row[n]:
            return None
    x = [ZERO] * n
    pivset = set(pivots)
    if free_values is not None:
        for j in range(n):
            if j not in pivset:
                x[j] = as_gaussian(free_values[j])
    for i, c in enumerate(pivots):
        acc = rows[i][n]
        for j in range(c + 1, n):
            if j not in pivset and rows[i][j] and x[j]:
                acc = acc - rows[i][j] * x[j]
        x[c] = acc
    return x


def nullspace(A, ncols: int | None = None) -> list:
    """Basis of the right kernel of ``A``."""
    A = [[as_gaussian(x) for x in row] for row in A]
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    rows = [list(r) for r in A]
    pivots = _rref(rows, n)
    pivset = set(pivots)
    basis = []
    for f in range(n):
        if f in pivset:
            continue
        v = [ZERO] * n
        v[f] = ONE
        for i, c in enumerate(pivots):
            v[c] = -rows[i][f]
        basis.append(v)
    return basis


def rank(A) -> int:
    rows = [[as_gaussian(x) for x in row] for row in A]
    return len(_rref(rows, len(rows[0]) if rows else 0))


# small dense matrices as tuples of row tuples

def mat_zero(n: int, m: int | None = None) -> tuple:
    m = n if m is None else m
    return tuple(tuple(ZERO for _ in range(m)) for _ in range(n))


def mat_identity(n: int) -> tuple:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def mat_add(a, b) -> tuple:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a, b) -> tuple:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(a, c) -> tuple:
    c = as_gaussian(c)
    return tuple(tuple(x * c for x in r) for r in a)


def mat_mul(a, b) -> tuple:
    cols = list(zip(*b))
    out = []
    for r in a:
        row = []
        for c in cols:
            acc = ZERO
            for x, y in zip(r, c):
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mat_transpose(a) -> tuple:
    return tuple(zip(*a))


def mat_trace(a):
    acc = ZERO
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def mat_commutator(a, b) -> tuple:
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def as_matrix(rows) -> tuple:
    return tuple(tuple(as_gaussian(x) for x in r) for r in rows)
