"""Gaussian elimination over any exact field.

The routines work for Fractions, FieldElems and PeriodScalars alike.  An
optional ``pivot_key`` ranks candidate pivots (smaller is preferred), which
keeps symbolic eliminations from picking needlessly complicated entries.
"""

from dataclasses import dataclass
from fractions import Fraction

from .matrix import DimensionError, Matrix


def _is_zero(x):
    return x == 0


def _one_like(x):
    if hasattr(x, "one_like"):
        return x.one_like()
    return x * 0 + 1


def _zero_like(x):
    if hasattr(x, "zero_like"):
        return x.zero_like()
    return x * 0


def rref(A, pivot_key=None):
    """Reduced row echelon form.  Returns (R, pivot_columns)."""
    rows = [list(r) for r in _fractions(A).rows]
    m, n = A.nrows, A.ncols
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        cand = [i for i in range(r, m) if not _is_zero(rows[i][c])]
        if not cand:
            continue
        p = min(cand, key=lambda i: pivot_key(rows[i][c])) if pivot_key else cand[0]
        rows[r], rows[p] = rows[p], rows[r]
        inv = _one_like(rows[r][c]) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(m):
            if i != r and not _is_zero(rows[i][c]):
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return Matrix(rows, m, n), pivots


def _fractions(A):
    return A.map(lambda x: Fraction(x) if isinstance(x, int) else x)


def rank(A, pivot_key=None):
    return len(rref(_fractions(A), pivot_key)[1])


def nullspace(A, pivot_key=None):
    """Basis (list of tuples) of {x : A x = 0}."""
    A = _fractions(A)
    R, pivots = rref(A, pivot_key)
    n = A.ncols
    sample = next((x for r in A.rows for x in r), Fraction(0))
    zero, one = _zero_like(sample), _one_like(sample)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -R[i, f]
        basis.append(tuple(v))
    return basis


@dataclass(frozen=True)
class AffineSolution:
    """Solutions of A X = B: ``particular`` (or None if inconsistent) plus ker(A)."""

    particular: Matrix
    kernel: list

    @property
    def consistent(self):
        return self.particular is not None


def exact_solve(A, B, pivot_key=None):
    if A.nrows != B.nrows:
        raise DimensionError(f"row count mismatch: {A.nrows} vs {B.nrows}")
    A, B = _fractions(A), _fractions(B)
    aug = A.hstack(B)
    R, pivots = rref(aug, pivot_key)
    n, k = A.ncols, B.ncols
    kernel = nullspace(A, pivot_key)
    if any(p >= n for p in pivots):
        return AffineSolution(None, kernel)
    sample = next((x for r in aug.rows for x in r), Fraction(0))
    zero = _zero_like(sample)
    X = [[zero] * k for _ in range(n)]
    for i, p in enumerate(pivots):
        for j in range(k):
            X[p][j] = R[i, n + j]
    return AffineSolution(Matrix(X, n, k), kernel)


def det(A, pivot_key=None):
    if A.nrows != A.ncols:
        raise DimensionError("determinant of a non-square matrix")
    n = A.nrows
    rows = [list(r) for r in _fractions(A).rows]
    if n == 0:
        return Fraction(1)
    result = _one_like(rows[0][0])
    for c in range(n):
        cand = [i for i in range(c, n) if not _is_zero(rows[i][c])]
        if not cand:
            return _zero_like(rows[0][0])
        p = min(cand, key=lambda i: pivot_key(rows[i][c])) if pivot_key else cand[0]
        if p != c:
            rows[c], rows[p] = rows[p], rows[c]
            result = -result
        piv = rows[c][c]
        result = result * piv
        for i in range(c + 1, n):
            if not _is_zero(rows[i][c]):
                f = rows[i][c] / piv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return result


def inverse(A, pivot_key=None):
    if A.nrows != A.ncols:
        raise DimensionError("inverse of a non-square matrix")
    n = A.nrows
    A = _fractions(A)
    sample = next((x for r in A.rows for x in r), Fraction(1))
    ident = Matrix.identity(n, _one_like(sample), _zero_like(sample))
    R, pivots = rref(A.hstack(ident), pivot_key)
    if [p for p in pivots if p < n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return R.submatrix(range(n), range(n, 2 * n))
