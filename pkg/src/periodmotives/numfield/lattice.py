"""Integer lattice algorithms: column HNF, SNF, integer kernels, saturation."""

from fractions import Fraction
from math import gcd, lcm

from .linalg import exact_solve, nullspace
from .matrix import DimensionError, Matrix


def _int_rows(M):
    rows = []
    for r in M.rows:
        line = []
        for x in r:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integral entry {x}")
            line.append(int(x))
        rows.append(line)
    return rows


def _col_ops(cols, j, k, a, b, c, d):
    # (col_j, col_k) <- (a*col_j + b*col_k, c*col_j + d*col_k)
    cj, ck = cols[j], cols[k]
    cols[j] = [a * x + b * y for x, y in zip(cj, ck)]
    cols[k] = [c * x + d * y for x, y in zip(cj, ck)]


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_with_transform(M):
    """Column Hermite normal form H = M @ U with U unimodular.

    Pivot rows strictly increase from left to right, pivots are positive, the
    entries left of a pivot in its row lie in [0, pivot), and zero columns are
    collected at the right.  The shape of M is preserved.
    """
    m, n = M.nrows, M.ncols
    rows = _int_rows(M)
    # work with columns of the augmented [M; I] so U is tracked for free
    cols = [[rows[i][j] for i in range(m)] + [int(i == j) for i in range(n)] for j in range(n)]
    k = 0
    for i in range(m):
        if k == n:
            break
        for j in range(k + 1, n):
            if cols[j][i] == 0:
                continue
            a, b = cols[k][i], cols[j][i]
            g, x, y = _xgcd(a, b)
            # [[x, -b/g], [y, a/g]] has determinant 1
            _col_ops(cols, k, j, x, y, -b // g, a // g)
        p = cols[k][i]
        if p == 0:
            continue
        if p < 0:
            cols[k] = [-v for v in cols[k]]
            p = -p
        for j in range(k):
            q = cols[j][i] // p
            if q:
                cols[j] = [u - q * v for u, v in zip(cols[j], cols[k])]
        k += 1
    H = Matrix([[cols[j][i] for j in range(n)] for i in range(m)], m, n)
    U = Matrix([[cols[j][m + i] for j in range(n)] for i in range(n)], n, n)
    return H, U


def hnf(M):
    return hnf_with_transform(M)[0]


def snf(M):
    """Smith normal form: (U, D, V) with U @ M @ V = D diagonal, d_i | d_{i+1}, d_i >= 0."""
    m, n = M.nrows, M.ncols
    A = _int_rows(M)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, k, a, b, c, d):
        for mat in (A, U):
            ri, rk = mat[i], mat[k]
            mat[i] = [a * x + b * y for x, y in zip(ri, rk)]
            mat[k] = [c * x + d * y for x, y in zip(ri, rk)]

    def col_op(j, k, a, b, c, d):
        for mat in (A, V):
            for r in mat:
                x, y = r[j], r[k]
                r[j], r[k] = a * x + b * y, c * x + d * y

    t = 0
    while t < min(m, n):
        nz = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        if pi != t:
            row_op(t, pi, 0, 1, 1, 0)
        if pj != t:
            col_op(t, pj, 0, 1, 1, 0)
        done = False
        while not done:
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    if A[i][t] % A[t][t] == 0:
                        row_op(t, i, 1, 0, -(A[i][t] // A[t][t]), 1)
                    else:
                        g, x, y = _xgcd(A[t][t], A[i][t])
                        a, b = A[t][t] // g, A[i][t] // g
                        row_op(t, i, x, y, -b, a)
            for j in range(t + 1, n):
                if A[t][j]:
                    # plain subtraction keeps the cleared column clear
                    if A[t][j] % A[t][t] == 0:
                        col_op(t, j, 1, 0, -(A[t][j] // A[t][t]), 1)
                    else:
                        g, x, y = _xgcd(A[t][t], A[t][j])
                        a, b = A[t][t] // g, A[t][j] // g
                        col_op(t, j, x, y, -b, a)
                        done = False
            if any(A[i][t] for i in range(t + 1, m)):
                done = False
            if done:
                # divisibility: fold in any entry the pivot does not divide
                p = A[t][t]
                bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
                if bad is not None:
                    row_op(t, bad[0], 1, 1, 0, 1)
                    done = False
        if A[t][t] < 0:
            U[t] = [-x for x in U[t]]
            A[t] = [-x for x in A[t]]
        t += 1
    return Matrix(U, m, m), Matrix(A, m, n), Matrix(V, n, n)


def smith_invariants(M):
    """Nonzero diagonal entries of the Smith form."""
    _, D, _ = snf(M)
    return [D[i, i] for i in range(min(D.shape)) if D[i, i]]


def integer_kernel(A):
    """Z-basis (list of int tuples) of {x in Z^n : A x = 0}."""
    H, U = hnf_with_transform(A)
    return [U.col(j) for j in range(A.ncols) if all(H[i, j] == 0 for i in range(A.nrows))]


def clear_denominators(v):
    v = [Fraction(x) for x in v]
    d = lcm(*(x.denominator for x in v)) if v else 1
    w = [int(x * d) for x in v]
    g = gcd(*w) if w else 0
    return tuple(x // g for x in w) if g else tuple(w)


def saturate(vectors, n=None):
    """The lattice W ∩ Z^n for W the Q-span of the given rational vectors."""
    vectors = [tuple(Fraction(x) for x in v) for v in vectors]
    if n is None:
        if not vectors:
            raise DimensionError("ambient rank needed for an empty spanning set")
        n = len(vectors[0])
    if not vectors:
        return Lattice.zero(n)
    W = Matrix(vectors, len(vectors), n)
    perp = [clear_denominators(v) for v in nullspace(W)]
    if not perp:
        return Lattice.standard(n)
    return Lattice(integer_kernel(Matrix(perp, len(perp), n)), n)


class Lattice:
    """A sublattice of Z^n stored by its canonical column HNF basis."""

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, generators, ambient_rank):
        gens = [tuple(int(x) for x in g) for g in generators]
        if any(len(g) != ambient_rank for g in gens):
            raise DimensionError("generator length differs from the ambient rank")
        self.ambient_rank = ambient_rank
        if not gens:
            self.basis = Matrix([[] for _ in range(ambient_rank)], ambient_rank, 0)
            return
        H = hnf(Matrix.from_columns(gens, ambient_rank))
        keep = [j for j in range(H.ncols) if any(H[i, j] for i in range(ambient_rank))]
        self.basis = H.submatrix(range(ambient_rank), keep)

    @classmethod
    def zero(cls, n):
        return cls([], n)

    @classmethod
    def standard(cls, n):
        return cls([tuple(int(i == j) for i in range(n)) for j in range(n)], n)

    @property
    def rank(self):
        return self.basis.ncols

    def vectors(self):
        return self.basis.columns()

    def contains(self, v):
        v = [Fraction(x) for x in v]
        if len(v) != self.ambient_rank:
            raise DimensionError("vector length differs from the ambient rank")
        if any(x.denominator != 1 for x in v):
            return False
        v = [int(x) for x in v]
        # triangular solve against the HNF pivots
        i = 0
        for j in range(self.rank):
            col = self.basis.col(j)
            while i < self.ambient_rank and col[i] == 0:
                if v[i]:
                    return False
                i += 1
            q, r = divmod(v[i], col[i])
            if r:
                return False
            v = [a - q * b for a, b in zip(v, col)]
            i += 1
        return not any(v)

    def contains_lattice(self, other):
        return all(self.contains(v) for v in other.vectors())

    def is_saturated(self):
        return self == saturate(self.vectors(), self.ambient_rank)

    def saturation(self):
        return saturate(self.vectors(), self.ambient_rank)

    def image(self, A):
        """The lattice A(L) for an integer matrix A with ambient_rank columns."""
        if A.ncols != self.ambient_rank:
            raise DimensionError("matrix does not act on the ambient lattice")
        return Lattice([(A @ Matrix.from_columns([v], self.ambient_rank)).col(0)
                        for v in self.vectors()], A.nrows)

    def __add__(self, other):
        return Lattice(self.vectors() + other.vectors(), self.ambient_rank)

    def index_in_saturation(self):
        """[sat(L) : L], computed from the Smith invariants of L inside its saturation."""
        if self.rank == 0:
            return 1
        sat = self.saturation()
        # coordinates of L's basis in terms of sat's basis
        S = sat.basis
        coords = []
        for v in self.vectors():
            sol = exact_solve(S, Matrix.from_columns([v], self.ambient_rank))
            coords.append([int(x) for x in sol.particular.col(0)])
        d = 1
        for x in smith_invariants(Matrix.from_columns(coords, sat.rank)):
            d *= x
        return d

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.ambient_rank == other.ambient_rank \
            and self.basis == other.basis

    __hash__ = None

    def __repr__(self):
        return f"Lattice(rank={self.rank}, ambient={self.ambient_rank}, basis={[list(v) for v in self.vectors()]})"
