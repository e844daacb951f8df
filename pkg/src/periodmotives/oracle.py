"""Brute-force cross-checks for the Hom solvers.

Both checks enumerate every integer matrix with entries in [-B, B] and
compare the set of compatible ones against membership in a solved lattice.

* Triples: the commuting square is tested by evaluating the symbol ring at
  random points modulo a large prime (independent modular inverse of ω).
  The test only errs by accepting; every disagreement is re-checked with
  exact arithmetic before it is reported.
* Motives: the multiplicative condition is separable into (column of f,
  row of g) pairs, which are checked with exact rational powers.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from .numfield import Matrix
from .perimod import HOMOLOGICAL, TripleError, _complete

PRIME = 2147483647  # 2^31 - 1
CHUNK = 200_000


@dataclass
class OracleReport:
    candidates: int
    solutions: int
    lattice_points: int
    mismatches: list = field(default_factory=list)

    @property
    def agrees(self):
        return not self.mismatches


def _enumerate(n, B, start, stop):
    base = 2 * B + 1
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.int64)
    for k in range(n - 1, -1, -1):
        out[:, k] = idx % base - B
        idx //= base
    return out


def lattice_mask(L, X):
    """Vectorized membership of the rows of X in the HNF lattice L."""
    X = X.copy()
    ok = np.ones(len(X), dtype=bool)
    H = L.basis
    for j in range(H.ncols):
        col = np.array(H.col(j), dtype=np.int64)
        p = next(i for i, v in enumerate(H.col(j)) if v)
        piv = int(col[p])
        # rows above the pivot must already be cleared
        ok &= ~np.any(X[:, :p] != 0, axis=1)
        q, r = np.divmod(X[:, p], piv)
        ok &= r == 0
        X -= q[:, None] * col[None, :]
    ok &= ~np.any(X != 0, axis=1)
    return ok


# -- modular evaluation ------------------------------------------------------


def _mod(c, p):
    c = Fraction(c)
    return c.numerator % p * pow(c.denominator % p, -1, p) % p


def _eval_poly(P, point, p):
    acc = 0
    for m, c in P.terms.items():
        t = _mod(c, p)
        for i, e in m:
            t = t * pow(point[i], e, p) % p
        acc = (acc + t) % p
    return acc


def _eval_scalar(s, point, p):
    d = _eval_poly(s.den, point, p)
    if d == 0:
        raise ZeroDivisionError("evaluation point hits a pole")
    return _eval_poly(s.num, point, p) * pow(d, -1, p) % p


def _inv_mod(A, p):
    n = len(A)
    M = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] % p), None)
        if piv is None:
            raise ZeroDivisionError("singular modulo p")
        M[c], M[piv] = M[piv], M[c]
        inv = pow(M[c][c], -1, p)
        M[c] = [x * inv % p for x in M[c]]
        for i in range(n):
            if i != c and M[i][c]:
                f = M[i][c]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[c])]
    return [r[n:] for r in M]


def _eval_matrix(M, point, p):
    return [[_eval_scalar(x, point, p) for x in r] for r in M.rows]


def _coefficient_table(H, G, point, p):
    """C[(k, l), (p, q)] with R(point) = sum_{kl} x_kl C, R = A X B."""
    om_src = _eval_matrix(H.omega, point, p)
    om_tgt = _eval_matrix(G.omega, point, p)
    if H.side == HOMOLOGICAL:
        A, Bm = om_tgt, _inv_mod(om_src, p)
    else:
        A, Bm = _inv_mod(om_tgt, p), om_src
    m, mp = H.free_rank, G.free_rank
    rows, cols = len(A), len(Bm[0])
    C = np.zeros((mp * m, rows * cols), dtype=np.int64)
    for k in range(mp):
        for l in range(m):
            for a in range(rows):
                for b in range(cols):
                    C[k * m + l, a * cols + b] = A[a][k] * Bm[l][b] % p
    return C


def triple_hom_oracle(H, G, hom, B=5, n_points=3, seed=0):
    """Compare hom_group(H, G) with all φ_Z in [-B, B] satisfying the commuting square."""
    reg = H.registry
    if not reg.field.is_rational or reg.rules:
        raise TripleError("the modular oracle handles K = Q without declared relations")
    rng = random.Random(seed)
    tables = []
    while len(tables) < n_points:
        point = [rng.randrange(1, PRIME) for _ in reg.symbols]
        try:
            tables.append(_coefficient_table(H, G, point, PRIME))
        except ZeroDivisionError:
            continue
    m, mp = H.free_rank, G.free_rank
    n = m * mp
    total = (2 * B + 1) ** n
    report = OracleReport(total, 0, 0)
    for start in range(0, total, CHUNK):
        X = _enumerate(n, B, start, min(total, start + CHUNK))
        vals = [(X @ C) % PRIME for C in tables]
        good = np.ones(len(X), dtype=bool)
        for v in vals[1:]:
            good &= np.all(v == vals[0], axis=1)
        in_lat = lattice_mask(hom.lattice, X)
        report.solutions += int(good.sum())
        report.lattice_points += int(in_lat.sum())
        for row in X[good != in_lat]:
            phi = Matrix([[int(row[i * m + j]) for j in range(m)] for i in range(mp)], mp, m)
            mor = _complete(H, G, phi)
            exact = mor is not None and mor.commutes()
            if exact != bool(lattice_mask(hom.lattice, row[None, :])[0]):
                report.mismatches.append(tuple(int(x) for x in row))
            elif not exact:
                report.solutions -= 1  # modular false positive, confirmed exactly
    return report


# -- motives -----------------------------------------------------------------


def _power(a, e):
    return Fraction(a) ** e


def motive_hom_oracle(M, N, hom, B=5):
    """Compare hom_motives(M, N) with all (F, G) in [-B, B] satisfying v∘f = g∘u."""
    r, s = M.lattice_rank, M.torus_rank
    rp, sp = N.lattice_rank, N.torus_rank
    a, b = M.u_torus, N.u_torus
    vals = range(-B, B + 1)
    fcols = list(product(vals, repeat=rp))
    grows = list(product(vals, repeat=s))
    base = 2 * B + 1
    # compat[i][j][fcol index, grow index]
    compat = np.zeros((sp, r, len(fcols), len(grows)), dtype=bool)
    for i in range(sp):
        lhs_pow = [[_power(b[i][l], e) for e in vals] for l in range(rp)]
        for j in range(r):
            rhs_pow = [[_power(a[k][j], e) for e in vals] for k in range(s)]
            lhs = []
            for fc in fcols:
                v = Fraction(1)
                for l, e in enumerate(fc):
                    v *= lhs_pow[l][e + B]
                lhs.append(v)
            rhs = []
            for gr in grows:
                v = Fraction(1)
                for k, e in enumerate(gr):
                    v *= rhs_pow[k][e + B]
                rhs.append(v)
            index = {}
            for gi, v in enumerate(rhs):
                index.setdefault(v, []).append(gi)
            for fi, v in enumerate(lhs):
                for gi in index.get(v, ()):
                    compat[i, j, fi, gi] = True
    nF, nG = rp * r, sp * s
    n = nF + nG
    total = base ** n
    report = OracleReport(total, 0, 0)
    weights_f = base ** np.arange(rp - 1, -1, -1, dtype=np.int64)
    weights_g = base ** np.arange(s - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        X = _enumerate(n, B, start, min(total, start + CHUNK))
        good = np.ones(len(X), dtype=bool)
        for i in range(sp):
            g_idx = (X[:, nF + i * s:nF + (i + 1) * s] + B) @ weights_g if s else np.zeros(len(X), dtype=np.int64)
            for j in range(r):
                cols = [l * r + j for l in range(rp)]
                f_idx = (X[:, cols] + B) @ weights_f if rp else np.zeros(len(X), dtype=np.int64)
                good &= compat[i, j, f_idx, g_idx]
        in_lat = lattice_mask(hom.lattice, X) if n else np.ones(len(X), dtype=bool)
        report.solutions += int(good.sum())
        report.lattice_points += int(in_lat.sum())
        for row in X[good != in_lat]:
            report.mismatches.append(tuple(int(x) for x in row))
    return report
