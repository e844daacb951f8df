"""Deligne 1-motives [u: L -> G_m^s x A] with split semiabelian target.

Bases are fixed globally so that realizations are reproducible:

* H_Z: torus loops (s), H_1 of the abelian part (2g), one lift per free
  lattice generator (r), using the principal logarithm.
* H_K: Lie of the torus (s), T_dr of the abelian part (2g), L ⊗ G_a (r).

The abelian block of ω is the user's 2g x 2g symbol matrix with rows indexed
by the T_dr basis and columns by the H_1 basis.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .numfield import Lattice, Matrix, exact_solve, integer_kernel, smith_invariants
from .perimod import (
    Filtration,
    PeriodTriple,
    TripleMorphism,
    cartier_dual_triple,
    varsigma,
)
from .periodring import (
    RegistryError,
    PeriodScalar,
    log_decompose,
    monomial_coefficients,
    rational_exponents,
    scalar,
    LOG_UNIT,
)


class MotiveError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianDatum:
    """Formal period data of a split abelian factor of dimension g."""

    genus: int
    period_symbols: tuple  # 2g rows (T_dr basis) x 2g columns (H_1 basis)
    hodge_cols: tuple = None  # indices of T_dr basis vectors spanning V(A)
    relations: tuple = ()

    def __post_init__(self):
        n = 2 * self.genus
        rows = tuple(tuple(r) for r in self.period_symbols)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise MotiveError(f"abelian period matrix must be {n}x{n}")
        object.__setattr__(self, "period_symbols", rows)
        hc = tuple(range(self.genus, n)) if self.hodge_cols is None else tuple(self.hodge_cols)
        if len(hc) != self.genus or len(set(hc)) != self.genus or any(not 0 <= i < n for i in hc):
            raise MotiveError("hodge_cols must pick g distinct T_dr basis vectors")
        object.__setattr__(self, "hodge_cols", hc)


@dataclass(frozen=True)
class OneMotive:
    """[u: L -> G_m^s x A] with L = Z^r ⊕ torsion.

    ``u_torus[i][j]`` is the i-th torus coordinate of u(e_j); lattice
    generators are the r free ones followed by one per torsion factor.
    ``u_abelian[j]`` is None (u lands in the torus) or 2g expressions for the
    logarithm of the abelian component of u(e_j) in the T_dr basis.
    """

    lattice_rank: int
    torus_rank: int = 0
    u_torus: tuple = ()
    lattice_torsion: tuple = ()
    abelian: AbelianDatum = None
    u_abelian: tuple = None
    name: str = None

    def __post_init__(self):
        if self.lattice_rank < 0 or self.torus_rank < 0:
            raise MotiveError("ranks must be nonnegative")
        ngen = self.lattice_rank + len(self.lattice_torsion)
        rows = tuple(tuple(Fraction(x) if not hasattr(x, "field") else x for x in r) for r in self.u_torus)
        if not rows and self.torus_rank:
            rows = tuple((Fraction(1),) * ngen for _ in range(self.torus_rank))
        if len(rows) != self.torus_rank or any(len(r) != ngen for r in rows):
            raise MotiveError(f"u_torus must be a {self.torus_rank}x{ngen} matrix")
        if any(x == 0 for r in rows for x in r):
            raise MotiveError("torus values must be nonzero")
        object.__setattr__(self, "u_torus", rows)
        object.__setattr__(self, "lattice_torsion", tuple(int(t) for t in self.lattice_torsion))
        if any(t < 2 for t in self.lattice_torsion):
            raise MotiveError("torsion orders must be at least 2")
        for j, t in enumerate(self.lattice_torsion):
            for r in rows:
                a = r[self.lattice_rank + j]
                if a not in (1, -1) or (a == -1 and t % 2):
                    raise MotiveError("a torsion generator must map to a root of unity of matching order (±1)")
        if self.u_abelian is not None:
            if self.abelian is None:
                raise MotiveError("u_abelian given without an abelian part")
            ua = tuple(None if x is None else tuple(x) for x in self.u_abelian)
            if len(ua) != ngen:
                raise MotiveError("u_abelian needs one entry per lattice generator")
            if any(x is not None and len(x) != 2 * self.abelian.genus for x in ua):
                raise MotiveError("each abelian point needs 2g logarithm entries")
            if any(ua[self.lattice_rank + j] is not None for j in range(len(self.lattice_torsion))):
                raise MotiveError("torsion generators must map to the torus")
            object.__setattr__(self, "u_abelian", ua)

    @property
    def genus(self):
        return self.abelian.genus if self.abelian else 0

    @property
    def is_free(self):
        return not self.lattice_torsion

    @property
    def is_torus_lattice(self):
        return self.abelian is None

    @property
    def n_generators(self):
        return self.lattice_rank + len(self.lattice_torsion)

    def describe(self):
        parts = [f"Z^{self.lattice_rank}" if self.lattice_rank != 1 else "Z"]
        parts += [f"Z/{t}" for t in self.lattice_torsion]
        lat = " + ".join(p for p in parts if p != "Z^0") or "0"
        tgt = []
        if self.torus_rank:
            tgt.append("G_m" if self.torus_rank == 1 else f"G_m^{self.torus_rank}")
        if self.genus:
            tgt.append(f"A(g={self.genus})")
        return f"[{lat} -> {' x '.join(tgt) or '0'}]"


def lattice_motive(r):
    return OneMotive(r)


def torus_motive(s):
    return OneMotive(0, s)


def kummer_motive(a):
    """[Z -> G_m], 1 |-> a."""
    return OneMotive(1, 1, ((a,),))


# ---------------------------------------------------------------------------
# structure


@dataclass
class WeightData:
    motives: dict  # weight -> OneMotive (W_{-2}, W_{-1}, W_0)
    lattices: Filtration  # induced filtration of T_Z


def _basis_dims(M):
    return M.torus_rank, 2 * M.genus, M.lattice_rank


def _weight_lattices(M):
    s, a, r = _basis_dims(M)
    n = s + a + r

    def first(k):
        return Lattice([tuple(int(i == j) for i in range(n)) for j in range(k)], n)

    return Filtration({-2: first(s), -1: first(s + a), 0: first(n)}, n)


def weight_filtration(M):
    W2 = OneMotive(0, M.torus_rank)
    W1 = OneMotive(0, M.torus_rank, abelian=M.abelian)
    return WeightData({-2: W2, -1: W1, 0: M}, _weight_lattices(M))


def universal_extension_dims(M):
    """(dim V(M), dim T_dr(M))."""
    if not M.is_free:
        raise MotiveError("universal extension needs a free motive; use torsion_parts first")
    return M.genus + M.lattice_rank, M.lattice_rank + M.torus_rank + 2 * M.genus


def _torsion_signs(M):
    # sign bits (value -1) of each torsion generator, one bit per torus coordinate
    r = M.lattice_rank
    return [tuple(int(M.u_torus[i][r + j] == -1) for i in range(M.torus_rank))
            for j in range(len(M.lattice_torsion))]


def _torsion_kernel(M):
    """Generators and invariants of L_tor ∩ ker u as a subgroup of ⊕ Z/t_j."""
    ts = M.lattice_torsion
    k = len(ts)
    if not k:
        return [], ()
    signs = _torsion_signs(M)
    s = M.torus_rank
    # n in Z^k with sum_j n_j sign_ij even for all i, modulo t_j e_j
    rows = [[signs[j][i] for j in range(k)] + [-2 if c == i else 0 for c in range(s)] for i in range(s)]
    if rows:
        sol = integer_kernel(Matrix(rows, s, k + s))
        gens = [tuple(v[:k]) for v in sol]
    else:
        gens = [tuple(int(i == j) for i in range(k)) for j in range(k)]
    L = Lattice(gens + [tuple(t if i == j else 0 for i in range(k)) for j, t in enumerate(ts)], k)
    invs = _quotient_invariants(L, [tuple(t if i == j else 0 for i in range(k)) for j, t in enumerate(ts)])
    return L.vectors(), invs


def _quotient_invariants(L, rel_vectors):
    """Invariants (free rank, torsion) of L / span(rel_vectors), rel_vectors ⊆ L."""
    if L.rank == 0:
        return (0, ())
    B = L.basis
    cols = []
    for v in rel_vectors:
        sol = exact_solve(B, Matrix.from_columns([v], L.ambient_rank))
        if not sol.consistent:
            raise ArithmeticError("relation vector outside the lattice")
        cols.append([int(x) for x in sol.particular.col(0)])
    if not cols:
        return (L.rank, ())
    invs = smith_invariants(Matrix.from_columns(cols, L.rank))
    return (L.rank - len(invs), tuple(d for d in invs if d > 1))


@dataclass
class TorsionParts:
    tor: OneMotive
    fr: OneMotive
    tf: OneMotive
    F: tuple  # invariants of L_tor / (L_tor ∩ ker u)


def _f2_basis(vectors):
    basis = []
    for v in vectors:
        v = list(v)
        for b in basis:
            p = next(i for i, x in enumerate(b) if x)
            if v[p]:
                v = [(x + y) % 2 for x, y in zip(v, b)]
        if any(v):
            basis.append(v)
    return [tuple(b) for b in basis]


def torsion_parts(M):
    if M.abelian is not None and M.lattice_torsion:
        raise MotiveError("torsion parts are implemented for torus-lattice targets")
    r, s = M.lattice_rank, M.torus_rank
    if M.is_free:
        return TorsionParts(OneMotive(0), M, M, ())
    _, kinv = _torsion_kernel(M)
    ker_tors = kinv[1]
    tor = OneMotive(0, 0, (), ker_tors)
    # image of L_tor in μ_2^s, an F_2-vector space
    img = _f2_basis(_torsion_signs(M))
    F = (2,) * len(img)
    free_cols = [tuple(M.u_torus[i][j] for i in range(s)) for j in range(r)]
    tor_cols = [tuple(Fraction(-1) if b[i] else Fraction(1) for i in range(s)) for b in img]
    cols = free_cols + tor_cols
    tf = OneMotive(r, s, tuple(tuple(c[i] for c in cols) for i in range(s)), F, abelian=M.abelian,
                   u_abelian=None if M.u_abelian is None else tuple(M.u_abelian[:r]) + (None,) * len(F))
    # characters of G_m^s killing u(L_tor): chi with chi·b even for each image vector b
    if s:
        rows = [list(b) + [-2 if c == k else 0 for c in range(len(img))] for k, b in enumerate(img)]
        if rows:
            chars = [tuple(v[:s]) for v in integer_kernel(Matrix(rows, len(rows), s + len(img)))]
            X = Lattice(chars, s).vectors()
        else:
            X = [tuple(int(i == j) for i in range(s)) for j in range(s)]
        new_u = []
        for chi in X:
            line = []
            for j in range(r):
                v = Fraction(1)
                for i in range(s):
                    v *= M.u_torus[i][j] ** chi[i]
                line.append(v)
            new_u.append(tuple(line))
        fr = OneMotive(r, s, tuple(new_u), abelian=M.abelian,
                       u_abelian=None if M.u_abelian is None else tuple(M.u_abelian[:r]))
    else:
        fr = OneMotive(r, 0, (), abelian=M.abelian,
                       u_abelian=None if M.u_abelian is None else tuple(M.u_abelian[:r]))
    return TorsionParts(tor, fr, tf, F)


# ---------------------------------------------------------------------------
# realizations


def _needed_symbols(M, registry):
    for row in M.u_torus:
        for a in row:
            log_decompose(a, registry)


def realize_BdR(M, registry):
    """The Betti-de Rham triple (T_Z, T_dr, ϖ) with weight and Hodge filtrations."""
    registry.ensure_frozen()
    if not M.is_free:
        raise MotiveError("realization needs a free motive; realize torsion_parts(M).fr instead")
    s, a, r = _basis_dims(M)
    n = s + a + r
    zero = PeriodScalar.constant(0, registry)
    one = PeriodScalar.constant(1, registry)
    tpi = PeriodScalar.two_pi_i(registry)
    om = [[zero] * n for _ in range(n)]
    for i in range(s):
        om[i][i] = tpi
    if a:
        for i, row in enumerate(M.abelian.period_symbols):
            for j, x in enumerate(row):
                om[s + i][s + j] = scalar(x, registry)
    for j in range(r):
        col = s + a + j
        for i in range(s):
            om[i][col] = log_decompose(M.u_torus[i][j], registry)
        if M.u_abelian is not None and M.u_abelian[j] is not None:
            for i, x in enumerate(M.u_abelian[j]):
                om[s + i][col] = scalar(x, registry)
        om[s + a + j][col] = one
    hodge_idx = ([s + i for i in M.abelian.hodge_cols] if a else []) + list(range(s + a, n))
    hodge = [tuple(int(i == h) for i in range(n)) for h in hodge_idx]
    T = PeriodTriple(registry, Matrix(om, n, n), n, n, weights=_weight_lattices(M), hodge=hodge,
                     label=M.name)
    if not T.iso:
        raise ArithmeticError("realization has a singular period matrix")
    return T


def realize_with_torsion(M, registry):
    """Realize M_fr and record L_tor ∩ ker u as the torsion of H_Z."""
    parts = torsion_parts(M)
    T = realize_BdR(parts.fr, registry)
    return PeriodTriple(registry, T.omega, T.free_rank, T.k_dim, torsion=parts.tor.lattice_torsion,
                        weights=T.weights, hodge=T.hodge, label=M.name)


def _require_torus_lattice(M, what):
    if M.abelian is not None:
        raise MotiveError(f"{what} is implemented for torus-lattice motives only")
    if not M.is_free:
        raise MotiveError(f"{what} needs a free motive")


def cartier_dual_motive(M):
    """[Z^r -A-> G_m^s]* = [Z^s -A^T-> G_m^r]."""
    _require_torus_lattice(M, "cartier_dual_motive")
    r, s = M.lattice_rank, M.torus_rank
    At = tuple(tuple(M.u_torus[i][j] for i in range(s)) for j in range(r))
    name = f"{M.name}*" if M.name else None
    return OneMotive(s, r, At, name=name)


def cartier_identification(M):
    """(φ_Z, φ_K) from cartier_dual_triple(realize(M)) to realize(cartier_dual_motive(M)).

    Both block matrices are [[0, I_r], [-I_s, 0]].
    """
    _require_torus_lattice(M, "cartier_identification")
    r, s = M.lattice_rank, M.torus_rank
    n = r + s
    P = [[0] * n for _ in range(n)]
    for i in range(r):
        P[i][s + i] = 1
    for i in range(s):
        P[r + i][i] = -1
    return Matrix(P, n, n)


def realize_dRB(M, registry):
    """ς of the realization of the Cartier dual (triple-level dual for abelian parts)."""
    if M.abelian is None:
        return varsigma(realize_BdR(cartier_dual_motive(M), registry))
    return varsigma(cartier_dual_triple(realize_BdR(M, registry)))


# ---------------------------------------------------------------------------
# multiplicative linear algebra of the torus values


def exponent_data(a, registry):
    """(sign bit, {coordinate: exponent}) of a torus value; coordinates are primes or unit names."""
    f = registry.field
    a = f(a)
    if f.is_rational_element(a):
        sign, exps = rational_exponents(f.to_rational(a))
        return int(sign < 0), {("p", p): e for p, e in exps.items() if e}
    for sym in registry.of_kind(LOG_UNIT):
        if sym.data == a:
            return 0, {("u", sym.name): 1}
    raise RegistryError(f"{f.format(a)} is not a declared multiplicative generator")


def _coords(values, registry):
    data = [[exponent_data(a, registry) for a in row] for row in values]
    keys = sorted({k for row in data for _, e in row for k in e}, key=str)
    return data, keys


def _project(vectors, idx, n):
    return Lattice([tuple(v[i] for i in idx) for v in vectors], n)


@dataclass
class MotiveHom:
    """Hom(M, N) as a lattice of (F, G) pairs, F row-major then G row-major."""

    source: OneMotive
    target: OneMotive
    lattice: Lattice
    pairs: list
    torsion: tuple = ()
    tag: str = "motive-hom"

    @property
    def rank(self):
        return self.lattice.rank

    def invariants(self):
        return (self.rank, tuple(self.torsion))


def hom_motives(M, N, registry):
    """All (f: L_M -> L_N, g: G_m^s -> G_m^s') with v∘f = g∘u, by exponent linear algebra."""
    _require_torus_lattice(M, "hom_motives")
    _require_torus_lattice(N, "hom_motives")
    r, s = M.lattice_rank, M.torus_rank
    rp, sp = N.lattice_rank, N.torus_rank
    nF, nG = rp * r, sp * s
    da, ka = _coords(M.u_torus, registry)
    db, kb = _coords(N.u_torus, registry)
    keys = sorted(set(ka) | set(kb), key=str)
    # for each (i, j): prod_l b_il^{f_lj} = prod_k a_kj^{g_ik}
    n_aux = sp * r
    nvar = nF + nG + n_aux
    rows = []
    for i in range(sp):
        for j in range(r):
            for key in keys:
                row = [0] * nvar
                for l in range(rp):
                    row[l * r + j] += db[i][l][1].get(key, 0)
                for k in range(s):
                    row[nF + i * s + k] -= da[k][j][1].get(key, 0)
                if any(row):
                    rows.append(row)
            row = [0] * nvar
            for l in range(rp):
                row[l * r + j] += db[i][l][0]
            for k in range(s):
                row[nF + i * s + k] -= da[k][j][0]
            row[nF + nG + i * r + j] = -2
            rows.append(row)
    n = nF + nG
    if n == 0:
        L = Lattice.zero(0)
    elif rows:
        L = _project(integer_kernel(Matrix(rows, len(rows), nvar)), range(n), n)
    else:
        L = Lattice.standard(n)
    pairs = []
    for v in L.vectors():
        F = Matrix([v[l * r:(l + 1) * r] for l in range(rp)], rp, r)
        G = Matrix([v[nF + i * s:nF + (i + 1) * s] for i in range(sp)], sp, s)
        pairs.append((F, G))
    return MotiveHom(M, N, L, pairs)


@dataclass
class KerU:
    lattice: Lattice  # solutions in Z^(free + torsion generators)
    free_rank: int
    torsion: tuple
    tag: str = "ker-u"

    def invariants(self):
        return (self.free_rank, tuple(self.torsion))


def ker_u(M, registry):
    """ker(u: L -> G(K)) via prime-exponent, sign and abelian-coefficient linear algebra."""
    ngen = M.n_generators
    s = M.torus_rank
    data, keys = _coords(M.u_torus, registry)
    g2 = 2 * M.genus
    # variables: n (ngen), sign auxiliaries (s), abelian period multiples (2g)
    nvar = ngen + s + g2
    rows = []
    for i in range(s):
        for key in keys:
            row = [0] * nvar
            for j in range(ngen):
                row[j] = data[i][j][1].get(key, 0)
            if any(row):
                rows.append(row)
        row = [0] * nvar
        for j in range(ngen):
            row[j] = data[i][j][0]
        row[ngen + i] = -2
        rows.append(row)
    if g2 and M.u_abelian is not None and any(x is not None for x in M.u_abelian):
        f = registry.field
        for rho in range(g2):
            entries = []
            for j in range(ngen):
                x = M.u_abelian[j][rho] if M.u_abelian[j] is not None else 0
                entries.append(monomial_coefficients(scalar(x, registry)))
            periods = [monomial_coefficients(scalar(M.abelian.period_symbols[rho][c], registry))
                       for c in range(g2)]
            monos = sorted({m for e in entries + periods for m in e})
            for mono in monos:
                for d in range(f.degree):
                    row = [Fraction(0)] * nvar
                    for j, e in enumerate(entries):
                        if mono in e:
                            row[j] = f.coords(e[mono])[d]
                    for c, e in enumerate(periods):
                        if mono in e:
                            row[ngen + s + c] = f.coords(e[mono])[d]
                    if any(row):
                        rows.append(_integral_row(row))
    if ngen == 0:
        return KerU(Lattice.zero(0), 0, ())
    if rows:
        sol = integer_kernel(Matrix(rows, len(rows), nvar))
        L = _project(sol, range(ngen), ngen)
    else:
        L = Lattice.standard(ngen)
    r = M.lattice_rank
    rels = [tuple(t if i == r + j else 0 for i in range(ngen)) for j, t in enumerate(M.lattice_torsion)]
    free_rank, torsion = _quotient_invariants(L, rels)
    return KerU(L, free_rank, torsion)


def _integral_row(row):
    d = lcm(*(Fraction(x).denominator for x in row))
    return [int(Fraction(x) * d) for x in row]


# ---------------------------------------------------------------------------
# functoriality


def realize_morphism(M, N, F, G, registry, TM=None, TN=None):
    """The triple morphism induced by (f, g) on the chosen bases."""
    _require_torus_lattice(M, "realize_morphism")
    _require_torus_lattice(N, "realize_morphism")
    TM = TM or realize_BdR(M, registry)
    TN = TN or realize_BdR(N, registry)
    r, s = M.lattice_rank, M.torus_rank
    rp, sp = N.lattice_rank, N.torus_rank
    tpi = PeriodScalar.two_pi_i(registry)
    LamM = Matrix([[TM.omega[i, s + j] for j in range(r)] for i in range(s)], s, r)
    LamN = Matrix([[TN.omega[i, sp + j] for j in range(rp)] for i in range(sp)], sp, rp)
    Gs = G.map(lambda x: PeriodScalar.constant(x, registry))
    Fs = F.map(lambda x: PeriodScalar.constant(x, registry))
    if s and r and sp:
        corr = (Gs @ LamM) - (LamN @ Fs)
    else:
        corr = Matrix.zeros(sp, r, PeriodScalar.constant(0, registry))
    Kc = []
    for i in range(sp):
        line = []
        for j in range(r):
            q = corr[i, j] / tpi
            if not q.is_constant() or Fraction(q.constant_value()).denominator != 1:
                raise MotiveError("(f, g) is not a morphism of 1-motives: logarithms differ by a non-period")
            line.append(int(Fraction(q.constant_value())))
        Kc.append(line)
    n, nN = s + r, sp + rp
    phiZ = [[0] * n for _ in range(nN)]
    for i in range(sp):
        for k in range(s):
            phiZ[i][k] = G[i, k]
        for j in range(r):
            phiZ[i][s + j] = Kc[i][j]
    for l in range(rp):
        for j in range(r):
            phiZ[sp + l][s + j] = F[l, j]
    fld = registry.field
    phiK = [[fld(0)] * n for _ in range(nN)]
    for i in range(sp):
        for k in range(s):
            phiK[i][k] = fld(G[i, k])
    for l in range(rp):
        for j in range(r):
            phiK[sp + l][s + j] = fld(F[l, j])
    return TripleMorphism(TM, TN, Matrix(phiZ, nN, n), Matrix(phiK, nN, n))
