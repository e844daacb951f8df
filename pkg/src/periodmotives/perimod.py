"""Period triples (H_Z, H_K, ω), their tensor operations and the exact Hom solver.

A homological triple stores ω as a ``k_dim x free_rank`` matrix sending the
free part of H_Z into H_K ⊗ C.  A cohomological triple (the image of
:func:`varsigma`) stores η = ω⁻¹ as a ``free_rank x k_dim`` matrix going the
other way.  Morphisms are pairs (φ_Z, φ_K) with ω'·φ_Z = φ_K·ω, respectively
η'·φ_K = φ_Z·η.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .numfield import Lattice, Matrix, det, integer_kernel, inverse, nullspace, rank, saturate
from .numfield.lattice import smith_invariants
from .periodring import PeriodScalar, Poly, scalar

HOMOLOGICAL = "homological"
COHOMOLOGICAL = "cohomological"


class TripleError(ValueError):
    pass


def _pivot_key(x):
    return x.complexity() if isinstance(x, PeriodScalar) else (0, 0)


def _smat(rows, registry, nrows, ncols):
    return Matrix([[scalar(x, registry) for x in r] for r in rows], nrows, ncols)


class Filtration:
    """Increasing filtration by sublattices of Z^n, stored at its breakpoints."""

    def __init__(self, steps, n):
        self.n = n
        clean = []
        for w, L in sorted(steps.items()):
            if L.ambient_rank != n:
                raise TripleError("filtration step lives in the wrong ambient lattice")
            if clean and clean[-1][1] == L:
                continue
            if clean and not L.contains_lattice(clean[-1][1]):
                raise TripleError(f"filtration is not increasing at weight {w}")
            clean.append((w, L))
        self.steps = tuple(clean)

    def at(self, w):
        out = Lattice.zero(self.n)
        for v, L in self.steps:
            if v <= w:
                out = L
        return out

    def weights(self):
        return [w for w, _ in self.steps]

    def shift(self, d):
        return Filtration({w + d: L for w, L in self.steps}, self.n)

    def __eq__(self, other):
        return isinstance(other, Filtration) and self.n == other.n and self.steps == other.steps

    __hash__ = None

    def as_dict(self):
        return {w: [list(v) for v in L.vectors()] for w, L in self.steps}

    def __repr__(self):
        return f"Filtration({self.as_dict()})"


def _kron_vec(u, v):
    return tuple(a * b for a in u for b in v)


def _tensor_filtration(F, G):
    if F is None or G is None:
        return None
    n = F.n * G.n
    steps = {}
    for a in F.weights():
        for b in G.weights():
            w = a + b
            gens = []
            for a2 in F.weights():
                for u in F.at(a2).vectors():
                    for v in G.at(w - a2).vectors():
                        gens.append(_kron_vec(u, v))
            steps[w] = saturate(gens, n) if gens else Lattice.zero(n)
    return Filtration(steps, n)


def _annihilator(L):
    n = L.ambient_rank
    if L.rank == 0:
        return Lattice.standard(n)
    return Lattice(integer_kernel(Matrix([list(v) for v in L.vectors()], L.rank, n)), n)


def _dual_filtration(F):
    if F is None:
        return None
    steps = {}
    for b in F.weights():
        steps[-b - 1] = _annihilator(F.at(b))
    steps[-F.weights()[0]] = Lattice.standard(F.n)
    return Filtration(steps, F.n)


class PeriodTriple:
    """An object (H_Z, H_K, ω) with optional weight and Hodge filtrations."""

    def __init__(self, registry, omega, free_rank=None, k_dim=None, torsion=(), weights=None,
                 hodge=None, side=HOMOLOGICAL, require_iso=False, label=None):
        registry.ensure_frozen()
        if side not in (HOMOLOGICAL, COHOMOLOGICAL):
            raise TripleError(f"unknown side {side!r}")
        if not isinstance(omega, Matrix):
            rows = [list(r) for r in omega]
            nr = len(rows)
            nc = len(rows[0]) if rows else (free_rank if side == HOMOLOGICAL else k_dim) or 0
            try:
                omega = _smat(rows, registry, nr, nc)
            except ValueError as exc:
                raise TripleError(f"malformed comparison matrix: {exc}") from None
        else:
            omega = omega.map(lambda x: scalar(x, registry))
        if side == HOMOLOGICAL:
            want = (omega.nrows if k_dim is None else k_dim, omega.ncols if free_rank is None else free_rank)
            k_dim, free_rank = want
        else:
            want = (omega.nrows if free_rank is None else free_rank, omega.ncols if k_dim is None else k_dim)
            free_rank, k_dim = want
        if omega.shape != want:
            raise TripleError(f"comparison matrix has shape {omega.shape}, expected {want}")
        torsion = tuple(int(t) for t in torsion)
        if any(t < 2 for t in torsion):
            raise TripleError("torsion invariant factors must be at least 2")
        self.registry = registry
        self.omega = omega
        self.free_rank = free_rank
        self.k_dim = k_dim
        self.torsion = _canonical_torsion(torsion)
        self.side = side
        self.label = label
        self.iso = free_rank == k_dim and (free_rank == 0 or not det(omega, _pivot_key).is_zero())
        if require_iso and not self.iso:
            raise TripleError("triple was declared an isomorphism but det(ω) normalizes to 0")
        if isinstance(weights, dict):
            weights = Filtration({w: L if isinstance(L, Lattice) else saturate(L, free_rank)
                                  for w, L in weights.items()}, free_rank)
        if weights is not None:
            if weights.n != free_rank:
                raise TripleError("weight filtration does not match the lattice rank")
            for _, L in weights.steps:
                if not L.is_saturated():
                    raise TripleError("weight sublattices must be saturated")
        self.weights = weights
        if hodge is not None:
            hodge = [tuple(registry.field(x) for x in v) for v in hodge]
            if any(len(v) != k_dim for v in hodge) or len(hodge) > k_dim:
                raise TripleError("Hodge subspace basis does not fit H_K")
        self.hodge = hodge

    # -- convenience --------------------------------------------------------

    @property
    def is_free(self):
        return not self.torsion

    def omega_inverse(self):
        if not self.iso:
            raise TripleError("comparison matrix is not invertible")
        if self.free_rank == 0:
            return Matrix([], 0, 0)
        return inverse(self.omega, _pivot_key)

    def same_as(self, other):
        """Equality of stored canonical data (not isomorphism)."""
        return (self.side, self.free_rank, self.k_dim, self.torsion) == \
            (other.side, other.free_rank, other.k_dim, other.torsion) and self.omega == other.omega

    def format_omega(self):
        return [[x.format() for x in r] for r in self.omega.rows]

    def __repr__(self):
        return (f"PeriodTriple({self.side}, rank={self.free_rank}, torsion={list(self.torsion)}, "
                f"k_dim={self.k_dim}, omega={self.format_omega()})")


def _canonical_torsion(ts):
    if not ts:
        return ()
    invs = smith_invariants(Matrix.diagonal(list(ts)))
    return tuple(d for d in invs if d > 1)


def make_triple(registry, omega, **kw):
    return PeriodTriple(registry, omega, **kw)


def tate(r, registry, side=HOMOLOGICAL):
    """Z(r) = (Z, K, (2πi)^r); on the cohomological side its image under ς."""
    # Hodge type (-r, -r): F^0 is everything for r <= 0 and nothing otherwise
    H = PeriodTriple(registry, [[PeriodScalar.two_pi_i(registry, r)]],
                     weights={-2 * r: Lattice.standard(1)}, hodge=[(1,)] if r <= 0 else [],
                     label=f"Z({r})")
    return varsigma(H) if side == COHOMOLOGICAL else H


def _require_free(H, what):
    if H.torsion:
        raise TripleError(f"{what} is not defined for triples with torsion")


def tensor(H, G):
    if H.side != G.side:
        raise TripleError("tensor of triples on different sides")
    _require_free(H, "tensor")
    _require_free(G, "tensor")
    if H.registry is not G.registry:
        raise TripleError("triples from different registries")
    return PeriodTriple(H.registry, H.omega.kron(G.omega), H.free_rank * G.free_rank,
                        H.k_dim * G.k_dim, side=H.side,
                        weights=_tensor_filtration(H.weights, G.weights))


def dual(H):
    """(H_Z^∨, H_K^∨, ω^∨) with matrix the transpose-inverse of ω in dual bases."""
    _require_free(H, "dual")
    if not H.iso:
        raise TripleError("dual needs an invertible comparison matrix")
    return PeriodTriple(H.registry, H.omega_inverse().T, side=H.side,
                        weights=_dual_filtration(H.weights))


def tate_twist(H, r):
    if r == 0:
        return H
    c = PeriodScalar.two_pi_i(H.registry, r if H.side == HOMOLOGICAL else -r)
    # only F^0 is stored and twisting moves it to F^r, so the Hodge data is dropped
    return PeriodTriple(H.registry, H.omega.scale(c), H.free_rank, H.k_dim, torsion=H.torsion,
                        side=H.side, weights=H.weights.shift(-2 * r) if H.weights else None)


def cartier_dual_triple(H):
    """H^* = H^∨(1): comparison matrix 2πi·ω^∨."""
    return tate_twist(dual(H), 1)


def varsigma(H):
    """Homological (H_Z, H_K, ω) -> cohomological (H_K, H_Z, ω⁻¹)."""
    if H.side != HOMOLOGICAL:
        raise TripleError("varsigma expects a homological triple")
    _require_free(H, "varsigma")
    return PeriodTriple(H.registry, H.omega_inverse(), H.free_rank, H.k_dim, side=COHOMOLOGICAL,
                        weights=H.weights, hodge=H.hodge)


def varsigma_inverse(H):
    if H.side != COHOMOLOGICAL:
        raise TripleError("the inverse of varsigma expects a cohomological triple")
    if not H.iso:
        raise TripleError("comparison matrix is not invertible")
    return PeriodTriple(H.registry, H.omega_inverse(), H.free_rank, H.k_dim, side=HOMOLOGICAL,
                        weights=H.weights, hodge=H.hodge)


def circ_dual(H):
    """ς(H^∨): the cohomological triple whose matrix is ω transposed."""
    return varsigma(dual(H))


# ---------------------------------------------------------------------------
# morphisms


@dataclass
class TripleMorphism:
    source: PeriodTriple
    target: PeriodTriple
    phi_Z: Matrix  # integer matrix on the free parts, target rank x source rank
    phi_K: Matrix  # base-field matrix, target k_dim x source k_dim

    def commutes(self):
        S, T = self.source, self.target
        if S.free_rank == 0 or T.free_rank == 0:
            return True
        reg = S.registry
        X = self.phi_Z.map(lambda x: PeriodScalar.constant(x, reg))
        F = self.phi_K.map(lambda x: PeriodScalar.constant(x, reg))
        if S.side == HOMOLOGICAL:
            return T.omega @ X == F @ S.omega
        return T.omega @ F == X @ S.omega

    def compose(self, other):
        """self ∘ other."""
        return TripleMorphism(other.source, self.target, self.phi_Z @ other.phi_Z, self.phi_K @ other.phi_K)


def identity_morphism(H):
    f = H.registry.field
    return TripleMorphism(H, H, Matrix.identity(H.free_rank),
                          Matrix.identity(H.k_dim, f(1), f(0)))


def zero_morphism(H, G):
    f = H.registry.field
    return TripleMorphism(H, G, Matrix.zeros(G.free_rank, H.free_rank),
                          Matrix.zeros(G.k_dim, H.k_dim, f(0)))


@dataclass
class HomLattice:
    """Hom(H, H') as a lattice of φ_Z matrices (row-major vectors) plus finite torsion."""

    source: PeriodTriple
    target: PeriodTriple
    lattice: Lattice
    generators: list
    torsion: tuple = ()
    tag: str = "hom"
    extra: dict = field(default_factory=dict)

    @property
    def rank(self):
        return self.lattice.rank

    def invariants(self):
        return (self.rank, tuple(self.torsion))

    def is_zero(self):
        return self.rank == 0 and not self.torsion

    def contains(self, phi_Z):
        return self.lattice.contains(phi_Z.flatten())

    def morphism_for(self, phi_Z):
        """The full morphism with integer part phi_Z, or None if phi_Z is not in the group."""
        if not self.contains(phi_Z):
            return None
        return _complete(self.source, self.target, phi_Z)


def _solver_matrices(H, G):
    if H.side == HOMOLOGICAL:
        # φ_K = ω'·X·ω⁻¹
        return G.omega, H.omega_inverse()
    # φ_K = η'⁻¹·X·η
    return G.omega_inverse(), H.omega


def _complete(H, G, phi_Z):
    reg = H.registry
    if H.free_rank == 0 or G.free_rank == 0:
        return TripleMorphism(H, G, phi_Z, Matrix.zeros(G.k_dim, H.k_dim, reg.field(0)))
    A, B = _solver_matrices(H, G)
    X = phi_Z.map(lambda x: PeriodScalar.constant(x, reg))
    R = A @ X @ B
    if not all(x.is_constant() for x in R.flatten()):
        return None
    return TripleMorphism(H, G, phi_Z, R.map(lambda x: x.constant_value()))


def _need_iso(H, G):
    if H.side == HOMOLOGICAL and not H.iso:
        raise TripleError("hom_group needs an invertible comparison matrix on the source")
    if H.side == COHOMOLOGICAL and not G.iso:
        raise TripleError("hom_group needs an invertible comparison matrix on the target")


def _constraint_rows(H, G):
    """Rational linear equations on the row-major entries of X = φ_Z."""
    reg = H.registry
    field_ = reg.field
    m, mp = H.free_rank, G.free_rank
    A, B = _solver_matrices(H, G)
    rows = []
    for p in range(A.nrows):
        for q in range(B.ncols):
            coeffs = {}
            for k in range(mp):
                a = A[p, k]
                if a.is_zero():
                    continue
                for l in range(m):
                    b = B[l, q]
                    if b.is_zero():
                        continue
                    coeffs[k * m + l] = a * b
            if not coeffs:
                continue
            dens = []
            for c in coeffs.values():
                if not any(c.den == d for d in dens):
                    dens.append(c.den)
            D = Poly.constant(1, reg)
            for d in dens:
                D = D * d
            m0 = D.leading_monomial()
            d0 = D.terms[m0]
            exprs = {}
            for idx, c in coeffs.items():
                N = c.num
                for d in dens:
                    if not (d == c.den):
                        N = N * d
                t = N.terms.get(m0)
                if t is not None:
                    N = N - D.scale(t / d0)
                exprs[idx] = N
            monos = sorted({mono for N in exprs.values() for mono in N.terms})
            for mono in monos:
                for j in range(field_.degree):
                    row = [Fraction(0)] * (m * mp)
                    for idx, N in exprs.items():
                        c = N.terms.get(mono)
                        if c is not None:
                            row[idx] = field_.coords(c)[j]
                    if any(row):
                        rows.append(row)
    return rows


def _free_hom_lattice(H, G):
    n = H.free_rank * G.free_rank
    if n == 0:
        return Lattice.zero(0)
    rows = _constraint_rows(H, G)
    if not rows:
        return Lattice.standard(n)
    sol = nullspace(Matrix(rows, len(rows), n))
    if not sol:
        return Lattice.zero(n)
    return saturate(sol, n)


def _hom_torsion(H, G):
    ts = []
    for t in G.torsion:
        ts.extend([t] * H.free_rank)  # free -> torsion, unconstrained
        for s in H.torsion:
            g = gcd(s, t)
            if g > 1:
                ts.append(g)
    return _canonical_torsion(ts)


def hom_group(H, G, tag="hom"):
    """All morphisms H -> G under the independence model of the symbols."""
    if H.side != G.side:
        raise TripleError("hom_group between triples on different sides")
    if H.registry is not G.registry:
        raise TripleError("triples from different registries")
    H.registry.ensure_frozen()
    if H.free_rank and G.free_rank:
        _need_iso(H, G)
    L = _free_hom_lattice(H, G)
    gens = []
    for v in L.vectors():
        X = Matrix([v[i * H.free_rank:(i + 1) * H.free_rank] for i in range(G.free_rank)],
                   G.free_rank, H.free_rank)
        mor = _complete(H, G, X)
        if mor is None or not mor.commutes():
            raise ArithmeticError("solver produced a morphism that fails the commuting square")
        gens.append(mor)
    return HomLattice(H, G, L, gens, _hom_torsion(H, G), tag)


def period_cohomology(H):
    """H_ϖ = Hom(Z(0), H): lattice vectors whose periods are base-field rational."""
    return hom_group(tate(0, H.registry, H.side), H, tag="period-cohomology")


def _subspace_contains(basis, v):
    if not any(x != 0 for x in v):
        return True
    if not basis:
        return False
    M = Matrix(basis, len(basis), len(v))
    return rank(M.vstack(Matrix([v], 1, len(v)))) == rank(M)


def check_weight_preservation(phi, H=None, G=None):
    H = H or phi.source
    G = G or phi.target
    if H.weights is None or G.weights is None:
        raise TripleError("weight filtration missing")
    for w in sorted(set(H.weights.weights()) | set(G.weights.weights())):
        src, dst = H.weights.at(w), G.weights.at(w)
        for v in src.vectors():
            img = phi.phi_Z @ Matrix.from_columns([v], H.free_rank)
            if not dst.contains(img.col(0)):
                return False
    return True


def check_hodge_preservation(phi, H=None, G=None):
    H = H or phi.source
    G = G or phi.target
    if H.hodge is None or G.hodge is None:
        raise TripleError("Hodge filtration missing")
    for v in H.hodge:
        img = phi.phi_K @ Matrix.from_columns([v], H.k_dim)
        if not _subspace_contains(G.hodge, img.col(0)):
            return False
    return True


# ---------------------------------------------------------------------------


def biext_group(HN, HM):
    """Period cohomology of N^∨ ⊗ M^∨ ⊗ Z(1); reports the alternating part when N = M."""
    reg = HN.registry
    T = tensor(dual(HN), tensor(dual(HM), tate(1, reg, HN.side)))
    res = period_cohomology(T)
    res.tag = "biextension"
    if HN is HM or (HN.same_as(HM)):
        n = HN.free_rank
        # bilinear form entries x_{ij} sit at index i*n + j
        cons = []
        for i in range(n):
            for j in range(i, n):
                row = [0] * (n * n)
                row[i * n + j] += 1
                row[j * n + i] += 1
                cons.append(row)
        basis = res.lattice.vectors()
        if basis and cons:
            S = Matrix(cons, len(cons), n * n)
            Bm = Matrix.from_columns(basis, n * n)
            combos = integer_kernel(S @ Bm)
            alt = Lattice([(Bm @ Matrix.from_columns([c], len(basis))).col(0) for c in combos], n * n)
        else:
            alt = Lattice.zero(n * n)
        res.extra["alternating"] = alt
    return res


def _unimodular_inverse(X):
    if X.nrows != X.ncols:
        return None
    d = det(X)
    if d not in (1, -1):
        return None
    inv = inverse(X)
    return inv.map(int)


def find_isomorphism(H, G, hints=(), search_bound=1, max_rank=8):
    """Mutually inverse morphisms (f, g) between H and G, or None.

    ``hints`` are candidate φ_Z matrices tried first; each must lie in the
    solved Hom lattice and have an integral inverse lying in the reverse one.
    Otherwise small integer combinations of the Hom generators are searched.
    """
    if (H.free_rank, H.torsion) != (G.free_rank, G.torsion):
        return None
    fwd, back = hom_group(H, G), hom_group(G, H)
    if H.free_rank and (fwd.rank == 0 or back.rank == 0):
        return None

    def attempt(X):
        if not fwd.contains(X):
            return None
        Y = _unimodular_inverse(X)
        if Y is None or not back.contains(Y):
            return None
        f, g = fwd.morphism_for(X), back.morphism_for(Y)
        if f is None or g is None:
            return None
        return f, g

    for X in hints:
        got = attempt(X)
        if got:
            return got
    if H.free_rank == 0:
        return zero_morphism(H, G), zero_morphism(G, H)
    gens = [g.phi_Z for g in fwd.generators]
    if len(gens) > max_rank:
        return None
    rng = range(-search_bound, search_bound + 1)
    for coeffs in sorted(product(rng, repeat=len(gens)), key=lambda c: (sum(map(abs, c)), c)):
        if not any(coeffs):
            continue
        X = Matrix.zeros(G.free_rank, H.free_rank)
        for c, Gm in zip(coeffs, gens):
            if c:
                X = X + Gm.scale(c)
        got = attempt(X)
        if got:
            return got
    return None
