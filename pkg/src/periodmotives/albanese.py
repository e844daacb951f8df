"""Punctured P^1 and punctured elliptic curves over Q.

For X = (compact curve) minus S the Albanese-dual 1-motive is
[Div^0_S -> Pic^0], and the ranks of the K-rational period lattices in
H^1 are read off from the kernel of that map.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .numfield import Lattice
from .onemotive import AbelianDatum, OneMotive

DEFAULT_BOUND = 50
TORSION_CAP = 12

EXACT = "exact"
PROPER = "proper"


class CurveError(ValueError):
    pass


@dataclass(frozen=True)
class ECPoint:
    x: Fraction = None
    y: Fraction = None

    @property
    def is_infinity(self):
        return self.x is None

    def __str__(self):
        if self.is_infinity:
            return "O"
        return f"({self.x},{self.y})"


INFINITY = ECPoint()


def point(x, y):
    return ECPoint(Fraction(x), Fraction(y))


@dataclass(frozen=True)
class EllipticCurve:
    """y^2 = x^3 + a x + b over Q."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if 4 * self.a ** 3 + 27 * self.b ** 2 == 0:
            raise CurveError("singular curve: discriminant is zero")

    @property
    def discriminant(self):
        return -16 * (4 * self.a ** 3 + 27 * self.b ** 2)

    def contains(self, P):
        return P.is_infinity or P.y ** 2 == P.x ** 3 + self.a * P.x + self.b

    def check(self, P):
        if not self.contains(P):
            raise CurveError(f"{P} is not on {self}")

    def neg(self, P):
        return P if P.is_infinity else ECPoint(P.x, -P.y)

    def add(self, P, Q):
        self.check(P)
        self.check(Q)
        return self._add(P, Q)

    def _add(self, P, Q):
        if P.is_infinity:
            return Q
        if Q.is_infinity:
            return P
        if P.x == Q.x:
            if P.y == -Q.y:
                return INFINITY
            lam = (3 * P.x ** 2 + self.a) / (2 * P.y)
        else:
            lam = (Q.y - P.y) / (Q.x - P.x)
        x3 = lam ** 2 - P.x - Q.x
        return ECPoint(x3, lam * (P.x - x3) - P.y)

    def mul(self, n, P):
        self.check(P)
        if n < 0:
            n, P = -n, self.neg(P)
        out, base = INFINITY, P
        while n:
            if n & 1:
                out = self._add(out, base)
            base = self._add(base, base)
            n >>= 1
        return out

    def order(self, P, max_order=TORSION_CAP):
        """Least n <= max_order with [n]P = O, or None if there is none."""
        self.check(P)
        Q = P
        for n in range(1, max_order + 1):
            if Q.is_infinity:
                return n
            Q = self._add(Q, P)
        return None

    def __str__(self):
        out = "y^2 = x^3"
        for c, t in ((self.a, "x"), (self.b, "")):
            if c:
                out += f" {'-' if c < 0 else '+'} {abs(c) if abs(c) != 1 or not t else ''}{t}"
        return out


def ec_add(E, P, Q):
    return E.add(P, Q)


def ec_order(E, P, max_order=TORSION_CAP):
    return E.order(P, max_order)


P1_INFINITY = "inf"


@dataclass(frozen=True)
class CurveModel:
    """P^1 (``curve=None``) or an elliptic curve, minus a finite set of rational points."""

    curve: EllipticCurve = None
    punctures: tuple = ()
    relation_bound: int = DEFAULT_BOUND
    name: str = None

    def __post_init__(self):
        pts = []
        for p in self.punctures:
            if self.curve is None:
                pts.append(P1_INFINITY if p in (P1_INFINITY, None) else Fraction(p))
            else:
                if not isinstance(p, ECPoint):
                    p = INFINITY if p in ("O", None) else point(*p)
                self.curve.check(p)
                pts.append(p)
        if len(set(pts)) != len(pts):
            raise CurveError("punctures must be pairwise distinct")
        if self.relation_bound < 1:
            raise CurveError("relation bound must be positive")
        object.__setattr__(self, "punctures", tuple(pts))

    @property
    def kind(self):
        return "P1" if self.curve is None else "elliptic"

    def describe(self):
        base = "P1" if self.curve is None else str(self.curve)
        pts = ", ".join(str(p) for p in self.punctures)
        return f"{base} minus {{{pts}}}"


@dataclass
class AlbaneseMotive:
    model: CurveModel
    lattice_rank: int
    target: str  # "0" for P^1, "E" for an elliptic curve
    generators: list  # divisors as {puncture index: coefficient}
    images: list  # u(generator) in Pic^0 (ECPoint) or None for P^1


def albanese_motive(X):
    S = X.punctures
    gens = [{i: 1, 0: -1} for i in range(1, len(S))]
    if X.curve is None:
        images = [None] * len(gens)
    else:
        images = [X.curve.add(S[i], X.curve.neg(S[0])) for i in range(1, len(S))]
    return AlbaneseMotive(X, max(len(S) - 1, 0), "0" if X.curve is None else "E", gens, images)


@dataclass
class KernelResult:
    lattice: Lattice
    completeness: str  # EXACT, PROPER or "bound-limited at B"
    divisors: list = field(default_factory=list)
    orders: list = field(default_factory=list)

    @property
    def rank(self):
        return self.lattice.rank


def _divisor(v, S):
    # generator e_i = (P_i) - (P_0)
    coeffs = {}
    for i, n in enumerate(v, start=1):
        if n:
            coeffs[i] = coeffs.get(i, 0) + n
            coeffs[0] = coeffs.get(0, 0) - n
    return {str(S[i]): c for i, c in sorted(coeffs.items()) if c}


def _torsion_kernel(E, Q, orders):
    k = len(Q)
    found = []
    for v in product(*(range(o) for o in orders)):
        if not any(v):
            continue
        acc = INFINITY
        for n, P in zip(v, Q):
            acc = E._add(acc, E.mul(n, P))
        if acc.is_infinity:
            found.append(v)
    found += [tuple(o if i == j else 0 for i in range(k)) for j, o in enumerate(orders)]
    return Lattice(found, k)


def _bounded_relations(E, Q, B):
    """Relations sum n_i Q_i = O with |n_i| <= B and |sum n_i| <= B, by meet in the middle."""
    k = len(Q)
    multiples = []
    for P in Q:
        table = {0: INFINITY}
        for n in range(1, B + 1):
            table[n] = E._add(table[n - 1], P)
            table[-n] = E.neg(table[n])
        multiples.append(table)
    half = k // 2
    left, right = range(half), range(half, k)

    def sums(idx, negate):
        out = {}
        for v in product(range(-B, B + 1), repeat=len(idx)):
            acc = INFINITY
            for n, i in zip(v, idx):
                acc = E._add(acc, multiples[i][n])
            if negate:
                acc = E.neg(acc)
            out.setdefault(acc, []).append(v)
        return out

    lsums = sums(left, True)
    found = []
    for v in product(range(-B, B + 1), repeat=len(right)):
        acc = INFINITY
        for n, i in zip(v, right):
            acc = E._add(acc, multiples[i][n])
        for w in lsums.get(acc, ()):
            full = tuple(w) + tuple(v)
            if any(full) and abs(sum(full)) <= B:
                found.append(full)
    return Lattice(found, k)


def ker_u1_star(X):
    """Kernel of Div^0_S -> Pic^0 as a lattice in the generator basis (P_i) - (P_0)."""
    A = albanese_motive(X)
    k = A.lattice_rank
    S = X.punctures
    if not S:
        return KernelResult(Lattice.zero(0), PROPER)
    if X.curve is None:
        L = Lattice.standard(k)
        return KernelResult(L, EXACT, [_divisor(v, S) for v in L.vectors()])
    E = X.curve
    orders = [E.order(P) for P in A.images]
    if all(o is not None for o in orders):
        L = _torsion_kernel(E, A.images, orders)
        flag = EXACT
    else:
        L = _bounded_relations(E, A.images, X.relation_bound)
        flag = f"bound-limited at {X.relation_bound}"
    return KernelResult(L, flag, [_divisor(v, S) for v in L.vectors()], orders)


@dataclass
class ReportRow:
    q: int
    rank: int
    tag: str
    completeness: str


def period_conjecture_report(X, q_range=range(-1, 3)):
    """Predicted ranks of the period lattices H^{1,q} for each q."""
    ker = ker_u1_star(X)
    rows = []
    for q in q_range:
        if q == 1:
            rows.append(ReportRow(q, ker.rank, "albanese-kernel", ker.completeness))
        elif q == 0:
            rows.append(ReportRow(q, 0, "normal-curve-vanishing", EXACT))
        else:
            rows.append(ReportRow(q, 0, "twist-vanishing", EXACT))
    return rows


def cross_check_motive(X, registry_builder):
    """A OneMotive model of the Albanese-dual motive with fresh elliptic-log symbols.

    ``registry_builder(names)`` must register the given symbol names (periods
    first, then two logarithm symbols per generator) and return a frozen
    registry.  Only meaningful when no puncture difference is torsion.
    """
    A = albanese_motive(X)
    if X.curve is None:
        return OneMotive(A.lattice_rank), registry_builder([], [])
    periods = ("w1", "w2", "e1", "e2")
    logs = [(f"z{i}", f"zeta{i}") for i in range(1, A.lattice_rank + 1)]
    reg = registry_builder(list(periods), [n for pair in logs for n in pair])
    datum = AbelianDatum(1, (("w1", "w2"), ("e1", "e2")))
    M = OneMotive(A.lattice_rank, 0, (), abelian=datum, u_abelian=tuple(logs))
    return M, reg
