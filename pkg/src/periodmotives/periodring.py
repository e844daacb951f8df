"""Rational functions in formal transcendental symbols over a number field.

A :class:`SymbolRegistry` holds the named generators (2πi, logarithms of
primes and units, abelian periods, elliptic logarithms, free user symbols)
and a list of triangular rewrite rules.  Distinct symbols are treated as
algebraically independent apart from the declared rules.

:class:`Poly` is a sparse polynomial (monomial -> coefficient) and
:class:`PeriodScalar` a quotient of two normalized polynomials.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

from .numfield import QQ, FieldElem
from .numfield.field import FieldError


class RegistryError(ValueError):
    pass


TWO_PI_I = "TwoPiI"
LOG_PRIME = "LogPrime"
LOG_UNIT = "LogUnit"
ABELIAN_PERIOD = "AbelianPeriod"
ELLIPTIC_LOG = "EllipticLog"
USER = "UserSymbol"
KINDS = (TWO_PI_I, LOG_PRIME, LOG_UNIT, ABELIAN_PERIOD, ELLIPTIC_LOG, USER)

TWO_PI_I_NAME = "2pi_i"
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*$")


@dataclass(frozen=True)
class Symbol:
    name: str
    kind: str
    index: int
    data: object = None  # the prime for LogPrime, the field value for LogUnit


# ---------------------------------------------------------------------------
# monomials: sorted tuples ((index, exponent), ...)

ONE = ()


def mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for i, e in b:
        d[i] = d.get(i, 0) + e
    return tuple(sorted(d.items()))


def mono_divides(a, b):
    """True if monomial a divides b."""
    db = dict(b)
    return all(db.get(i, 0) >= e for i, e in a)


def mono_div(b, a):
    d = dict(b)
    for i, e in a:
        d[i] -= e
    return tuple(sorted((i, e) for i, e in d.items() if e))


def mono_gcd(a, b):
    db = dict(b)
    return tuple((i, min(e, db[i])) for i, e in a if i in db)


def mono_degree(a):
    return sum(e for _, e in a)


@lru_cache(maxsize=65536)
def mono_key(a):
    """Sort key for the degree-lexicographic order, lower index = larger variable."""
    return (mono_degree(a), _dense_key(a))


def _dense_key(a):
    if not a:
        return ()
    top = a[-1][0]
    dense = [0] * (top + 1)
    for i, e in a:
        dense[i] = e
    return tuple(dense)


# ---------------------------------------------------------------------------


class SymbolRegistry:
    """Ordered symbols plus triangular rewrite rules; frozen before any computation."""

    def __init__(self, field=QQ):
        self.field = field
        self.symbols = []
        self._by_name = {}
        self.rules = []  # (lhs monomial, rhs Poly)
        self.frozen = False
        self.add_symbol(TWO_PI_I_NAME, TWO_PI_I)

    @classmethod
    def with_primes(cls, primes=(2, 3, 5, 7), field=QQ, freeze=True):
        reg = cls(field)
        for p in primes:
            reg.log_prime(p)
        if freeze:
            reg.freeze()
        return reg

    def _check_open(self):
        if self.frozen:
            raise RegistryError("registry is frozen; no symbols or relations may be added")

    def add_symbol(self, name, kind=USER, data=None):
        self._check_open()
        if kind not in KINDS:
            raise RegistryError(f"unknown symbol kind {kind!r}")
        if kind == TWO_PI_I and self.symbols:
            raise RegistryError("the registry already has its 2pi_i symbol")
        if name in self._by_name:
            raise RegistryError(f"duplicate symbol name {name!r}")
        if name != TWO_PI_I_NAME and not _NAME_RE.match(name):
            raise RegistryError(f"invalid symbol name {name!r}")
        if name == self.field.name and not self.field.is_rational:
            raise RegistryError(f"symbol name {name!r} clashes with the field generator")
        if kind == LOG_UNIT:
            data = self.field(data)
            if data == 0:
                raise RegistryError("a unit symbol needs a nonzero value")
        sym = Symbol(name, kind, len(self.symbols), data)
        self.symbols.append(sym)
        self._by_name[name] = sym
        return sym

    def log_prime(self, p):
        """The LogPrime symbol for p, registering it if the registry is still open."""
        name = f"log{p}"
        if name in self._by_name:
            return self._by_name[name]
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise RegistryError(f"{p} is not prime")
        return self.add_symbol(name, LOG_PRIME, p)

    def __getitem__(self, name):
        try:
            return self._by_name[name]
        except KeyError:
            raise RegistryError(f"unknown symbol {name!r}") from None

    def __contains__(self, name):
        return name in self._by_name

    def names(self):
        return [s.name for s in self.symbols]

    def of_kind(self, kind):
        return [s for s in self.symbols if s.kind == kind]

    @property
    def two_pi_i(self):
        return self.symbols[0]

    # -- relations ----------------------------------------------------------

    def add_relation(self, lhs, rhs):
        """Declare the rule lhs -> rhs; lhs is a monomial, rhs a Poly or scalar text."""
        self._check_open()
        # parse without the earlier rules so each relation is stored as written
        saved, self.rules = self.rules, []
        try:
            if isinstance(lhs, str):
                lhs = parse_scalar(lhs, self, check=False)
            if isinstance(rhs, str):
                rhs = parse_scalar(rhs, self, check=False)
            lhs = _as_poly(lhs, self)
            rhs = _as_poly(rhs, self)
        finally:
            self.rules = saved
        if len(lhs.terms) != 1 or lhs.terms.get(lhs.leading_monomial()) != 1 or lhs.is_constant():
            raise RegistryError("the left-hand side of a rule must be a single non-constant monomial")
        self.rules.append((lhs.leading_monomial(), rhs))

    def freeze(self):
        """Validate the rules and lock the registry."""
        if self.frozen:
            return self
        lhss = [l for l, _ in self.rules]
        if len(set(lhss)) != len(lhss):
            raise RegistryError("relations are not triangular: repeated left-hand monomial")
        for a in range(len(lhss)):
            for b in range(a + 1, len(lhss)):
                if mono_gcd(lhss[a], lhss[b]):
                    # overlapping leading monomials could give non-confluent rewriting
                    raise RegistryError(
                        "relations are not triangular: left-hand monomials "
                        f"{self.format_monomial(lhss[a])} and {self.format_monomial(lhss[b])} share a variable")
        for lhs, rhs in self.rules:
            for m in rhs.terms:
                if mono_key(m) >= mono_key(lhs):
                    raise RegistryError(
                        f"relations are not triangular: {self.format_monomial(m)} is not smaller than "
                        f"{self.format_monomial(lhs)}")
                for other in lhss:
                    if mono_divides(other, m):
                        raise RegistryError(
                            "relations are not triangular: a right-hand side contains the left-hand "
                            f"monomial {self.format_monomial(other)}")
        for lhs, rhs in self.rules:
            self._check_domain(lhs, rhs)
        self.frozen = True
        return self

    def _check_domain(self, lhs, rhs):
        # heuristic integral-domain test: the relation polynomial must not
        # split off a monomial factor and, over Q, must be irreducible
        rel = Poly({lhs: Fraction(1)}, self, normalize=False) - rhs
        content = None
        for m in rel.terms:
            content = m if content is None else mono_gcd(content, m)
        if content:
            raise RegistryError(
                f"relation {self.format_monomial(lhs)} -> ... has the monomial factor "
                f"{self.format_monomial(content)} and would create zero divisors")
        if self.field.is_rational and len(rel.terms) > 1:
            import sympy  # slow to import, only needed here

            expr = rel.to_sympy()
            _, factors = sympy.factor_list(expr)
            if len(factors) > 1 or any(e > 1 for _, e in factors):
                raise RegistryError(
                    f"relation {self.format_monomial(lhs)} -> ... factors and would create zero divisors")

    def ensure_frozen(self):
        if not self.frozen:
            raise RegistryError("registry must be frozen before computing")

    # -- formatting ---------------------------------------------------------

    def format_monomial(self, m):
        if not m:
            return "1"
        parts = []
        for i, e in m:
            name = self.symbols[i].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return "*".join(parts)

    def sympy_symbols(self):
        import sympy

        return [sympy.Symbol(f"s{i}") for i in range(len(self.symbols))]


# ---------------------------------------------------------------------------


def _coerce_coeff(c, field):
    if isinstance(c, FieldElem):
        if c.field != field:
            raise FieldError("coefficient from a different number field")
        return c
    if isinstance(c, (Rational, str)):
        return field(c)
    raise TypeError(f"cannot use {c!r} as a coefficient")


class Poly:
    """Sparse polynomial over the registry's base field, kept in rewritten normal form."""

    __slots__ = ("terms", "registry")

    def __init__(self, terms, registry, normalize=True):
        self.registry = registry
        field = registry.field
        clean = {}
        for m, c in terms.items():
            c = _coerce_coeff(c, field)
            if c != 0:
                clean[m] = c
        self.terms = _rewrite(clean, registry) if normalize and registry.rules else clean

    @classmethod
    def constant(cls, c, registry):
        return cls({ONE: c}, registry, normalize=False)

    @classmethod
    def symbol(cls, name, registry):
        return cls({((registry[name].index, 1),): Fraction(1)}, registry)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(m == ONE for m in self.terms)

    def constant_term(self):
        return self.terms.get(ONE, self.registry.field(0))

    def leading_monomial(self):
        return max(self.terms, key=mono_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: mono_key(t[0]), reverse=True)

    def degree(self):
        return max((mono_degree(m) for m in self.terms), default=0)

    def _same(self, other):
        if isinstance(other, Poly):
            if other.registry is not self.registry:
                raise RegistryError("polynomials from different registries")
            return other
        return Poly.constant(other, self.registry)

    def __add__(self, other):
        other = self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return Poly(out, self.registry, normalize=False)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()}, self.registry, normalize=False)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._same(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                c = c1 * c2
                out[m] = out[m] + c if m in out else c
        return Poly(out, self.registry)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Poly.constant(1, self.registry)
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c):
        return Poly({m: c * v for m, v in self.terms.items()}, self.registry, normalize=False)

    def monomial_content(self):
        content = None
        for m in self.terms:
            content = m if content is None else mono_gcd(content, m)
        return content or ONE

    def divide_monomial(self, m):
        return Poly({mono_div(k, m): c for k, c in self.terms.items()}, self.registry)

    def exact_divide(self, other):
        """Quotient in the free polynomial ring if other divides self exactly, else None."""
        rem = dict(self.terms)
        lm = other.leading_monomial()
        lc = other.terms[lm]
        key_lm = mono_key(lm)
        quot = {}
        while rem:
            m = max(rem, key=mono_key)
            if mono_key(m) < key_lm or not mono_divides(lm, m):
                return None
            q = mono_div(m, lm)
            c = rem[m] / lc
            quot[q] = c
            for m2, c2 in other.terms.items():
                k = mono_mul(q, m2)
                v = rem.get(k, 0) - c * c2
                if v == 0:
                    rem.pop(k, None)
                else:
                    rem[k] = v
        return Poly(quot, self.registry, normalize=False)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.registry is other.registry and self.terms == other.terms
        if isinstance(other, (Rational, FieldElem)):
            return self.terms == ({} if other == 0 else {ONE: other})
        return NotImplemented

    __hash__ = None

    def to_sympy(self):
        import sympy

        gens = self.registry.sympy_symbols()
        expr = sympy.Integer(0)
        for m, c in self.terms.items():
            c = Fraction(c)
            term = sympy.Rational(c.numerator, c.denominator)
            for i, e in m:
                term *= gens[i] ** e
            expr += term
        return expr

    def format(self):
        if not self.terms:
            return "0"
        field = self.registry.field
        parts = []
        for m, c in self.sorted_terms():
            mono = self.registry.format_monomial(m)
            cs = field.format(c)
            if isinstance(c, FieldElem) and sum(1 for x in c.coords if x) > 1:
                cs = f"({cs})"
            if m == ONE:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for p in parts[1:]:
            out += " - " + p[1:] if p.startswith("-") else " + " + p
        return out

    def __repr__(self):
        return f"Poly({self.format()})"


def _rewrite(terms, registry):
    """Apply the rewrite rules until no term is divisible by a left-hand side."""
    rules = registry.rules
    out = {}
    work = dict(terms)
    while work:
        m = max(work, key=mono_key)
        c = work.pop(m)
        for lhs, rhs in rules:
            if mono_divides(lhs, m):
                q = mono_div(m, lhs)
                for m2, c2 in rhs.terms.items():
                    k = mono_mul(q, m2)
                    v = work.get(k, 0) + c * c2
                    if v == 0:
                        work.pop(k, None)
                    else:
                        work[k] = v
                break
        else:
            out[m] = c
    return out


def _as_poly(x, registry):
    if isinstance(x, Poly):
        return x
    if isinstance(x, PeriodScalar):
        if not x.den.is_constant():
            raise RegistryError("expected a polynomial, got a proper fraction")
        return x.num.scale(1 / x.den.constant_term())
    return Poly.constant(x, registry)


def _sympy_gcd(a, b):
    import sympy

    reg = a.registry
    gens = reg.sympy_symbols()
    g = sympy.Poly(sympy.gcd(a.to_sympy(), b.to_sympy()), *gens)
    terms = {}
    for exps, c in g.terms():
        m = tuple((i, e) for i, e in enumerate(exps) if e)
        terms[m] = Fraction(int(c.p), int(c.q))
    return Poly(terms, reg, normalize=False)


class PeriodScalar:
    """An element num/den of the fraction field of the symbol ring."""

    __slots__ = ("num", "den", "registry")

    def __init__(self, num, den=None, registry=None, simplify=True):
        if registry is None:
            registry = num.registry if isinstance(num, (Poly, PeriodScalar)) else None
        if registry is None:
            raise RegistryError("a registry is needed to build a period scalar")
        num = _as_poly(num, registry)
        den = Poly.constant(1, registry) if den is None else _as_poly(den, registry)
        if den.is_zero():
            raise ZeroDivisionError("period scalar with zero denominator")
        self.registry = registry
        if simplify:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def constant(cls, c, registry):
        return cls(Poly.constant(c, registry), registry=registry, simplify=False)

    @classmethod
    def symbol(cls, name, registry):
        return cls(Poly.symbol(name, registry), registry=registry, simplify=False)

    @classmethod
    def two_pi_i(cls, registry, power=1):
        x = cls.symbol(TWO_PI_I_NAME, registry)
        return x ** power

    def zero_like(self):
        return PeriodScalar.constant(0, self.registry)

    def one_like(self):
        return PeriodScalar.constant(1, self.registry)

    def _same(self, other):
        if isinstance(other, PeriodScalar):
            if other.registry is not self.registry:
                raise RegistryError("scalars from different registries")
            return other
        if isinstance(other, Poly):
            return PeriodScalar(other, registry=self.registry)
        if isinstance(other, (Rational, FieldElem)):
            return PeriodScalar.constant(other, self.registry)
        return NotImplemented

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            return self
        if self.num.is_zero():
            return other
        if self.den == other.den:
            return PeriodScalar(self.num + other.num, self.den, self.registry)
        return PeriodScalar(self.num * other.den + other.num * self.den, self.den * other.den, self.registry)

    __radd__ = __add__

    def __neg__(self):
        return PeriodScalar(-self.num, self.den, self.registry, simplify=False)

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        if self.num.is_zero() or other.num.is_zero():
            return self.zero_like()
        return PeriodScalar(self.num * other.num, self.den * other.den, self.registry)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of a zero period scalar")
        return PeriodScalar(self.den, self.num, self.registry)

    def __truediv__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = self.one_like()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return False
        if self.den == other.den:
            return self.num == other.num
        return (self.num * other.den - other.num * self.den).is_zero()

    __hash__ = None

    def is_polynomial(self):
        return self.den.is_constant()

    def is_constant(self):
        """True if the scalar lies in the base field."""
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if not self.is_constant():
            raise ValueError(f"{self} is not a base-field element")
        return self.num.constant_term() / self.den.constant_term()

    def complexity(self):
        """Pivot preference: constants, then monomials, then short expressions."""
        if self.is_constant():
            return (0, 0)
        return (1, len(self.num.terms) + len(self.den.terms), self.num.degree() + self.den.degree())

    def format(self):
        n = self.num.format()
        if self.den.is_constant():
            c = self.den.constant_term()
            if c == 1:
                return n
        d = self.den.format()
        if len(self.num.terms) > 1:
            n = f"({n})"
        if len(self.den.terms) > 1 or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    __str__ = format

    def __repr__(self):
        return f"PeriodScalar({self.format()})"


def _reduce(num, den):
    reg = num.registry
    if num.is_zero():
        return num, Poly.constant(1, reg)
    # cancel the common monomial content
    g = mono_gcd(num.monomial_content(), den.monomial_content())
    if g:
        num, den = num.divide_monomial(g), den.divide_monomial(g)
    if not den.is_constant():
        q = num.exact_divide(den)
        if q is not None:
            num, den = Poly(q.terms, reg), Poly.constant(1, reg)
        elif not num.is_constant():
            q = den.exact_divide(num)
            if q is not None:
                num, den = Poly.constant(1, reg), Poly(q.terms, reg)
            elif reg.field.is_rational:
                g = _sympy_gcd(num, den)
                if not g.is_constant():
                    num = Poly(num.exact_divide(g).terms, reg)
                    den = Poly(den.exact_divide(g).terms, reg)
    lc = den.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        num, den = num.scale(inv), den.scale(inv)
    return num, den


def normal_form(s):
    """Exhaustively rewrite numerator and denominator; idempotent."""
    s.registry.ensure_frozen()
    return PeriodScalar(Poly(s.num.terms, s.registry), Poly(s.den.terms, s.registry), s.registry)


def monomial_coefficients(s):
    """Map monomial -> coefficient for a scalar with trivial denominator."""
    if isinstance(s, Poly):
        return dict(s.terms)
    if not s.den.is_constant():
        raise ValueError(f"{s} has a nontrivial denominator")
    c = s.den.constant_term()
    return {m: v / c for m, v in s.num.terms.items()}


def from_monomial_coefficients(coeffs, registry):
    return PeriodScalar(Poly(coeffs, registry), registry=registry)


# ---------------------------------------------------------------------------
# logarithms


def _factor_int(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rational_exponents(a):
    """Sign and prime exponents of a nonzero rational: a = sign * prod p^e."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("logarithm of zero")
    exps = dict(_factor_int(abs(a.numerator)))
    for p, e in _factor_int(a.denominator).items():
        exps[p] = exps.get(p, 0) - e
    return (-1 if a < 0 else 1), exps


def log_decompose(a, registry):
    """The principal logarithm of a as a K-linear combination of registry symbols."""
    field = registry.field
    a = field(a)
    if a == 0:
        raise ValueError("logarithm of zero")
    terms = {}
    if field.is_rational_element(a):
        sign, exps = rational_exponents(field.to_rational(a))
        for p, e in sorted(exps.items()):
            name = f"log{p}"
            if name not in registry:
                raise RegistryError(f"the registry has no LogPrime symbol for {p}")
            terms[((registry[name].index, 1),)] = Fraction(e)
        if sign < 0:
            terms[((0, 1),)] = Fraction(1, 2)
    else:
        for sym in registry.of_kind(LOG_UNIT):
            if sym.data == a:
                terms[((sym.index, 1),)] = Fraction(1)
                break
        else:
            raise RegistryError(f"{field.format(a)} is not a declared multiplicative generator")
    return PeriodScalar(Poly(terms, registry), registry=registry)


# ---------------------------------------------------------------------------
# parsing


class ParseError(ValueError):
    pass


_NUM_RE = re.compile(r"\d+")
_ID_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")


def _tokens(text, registry):
    names = sorted((n for n in registry.names()), key=len, reverse=True)
    i = 0
    out = []
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in "+-*/^()":
            out.append(("op", ch))
            i += 1
            continue
        hit = next((n for n in names if text.startswith(n, i)
                    and not (i + len(n) < len(text) and (text[i + len(n)].isalnum() or text[i + len(n)] == "_"))),
                   None)
        if hit:
            out.append(("name", hit))
            i += len(hit)
            continue
        m = _NUM_RE.match(text, i)
        if m:
            out.append(("num", m.group(0)))
            i = m.end()
            continue
        m = _ID_RE.match(text, i)
        if m:
            out.append(("name", m.group(0)))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r} at position {i}")
    return out


def parse_scalar(text, registry, check=True):
    """Parse an expression such as ``2*log2 - 1/2*2pi_i`` into a PeriodScalar."""
    if check:
        registry.ensure_frozen()
    toks = _tokens(str(text), registry)
    pos = 0

    def peek():
        return toks[pos] if pos < len(toks) else (None, None)

    def take():
        nonlocal pos
        t = peek()
        pos += 1
        return t

    def expr():
        v = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            w = term()
            v = v + w if op == "+" else v - w
        return v

    def term():
        v = unary()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            w = unary()
            v = v * w if op == "*" else v / w
        return v

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        v = atom()
        if peek() == ("op", "^"):
            take()
            neg = False
            if peek() == ("op", "-"):
                take()
                neg = True
            kind, tok = take()
            if kind != "num":
                raise ParseError("exponent must be an integer")
            e = int(tok)
            v = v ** (-e if neg else e)
        return v

    def atom():
        kind, tok = take()
        if kind == "num":
            return PeriodScalar.constant(int(tok), registry)
        if kind == "name":
            if tok in registry:
                return PeriodScalar.symbol(tok, registry)
            field = registry.field
            if not field.is_rational and tok == field.name:
                return PeriodScalar.constant(field.gen(), registry)
            raise ParseError(f"unknown symbol {tok!r}")
        if tok == "(":
            v = expr()
            if take() != ("op", ")"):
                raise ParseError("missing closing parenthesis")
            return v
        raise ParseError(f"unexpected token {tok!r}" if tok else "unexpected end of expression")

    if not toks:
        raise ParseError("empty expression")
    v = expr()
    if pos != len(toks):
        raise ParseError(f"trailing input after position {pos}")
    return v


def scalar(x, registry):
    """Coerce ints, Fractions, field elements, expression strings and scalars."""
    if isinstance(x, PeriodScalar):
        return x
    if isinstance(x, str):
        return parse_scalar(x, registry)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return PeriodScalar.constant(x, registry)
