"""Exact arithmetic over Q and simple number fields K = Q[x]/(f).

Elements of Q are plain :class:`fractions.Fraction` values.  Elements of a
proper extension are :class:`FieldElem` instances holding coordinates over
the power basis ``1, a, ..., a^(d-1)``.
"""

from fractions import Fraction
from numbers import Rational

MAX_CHECKED_DEGREE = 8


class FieldError(ValueError):
    pass


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = [Fraction(c) for c in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = Fraction(b[-1])
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
    return _trim(q), _trim(a)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _poly_sub(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_inverse_mod(g, f):
    # extended Euclid in Q[x]
    r0, r1 = _trim(f), _trim(g)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible modulo the defining polynomial")
    c = r0[0]
    return [x / c for x in s0]


def check_irreducible(coeffs):
    """Raise FieldError unless the monic integer-coefficient polynomial is irreducible over Q."""
    import sympy

    deg = len(coeffs) - 1
    if deg < 1:
        raise FieldError("defining polynomial must have degree >= 1")
    if deg > MAX_CHECKED_DEGREE:
        raise FieldError(
            f"defining polynomial of degree {deg} exceeds the irreducibility check bound "
            f"{MAX_CHECKED_DEGREE}"
        )
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), x)
    # rational roots first: cheap and gives a readable error
    for root in sympy.roots(poly, filter="Q"):
        raise FieldError(f"defining polynomial has the rational root {root}")
    _, factors = sympy.factor_list(poly)
    if len(factors) != 1 or factors[0][1] != 1:
        raise FieldError(f"defining polynomial factors over Q: {factors}")


class NumberField:
    """The field Q (``minpoly=None``) or Q[x]/(f) for a monic irreducible f.

    ``minpoly`` lists the coefficients of f from the constant term up.
    """

    def __init__(self, minpoly=None, name="a", check=True):
        self.name = name
        if minpoly is None or len(minpoly) == 2:
            self.minpoly = (Fraction(0), Fraction(1)) if minpoly is None else tuple(map(Fraction, minpoly))
            if self.minpoly[-1] != 1:
                raise FieldError("defining polynomial must be monic")
            self.degree = 1
            return
        coeffs = tuple(Fraction(c) for c in minpoly)
        if coeffs[-1] != 1:
            raise FieldError("defining polynomial must be monic")
        if any(c.denominator != 1 for c in coeffs):
            raise FieldError("defining polynomial must have integer coefficients")
        if check:
            check_irreducible(coeffs)
        self.minpoly = coeffs
        self.degree = len(coeffs) - 1

    @property
    def is_rational(self):
        return self.degree == 1

    def __eq__(self, other):
        return isinstance(other, NumberField) and (self.minpoly, self.name) == (other.minpoly, other.name)

    def __hash__(self):
        return hash((self.minpoly, self.name))

    def __repr__(self):
        if self.is_rational:
            return "QQ"
        return f"NumberField({[str(c) for c in self.minpoly]}, name={self.name!r})"

    def __call__(self, value):
        """Coerce an int, Fraction, coordinate sequence or FieldElem into the field."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (Rational, str)):
            value = Fraction(value)
            return value if self.is_rational else FieldElem(self, (value,))
        coords = tuple(Fraction(c) for c in value)
        if self.is_rational:
            if len(coords) != 1:
                raise FieldError("rational elements have a single coordinate")
            return coords[0]
        return FieldElem(self, coords)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        if self.is_rational:
            return -self.minpoly[0]
        return FieldElem(self, (Fraction(0), Fraction(1)))

    def coords(self, x):
        """Rational coordinates of x over the power basis (length = degree)."""
        if isinstance(x, FieldElem):
            c = x.coords
            return c + (Fraction(0),) * (self.degree - len(c))
        x = Fraction(x)
        return (x,) + (Fraction(0),) * (self.degree - 1)

    def is_rational_element(self, x):
        return not isinstance(x, FieldElem) or all(c == 0 for c in x.coords[1:])

    def to_rational(self, x):
        if not self.is_rational_element(x):
            raise FieldError(f"{x} is not rational")
        return x.coords[0] if isinstance(x, FieldElem) else Fraction(x)

    def format(self, x):
        if not isinstance(x, FieldElem):
            return str(Fraction(x))
        return x._format()


QQ = NumberField()


class FieldElem:
    """Element of a proper number field, reduced modulo the defining polynomial."""

    __slots__ = ("field", "coords")

    def __init__(self, field, coords):
        coords = [Fraction(c) for c in coords]
        d = field.degree
        if len(coords) > d:
            _, coords = _poly_divmod(coords, field.minpoly)
        coords = list(coords) + [Fraction(0)] * (d - len(coords))
        self.field = field
        self.coords = tuple(coords)

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError("mixed number fields")
            return other
        if isinstance(other, Rational):
            return FieldElem(self.field, (Fraction(other),))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElem(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prod = _poly_mul(_trim(self.coords), _trim(other.coords))
        return FieldElem(self.field, prod)

    __rmul__ = __mul__

    def inverse(self):
        if not self:
            raise ZeroDivisionError("inverse of zero in a number field")
        return FieldElem(self.field, _poly_inverse_mod(_trim(self.coords), self.field.minpoly))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = FieldElem(self.field, (Fraction(1),)), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.coords == other.coords

    def __hash__(self):
        if all(c == 0 for c in self.coords[1:]):
            return hash(self.coords[0])
        return hash(self.coords)

    def _format(self):
        name = self.field.name
        parts = []
        for i in reversed(range(len(self.coords))):
            c = self.coords[i]
            if not c:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        if not parts:
            return "0"
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"FieldElem({self._format()})"

    __str__ = _format
