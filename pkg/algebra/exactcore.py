"""
ellsurf/algebra/exactcore.py

The Exact Core.
---------------
Rationals, univariate polynomials over QQ, the rational function field
K(X) = Q(t), places of the projective line with their residue fields, and
local (Laurent) expansions at a place.

Research Note:
Everything here is immutable. Rational functions are stored reduced with a
monic denominator so that `==` is a canonical test; every layer above
(Weierstrass models, differential operators, cohomology) relies on it.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from sympy import Poly, QQ, Rational, Symbol, fraction, sympify, together

# Configuration
T = Symbol("t")
VAL_INFINITY = math.inf  # valuation of the zero function

Rat = Rational
Scalar = Union[int, Rational]


# --- Errors ---

class EllSurfError(Exception):
    """Root of every domain failure raised by the library."""


class ZeroPolynomial(EllSurfError):
    def __init__(self, message: str = "operation undefined on the zero polynomial"):
        super().__init__(message)


class NotIrreducible(EllSurfError):
    def __init__(self, poly):
        self.poly = poly
        super().__init__(f"not a monic irreducible polynomial: {poly.as_expr()}")


# --- Polynomials ---

def to_rat(value) -> Rational:
    """Coerce ints, sympy numbers and strings like '3/4' to an exact Rational."""
    r = sympify(value)
    if not r.is_Rational:
        raise TypeError(f"not an exact rational: {value!r}")
    return Rational(r)


def poly(coeffs: List[Scalar]) -> Poly:
    """Build a polynomial in t from coefficients listed from degree 0 upward."""
    if not coeffs:
        return Poly(0, T, domain=QQ)
    return Poly.from_list([to_rat(c) for c in reversed(coeffs)], T, domain=QQ)


def poly_from_expr(expr) -> Poly:
    return Poly(expr, T, domain=QQ)


def degree(p: Poly) -> int:
    """Degree with deg(0) = -1."""
    return -1 if p.is_zero else p.degree()


def coefficients(p: Poly) -> List[Rational]:
    """Coefficients from degree 0 upward (empty for the zero polynomial)."""
    if p.is_zero:
        return []
    return list(reversed(p.all_coeffs()))


def poly_gcd(a: Poly, b: Poly) -> Poly:
    g = a.gcd(b)
    if g.is_zero:
        return g
    return g.monic()


def factor(p: Poly) -> Tuple[Rational, List[Tuple[Poly, int]]]:
    """
    Factor over QQ into content times monic irreducible factors.
    Factors are sorted by (degree, coefficients) so output is deterministic.
    """
    if p.is_zero:
        raise ZeroPolynomial()
    content, factors = p.factor_list()
    content = Rational(content)
    result = []
    for f, mult in factors:
        lc = f.LC()
        content *= Rational(lc) ** mult
        result.append((f.set_domain(QQ).monic(), mult))
    result.sort(key=lambda fm: (degree(fm[0]), [str(c) for c in fm[0].all_coeffs()]))
    return content, result


_ZERO = Poly(0, T, domain=QQ)
_ONE = Poly(1, T, domain=QQ)


def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if den.is_zero:
        raise ZeroDivisionError("rational function with zero denominator")
    if num.is_zero:
        return _ZERO, _ONE
    g = num.gcd(den)
    if degree(g) > 0:
        num = num.exquo(g)
        den = den.exquo(g)
    lc = den.LC()
    if lc != 1:
        num = num.quo_ground(lc)
        den = den.quo_ground(lc)
    return num, den


# --- Rational functions ---

@dataclass(frozen=True)
class RatFunc:
    """An element of K(X) = Q(t), kept reduced with monic denominator."""
    num: Poly
    den: Poly

    @classmethod
    def make(cls, num, den=None) -> "RatFunc":
        num = num.set_domain(QQ) if isinstance(num, Poly) else poly_from_expr(num)
        if den is None:
            den = _ONE
        else:
            den = den.set_domain(QQ) if isinstance(den, Poly) else poly_from_expr(den)
        n, d = _reduce(num, den)
        return cls(n, d)

    @classmethod
    def const(cls, c: Scalar) -> "RatFunc":
        return cls.make(Poly(to_rat(c), T, domain=QQ))

    @classmethod
    def zero(cls) -> "RatFunc":
        return cls(_ZERO, _ONE)

    @classmethod
    def one(cls) -> "RatFunc":
        return cls(_ONE, _ONE)

    @classmethod
    def var(cls) -> "RatFunc":
        return cls(Poly(T, T, domain=QQ), _ONE)

    @classmethod
    def from_expr(cls, expr) -> "RatFunc":
        """Build from a sympy expression in `T`."""
        n, d = fraction(together(sympify(expr)))
        return cls.make(poly_from_expr(n), poly_from_expr(d))

    # Coercion
    @staticmethod
    def coerce(other) -> "RatFunc":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, Poly):
            return RatFunc.make(other)
        return RatFunc.const(other)

    # Predicates
    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_constant(self) -> bool:
        return degree(self.num) <= 0 and degree(self.den) == 0

    def constant_value(self) -> Rational:
        if not self.is_constant:
            raise ValueError(f"not a constant: {self}")
        return Rational(self.num.LC()) if not self.is_zero else Rational(0)

    # Arithmetic
    def __add__(self, other) -> "RatFunc":
        o = RatFunc.coerce(other)
        if self.den == o.den:
            return RatFunc.make(self.num + o.num, self.den)
        return RatFunc.make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __sub__(self, other) -> "RatFunc":
        return self + (-RatFunc.coerce(other))

    def __rsub__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) - self

    def __mul__(self, other) -> "RatFunc":
        o = RatFunc.coerce(other)
        if self.is_zero or o.is_zero:
            return RatFunc.zero()
        return RatFunc.make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RatFunc":
        o = RatFunc.coerce(other)
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc.make(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) / self

    def __pow__(self, n: int) -> "RatFunc":
        if n < 0:
            return RatFunc.one() / (self ** (-n))
        return RatFunc(self.num ** n, self.den ** n) if n else RatFunc.one()

    def diff(self) -> "RatFunc":
        """d/dt."""
        n, d = self.num, self.den
        return RatFunc.make(n.diff(T) * d - n * d.diff(T), d * d)

    def eval(self, a: Scalar) -> Rational:
        a = to_rat(a)
        d = self.den.eval(a)
        if d == 0:
            raise ZeroDivisionError(f"pole at t = {a}")
        return Rational(self.num.eval(a)) / Rational(d)

    def compose(self, g: "RatFunc") -> "RatFunc":
        """self(g(t))."""
        return _horner(coefficients(self.num), g) / _horner(coefficients(self.den), g)

    def as_expr(self, var: Optional[Symbol] = None):
        e = self.num.as_expr() / self.den.as_expr()
        return e if var is None else e.subs(T, var)

    def height(self) -> int:
        """max(deg num, deg den), the degree of f as a map P1 -> P1."""
        return max(degree(self.num), degree(self.den), 0)

    def __str__(self) -> str:
        return str(self.as_expr())

    def __repr__(self) -> str:
        return f"RatFunc({self})"


def _horner(coeffs: List[Rational], g: RatFunc) -> RatFunc:
    acc = RatFunc.zero()
    for c in reversed(coeffs):
        acc = acc * g + c
    return acc


# --- Places and residue fields ---

@dataclass(frozen=True)
class ResidueField:
    """Q[t]/(modulus); the modulus is monic irreducible."""
    modulus: Poly

    @property
    def degree(self) -> int:
        return degree(self.modulus)

    def __call__(self, value) -> "ResidueElem":
        if isinstance(value, ResidueElem):
            return value
        if isinstance(value, Poly):
            return ResidueElem(value.rem(self.modulus), self)
        return ResidueElem(Poly(to_rat(value), T, domain=QQ), self)

    @property
    def zero(self) -> "ResidueElem":
        return self(0)

    @property
    def one(self) -> "ResidueElem":
        return self(1)

    @property
    def generator(self) -> "ResidueElem":
        """The class of t."""
        return self(Poly(T, T, domain=QQ))


@dataclass(frozen=True)
class ResidueElem:
    rep: Poly
    field: ResidueField

    def _lift(self, other) -> "ResidueElem":
        return self.field(other)

    @property
    def is_zero(self) -> bool:
        return self.rep.is_zero

    def __add__(self, other) -> "ResidueElem":
        o = self._lift(other)
        return ResidueElem(self.rep + o.rep, self.field)

    __radd__ = __add__

    def __neg__(self) -> "ResidueElem":
        return ResidueElem(-self.rep, self.field)

    def __sub__(self, other) -> "ResidueElem":
        o = self._lift(other)
        return ResidueElem(self.rep - o.rep, self.field)

    def __rsub__(self, other) -> "ResidueElem":
        return self._lift(other) - self

    def __mul__(self, other) -> "ResidueElem":
        o = self._lift(other)
        if self.field.degree == 1:
            return ResidueElem(self.rep * o.rep, self.field)
        return ResidueElem((self.rep * o.rep).rem(self.field.modulus), self.field)

    __rmul__ = __mul__

    def inverse(self) -> "ResidueElem":
        if self.is_zero:
            raise ZeroDivisionError("zero has no inverse in a residue field")
        if self.field.degree == 1:
            return ResidueElem(Poly(1 / self.rep.LC(), T, domain=QQ), self.field)
        return ResidueElem(self.rep.invert(self.field.modulus), self.field)

    def __truediv__(self, other) -> "ResidueElem":
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other) -> "ResidueElem":
        return self._lift(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, ResidueElem):
            return self.field == other.field and self.rep == other.rep
        try:
            return self.rep == self._lift(other).rep
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash((self.rep, self.field))

    @property
    def is_rational(self) -> bool:
        return degree(self.rep) <= 0

    def to_rational(self) -> Rational:
        if not self.is_rational:
            raise ValueError(f"residue element {self} is not rational")
        return Rational(self.rep.LC()) if not self.is_zero else Rational(0)

    def coordinates(self) -> List[Rational]:
        """Coordinates on the basis 1, t, ..., t^(d-1)."""
        cs = coefficients(self.rep)
        return [Rational(c) for c in cs] + [Rational(0)] * (self.field.degree - len(cs))

    def __str__(self) -> str:
        return str(self.rep.as_expr())

    __repr__ = __str__


@dataclass(frozen=True)
class Place:
    """A closed point of P1 over Q: a monic irreducible pi, or infinity (pi=None)."""
    pi: Optional[Poly] = None

    @classmethod
    def finite(cls, pi: Poly) -> "Place":
        if degree(pi) < 1 or pi.LC() != 1 or not pi.is_irreducible:
            raise NotIrreducible(pi)
        return cls(pi)

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @property
    def is_infinity(self) -> bool:
        return self.pi is None

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else degree(self.pi)

    @property
    def residue_field(self) -> ResidueField:
        if self.pi is None:
            return ResidueField(Poly(T, T, domain=QQ))
        return ResidueField(self.pi)

    def sort_key(self):
        if self.pi is None:
            return (1, 0, [])
        return (0, self.degree, [str(c) for c in self.pi.all_coeffs()])

    def render(self, var: Symbol = T) -> str:
        if self.pi is None:
            return "infinity"
        return str(self.pi.as_expr().subs(T, var))

    def __str__(self) -> str:
        return self.render()

    __repr__ = __str__


def sort_places(places) -> List[Place]:
    return sorted(set(places), key=Place.sort_key)


# --- Valuations ---

def _multiplicity(p: Poly, pi: Poly) -> int:
    k = 0
    while not p.is_zero:
        q, r = p.div(pi)
        if not r.is_zero:
            break
        p = q
        k += 1
    return k


def valuation(f: RatFunc, place: Place):
    """Order of f at the place; VAL_INFINITY for f = 0."""
    if f.is_zero:
        return VAL_INFINITY
    if place.is_infinity:
        return degree(f.den) - degree(f.num)
    return _multiplicity(f.num, place.pi) - _multiplicity(f.den, place.pi)


def divisor(f: RatFunc) -> Dict[Place, int]:
    """The principal divisor of a nonzero f: place -> nonzero order."""
    if f.is_zero:
        raise ZeroPolynomial("the zero function has no divisor")
    div: Dict[Place, int] = {}
    for part, sign in ((f.num, 1), (f.den, -1)):
        if degree(part) <= 0:
            continue
        _, facs = factor(part)
        for g, m in facs:
            div[Place(g)] = sign * m
    v_inf = valuation(f, Place.infinity())
    if v_inf:
        div[Place.infinity()] = v_inf
    return div


def finite_poles(f: RatFunc) -> List[Place]:
    if degree(f.den) <= 0:
        return []
    _, facs = factor(f.den)
    return [Place(g) for g, _ in facs]


# --- Local expansions ---

def _taylor_shift(coeffs: List[Rational], alpha: ResidueElem) -> List[ResidueElem]:
    """Coefficients (low to high in u) of p(alpha + u), p given low to high."""
    F = alpha.field
    out: List[ResidueElem] = []
    for c in reversed(coeffs):
        # out <- out * (alpha + u) + c
        shifted = [F.zero] + out
        for i, r in enumerate(out):
            shifted[i] = shifted[i] + alpha * r
        shifted[0] = shifted[0] + c
        out = shifted
    return out


def series_divide(a: List[ResidueElem], b: List[ResidueElem], count: int) -> List[ResidueElem]:
    """First `count` coefficients of a/b as power series; b[0] must be nonzero."""
    F = b[0].field
    inv = b[0].inverse()
    q: List[ResidueElem] = []
    for k in range(count):
        acc = a[k] if k < len(a) else F.zero
        for j in range(1, min(k, len(b) - 1) + 1):
            acc = acc - b[j] * q[k - j]
        q.append(acc * inv)
    return q


def _strip(series: List[ResidueElem]) -> Tuple[int, List[ResidueElem]]:
    for i, c in enumerate(series):
        if not c.is_zero:
            return i, series[i:]
    raise ZeroPolynomial("local expansion of zero")


@lru_cache(maxsize=4096)
def laurent_expansion(f: RatFunc, place: Place, count: int) -> Tuple[int, Tuple[ResidueElem, ...]]:
    """
    Expand f in the local uniformizer u at the place.
    Returns (order, c) with f = u^order * (c[0] + c[1] u + ...), c[0] != 0,
    truncated to `count` terms. At a finite place u = t - alpha with alpha the
    class of t in the residue field; at infinity u = 1/t.
    """
    F = place.residue_field
    if f.is_zero:
        return VAL_INFINITY, tuple(F.zero for _ in range(count))
    if place.is_infinity:
        n = [F(c) for c in reversed(coefficients(f.num))]
        d = [F(c) for c in reversed(coefficients(f.den))]
        order = degree(f.den) - degree(f.num)
        return order, tuple(series_divide(n, d, count))
    alpha = F.generator
    vn, n = _strip(_taylor_shift(coefficients(f.num), alpha))
    vd, d = _strip(_taylor_shift(coefficients(f.den), alpha))
    return vn - vd, tuple(series_divide(n, d, count))


def local_series(f: RatFunc, place: Place, start: int, count: int) -> List[ResidueElem]:
    """Coefficients of u^start .. u^(start+count-1) in the expansion of f."""
    F = place.residue_field
    if count <= 0:
        return []
    if f.is_zero:
        return [F.zero] * count
    order, _ = laurent_expansion(f, place, 1)
    needed = start + count - order
    if needed <= 0:
        return [F.zero] * count
    _, cs = laurent_expansion(f, place, needed)
    out = []
    for k in range(start, start + count):
        i = k - order
        out.append(cs[i] if i >= 0 else F.zero)
    return out
