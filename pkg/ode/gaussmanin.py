"""
ellsurf/ode/gaussmanin.py

The Gauss-Manin Reducer.
------------------------
Derives the Picard-Fuchs operator D^2 + pD + q of the fibrewise form
dx/y by reducing t-derivatives of dx/y in de Rham cohomology of the generic
fibre, and turns sections into the rational functions Z = Lambda(f) with
f the abelian integral from the zero section.

Research Note:
Classes are kept as A(x) dx / y^(2k+1) with A in K(X)[x]. Each reduction step
records the exact form it throws away; Manin's map evaluates the sum of
those primitives at the section instead of discarding them.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Tuple

import mpmath
from sympy import Rational, sqrt

from algebra.exactcore import (
    EllSurfError, Place, RatFunc, factor, degree, local_series, sort_places, valuation,
)
from surface.weiermodel import (
    Isotrivial, Section, WeierstrassModel, bad_places, check_section, cubic_model,
    invariants, shifted_y, validate,
)

logger = logging.getLogger(__name__)


# --- Errors ---

class NonGenericReduction(EllSurfError):
    def __init__(self, message: str = "Bezout step failed: f and df/dx are not coprime"):
        super().__init__(message)


class ZeroGauge(EllSurfError):
    def __init__(self):
        super().__init__("gauge factor must be nonzero")


class IrregularSingularity(EllSurfError):
    def __init__(self, place: Place):
        self.place = place
        super().__init__(f"operator is not Fuchsian at {place}")


class NonRationalExponents(EllSurfError):
    def __init__(self, place: Place):
        self.place = place
        super().__init__(f"local exponents at {place} are not rational")


# --- Polynomials in x over K(X) ---

@dataclass(frozen=True)
class FiberPoly:
    """Polynomial in the fibre coordinate x; coefficients low to high, trimmed."""
    coeffs: Tuple[RatFunc, ...]

    @classmethod
    def of(cls, *coeffs) -> "FiberPoly":
        cs = [RatFunc.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        return cls(tuple(cs))

    @classmethod
    def monomial(cls, n: int, c=1) -> "FiberPoly":
        return cls.of(*([0] * n + [c]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RatFunc:
        return self.coeffs[-1]

    def coeff(self, i: int) -> RatFunc:
        return self.coeffs[i] if i < len(self.coeffs) else RatFunc.zero()

    def __add__(self, other: "FiberPoly") -> "FiberPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return FiberPoly.of(*(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __neg__(self) -> "FiberPoly":
        return FiberPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "FiberPoly") -> "FiberPoly":
        return self + (-other)

    def __mul__(self, other) -> "FiberPoly":
        if not isinstance(other, FiberPoly):
            c = RatFunc.coerce(other)
            return FiberPoly.of(*(a * c for a in self.coeffs))
        if self.is_zero or other.is_zero:
            return FiberPoly(())
        out = [RatFunc.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return FiberPoly.of(*out)

    __rmul__ = __mul__

    def divmod(self, g: "FiberPoly") -> Tuple["FiberPoly", "FiberPoly"]:
        if g.is_zero:
            raise ZeroDivisionError("division by the zero fibre polynomial")
        rem = list(self.coeffs)
        quo = [RatFunc.zero()] * max(len(rem) - g.degree, 0)
        inv = RatFunc.one() / g.lc
        for k in range(len(rem) - 1, g.degree - 1, -1):
            c = rem[k] * inv
            if c.is_zero:
                continue
            quo[k - g.degree] = c
            for i, b in enumerate(g.coeffs):
                rem[k - g.degree + i] = rem[k - g.degree + i] - c * b
        return FiberPoly.of(*quo), FiberPoly.of(*rem[:g.degree])

    def __mod__(self, g: "FiberPoly") -> "FiberPoly":
        return self.divmod(g)[1]

    def diff_x(self) -> "FiberPoly":
        return FiberPoly.of(*(c * i for i, c in enumerate(self.coeffs) if i))

    def diff_t(self) -> "FiberPoly":
        return FiberPoly.of(*(c.diff() for c in self.coeffs))

    def evaluate(self, X: RatFunc) -> RatFunc:
        acc = RatFunc.zero()
        for c in reversed(self.coeffs):
            acc = acc * X + c
        return acc

    def __str__(self) -> str:
        terms = [f"({c})*x^{i}" for i, c in enumerate(self.coeffs) if not c.is_zero]
        return " + ".join(terms) or "0"


# An exact primitive is a sum of terms num(x) / y^power (power odd, -1 means num * y).
Primitive = Tuple[Tuple[FiberPoly, int], ...]


def evaluate_primitive(terms: Primitive, X: RatFunc, Y: RatFunc) -> RatFunc:
    total = RatFunc.zero()
    for num, power in terms:
        total = total + num.evaluate(X) / Y ** power
    return total


def scale_primitive(terms: Primitive, c: RatFunc) -> Primitive:
    return tuple((num * c, power) for num, power in terms)


def _bezout_inverse(f: FiberPoly, fx: FiberPoly) -> FiberPoly:
    """s with s * fx = 1 mod f."""
    r0, r1 = f, fx
    s0, s1 = FiberPoly(()), FiberPoly.of(1)
    while not r1.is_zero:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
    if r0.degree != 0:
        raise NonGenericReduction()
    return s0 * (RatFunc.one() / r0.lc)


class _Reducer:
    """Reduces A dx / y^(2k+1) to (R + S x) dx / y plus an exact part."""

    def __init__(self, f: FiberPoly):
        self.f = f
        self.fx = f.diff_x()
        self.s = _bezout_inverse(f, self.fx)

    def reduce(self, A: FiberPoly, k: int) -> Tuple[FiberPoly, Primitive]:
        exact: List[Tuple[FiberPoly, int]] = []
        while k >= 1:
            beta = (A * self.s) % self.f
            alpha, rest = (A - beta * self.fx).divmod(self.f)
            if not rest.is_zero:
                raise NonGenericReduction("pole-order reduction left a remainder")
            c = Rational(2, 2 * k - 1)
            A = alpha + beta.diff_x() * c
            if not beta.is_zero:
                exact.append((beta * (-c), 2 * k - 1))
            k -= 1
        while A.degree >= 2:
            m = A.degree - 2
            G = FiberPoly.monomial(m) * self.fx * Rational(1, 2)
            if m:
                G = G + FiberPoly.monomial(m - 1, m) * self.f
            c = A.lc / G.lc
            A = A - G * c
            exact.append((FiberPoly.monomial(m, c), -1))
        return A, tuple(exact)


# --- Operators ---

@dataclass(frozen=True)
class DiffOp2:
    """The operator D^2 + p D + q, D = d/dt."""
    p: RatFunc
    q: RatFunc

    def apply(self, f: RatFunc) -> RatFunc:
        d1 = f.diff()
        return d1.diff() + self.p * d1 + self.q * f

    def singular_places(self) -> List[Place]:
        places = set()
        for c in (self.p, self.q):
            if degree(c.den) > 0:
                _, facs = factor(c.den)
                places.update(Place(g) for g, _ in facs)
        if not self.is_ordinary_at_infinity():
            places.add(Place.infinity())
        return sort_places(places)

    def is_ordinary_at_infinity(self) -> bool:
        inf = Place.infinity()
        # f(1/u) satisfies f'' + (2/u - p(1/u)/u^2) f' + q(1/u)/u^4 f = 0
        if valuation(self.q, inf) < 4:
            return False
        vp = valuation(self.p, inf)
        if vp < 1:
            return False
        return local_series(self.p, inf, 1, 1)[0] == 2

    def __str__(self) -> str:
        return f"D^2 + ({self.p}) D + ({self.q})"


@dataclass(frozen=True)
class GaussManinSystem:
    """Picard-Fuchs operator with the exact primitives of its reduction."""
    cubic: FiberPoly
    d1: Tuple[FiberPoly, Primitive]
    d2: Tuple[FiberPoly, Primitive]
    operator: DiffOp2

    @property
    def homotopy(self) -> Primitive:
        """H with Lambda(dx/y) = dH on the generic fibre."""
        return self.d2[1] + scale_primitive(self.d1[1], self.operator.p)


@lru_cache(maxsize=64)
def gauss_manin(model: WeierstrassModel) -> GaussManinSystem:
    validate(model)
    a, b, c = cubic_model(model)
    f = FiberPoly.of(c, b, a, 1)
    ft = f.diff_t()
    reducer = _Reducer(f)
    # D(dx/y) = -1/2 f_t dx/y^3
    N1, E1 = reducer.reduce(ft * Rational(-1, 2), 1)
    # D^2(dx/y) = (-1/2 f_tt f + 3/4 f_t^2) dx / y^5
    raw2 = ft.diff_t() * f * Rational(-1, 2) + ft * ft * Rational(3, 4)
    N2, E2 = reducer.reduce(raw2, 2)
    S1 = N1.coeff(1)
    if S1.is_zero:
        # j constant: D(dx/y) is proportional to dx/y
        raise Isotrivial(invariants(model).j)
    p = -N2.coeff(1) / S1
    q = -N2.coeff(0) - p * N1.coeff(0)
    logger.debug("[GM] D omega = %s ; D^2 omega = %s", N1, N2)
    op = DiffOp2(p, q)
    logger.info("[GM] Picard-Fuchs operator %s", op)
    return GaussManinSystem(f, (N1, E1), (N2, E2), op)


def picard_fuchs(model: WeierstrassModel) -> DiffOp2:
    return gauss_manin(model).operator


def gauge_transform(op: DiffOp2, g) -> DiffOp2:
    """Operator whose solutions are g times the solutions of op."""
    g = RatFunc.coerce(g)
    if g.is_zero:
        raise ZeroGauge()
    h = g.diff() / g
    h2 = g.diff().diff() / g
    return DiffOp2(op.p - 2 * h, op.q - op.p * h + 2 * h * h - h2)


# --- Local theory ---

@dataclass(frozen=True)
class LocalOperator:
    """theta^2-form theta(theta-1) + a(u) theta + b(u) at a place, theta = u d/du."""
    place: Place
    a: Tuple
    b: Tuple

    def indicial(self, s):
        return s * (s - 1) + self.a[0] * s + self.b[0]


def check_fuchsian(op: DiffOp2, place: Place) -> None:
    if place.is_infinity:
        ok = valuation(op.p, place) >= 1 and valuation(op.q, place) >= 2
    else:
        ok = valuation(op.p, place) >= -1 and valuation(op.q, place) >= -2
    if not ok:
        raise IrregularSingularity(place)


def local_operator(op: DiffOp2, place: Place, count: int) -> LocalOperator:
    check_fuchsian(op, place)
    if place.is_infinity:
        pa = local_series(op.p, place, 1, count)
        a = [-c for c in pa]
        a[0] = a[0] + 2
        b = local_series(op.q, place, 2, count)
    else:
        a = local_series(op.p, place, -1, count)
        b = local_series(op.q, place, -2, count)
    return LocalOperator(place, tuple(a), tuple(b))


def rhs_shift(place: Place) -> int:
    """Coefficient n of the local right-hand side is coefficient n + shift of Z."""
    return 2 if place.is_infinity else -2


@lru_cache(maxsize=1024)
def local_exponents(op: DiffOp2, place: Place) -> Tuple[Rational, Rational]:
    loc = local_operator(op, place, 1)
    a0, b0 = loc.a[0], loc.b[0]
    if not (a0.is_rational and b0.is_rational):
        raise NonRationalExponents(place)
    a0, b0 = a0.to_rational(), b0.to_rational()
    root = sqrt((a0 - 1) ** 2 - 4 * b0)
    if not root.is_Rational:
        raise NonRationalExponents(place)
    r1 = (1 - a0 - root) / 2
    r2 = (1 - a0 + root) / 2
    return (Rational(r1), Rational(r2))


def fuchs_defect(op: DiffOp2) -> Rational:
    """sum over singular places of degree * (rho1 + rho2 - 1), plus 2; zero for Fuchsian ops."""
    total = Rational(2)
    for place in op.singular_places():
        r1, r2 = local_exponents(op, place)
        total += place.degree * (r1 + r2 - 1)
    return total


@dataclass(frozen=True)
class SingPoint:
    place: Place
    exponents: Tuple[Rational, Rational]
    kind: str  # "TrueSingular" | "Apparent"
    logarithmic: bool

    @property
    def is_apparent(self) -> bool:
        return self.kind == "Apparent"


def classify_singularity(op: DiffOp2, place: Place, model: WeierstrassModel) -> SingPoint:
    from ode.localsolve import frobenius_basis

    r1, r2 = local_exponents(op, place)
    gap = r2 - r1
    logarithmic = False
    if gap.is_integer:
        _, y2 = frobenius_basis(op, place, int(gap) + 2)
        logarithmic = y2.log_degree == 1
    apparent = (place not in bad_places(model) and r1.is_integer and r1 >= 0
                and r2.is_integer and not logarithmic)
    kind = "Apparent" if apparent else "TrueSingular"
    logger.debug("[GM] %s: exponents (%s, %s) %s log=%s", place, r1, r2, kind, logarithmic)
    return SingPoint(place, (r1, r2), kind, logarithmic)


# --- Manin's map ---

def manin_map(model: WeierstrassModel, op: DiffOp2, s: Section) -> RatFunc:
    """Z = Lambda(f) with f(t) the integral of dx/y from the zero section to s(t)."""
    check_section(model, s)
    system = gauss_manin(model)
    if op != system.operator:
        raise ValueError("operator is not the Picard-Fuchs operator of this model")
    if s.is_zero:
        return RatFunc.zero()
    X = s.X
    Y = shifted_y(model, s.X, s.Y)
    if Y.is_zero:
        # 2-torsion: f is a half period
        return RatFunc.zero()
    X1 = X.diff()
    ft = system.cubic.diff_t().evaluate(X)
    Z = (X1.diff() / Y - X1 * Y.diff() / (Y * Y) - X1 * ft / (2 * Y ** 3)
         + op.p * X1 / Y + evaluate_primitive(system.homotopy, X, Y))
    logger.info("[GM] manin %s -> %s", s, Z)
    return Z


# --- Period oracle ---

def legendre_period(lam):
    """Hypergeometric period 2F1(1/2, 1/2; 1; lam) = 1 / agm(1, sqrt(1 - lam))."""
    return 1 / mpmath.agm(1, mpmath.sqrt(1 - lam))


def _eval_mp(f: RatFunc, x):
    num = mpmath.polyval([mpmath.mpf(c.p) / c.q for c in f.num.all_coeffs()], x)
    den = mpmath.polyval([mpmath.mpf(c.p) / c.q for c in f.den.all_coeffs()], x)
    return num / den


def operator_residual(op: DiffOp2, func, t0, dps: int = 30) -> float:
    """Relative size of op(func) at t0, with derivatives by mpmath.diff."""
    with mpmath.workdps(dps):
        t0 = mpmath.mpf(t0.p) / t0.q if isinstance(t0, Rational) else mpmath.mpf(t0)
        f0 = func(t0)
        f1 = mpmath.diff(func, t0, 1)
        f2 = mpmath.diff(func, t0, 2)
        terms = [f2, _eval_mp(op.p, t0) * f1, _eval_mp(op.q, t0) * f0]
        scale = max(abs(x) for x in terms)
        return float(abs(sum(terms)) / scale)
