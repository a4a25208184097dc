"""
ellsurf/surface/weiermodel.py

Weierstrass Models over K(X).
-----------------------------
Long Weierstrass equations y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 with
coefficients in Q(t), their b/c invariants, minimalization at a place and
Kodaira classification of the fibre there.

Research Note:
Residue characteristic is zero, so the valuations (v(c4), v(c6), v(Delta))
of a minimal model already decide the Kodaira type; no Tate loop is needed.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Tuple

from sympy import Symbol

from algebra.exactcore import (
    T, EllSurfError, Place, RatFunc, VAL_INFINITY, degree, factor, sort_places, valuation,
)

logger = logging.getLogger(__name__)


# --- Errors ---

class SingularModel(EllSurfError):
    def __init__(self, delta: RatFunc):
        self.delta = delta
        super().__init__("singular model: discriminant vanishes identically")


class Isotrivial(EllSurfError):
    def __init__(self, j: RatFunc):
        self.j = j
        super().__init__(f"isotrivial: j is constant (j = {j})")


class UnclassifiedValuations(EllSurfError):
    def __init__(self, triple: Tuple[int, int, int]):
        self.triple = triple
        super().__init__(f"no Kodaira type for minimal valuations (vc4, vc6, vdelta) = {triple}")


class SectionNotOnCurve(EllSurfError):
    def __init__(self, section: "Section"):
        self.section = section
        super().__init__(f"section {section} does not satisfy the Weierstrass equation")


# --- Models ---

@dataclass(frozen=True)
class WeierstrassModel:
    a1: RatFunc = field(default_factory=RatFunc.zero)
    a2: RatFunc = field(default_factory=RatFunc.zero)
    a3: RatFunc = field(default_factory=RatFunc.zero)
    a4: RatFunc = field(default_factory=RatFunc.zero)
    a6: RatFunc = field(default_factory=RatFunc.zero)

    @classmethod
    def long(cls, a1=0, a2=0, a3=0, a4=0, a6=0) -> "WeierstrassModel":
        c = RatFunc.coerce
        return cls(c(a1), c(a2), c(a3), c(a4), c(a6))

    @classmethod
    def short(cls, A, B) -> "WeierstrassModel":
        return cls.long(a4=A, a6=B)

    @property
    def coefficients(self) -> Tuple[RatFunc, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def twist(self, u) -> "WeierstrassModel":
        """Rescale x -> u^2 x, y -> u^3 y: a_i -> u^i a_i."""
        u = RatFunc.coerce(u)
        return WeierstrassModel(self.a1 * u, self.a2 * u ** 2, self.a3 * u ** 3,
                                self.a4 * u ** 4, self.a6 * u ** 6)

    def substitute(self, g: RatFunc) -> "WeierstrassModel":
        """Pull back along the base change t -> g(t)."""
        return WeierstrassModel(*(a.compose(g) for a in self.coefficients))

    def equation_residual(self, X: RatFunc, Y: RatFunc) -> RatFunc:
        a1, a2, a3, a4, a6 = self.coefficients
        return Y * Y + a1 * X * Y + a3 * Y - (X ** 3 + a2 * X * X + a4 * X + a6)

    def render(self, var: Symbol = T) -> str:
        names = ("a1", "a2", "a3", "a4", "a6")
        return ", ".join(f"{n} = {a.as_expr(var)}" for n, a in zip(names, self.coefficients)
                         if not a.is_zero)

    def __str__(self) -> str:
        return self.render()


@dataclass(frozen=True)
class Invariants:
    b2: RatFunc
    b4: RatFunc
    b6: RatFunc
    b8: RatFunc
    c4: RatFunc
    c6: RatFunc
    delta: RatFunc
    j: RatFunc


@lru_cache(maxsize=256)
def invariants(model: WeierstrassModel) -> Invariants:
    a1, a2, a3, a4, a6 = model.coefficients
    b2 = a1 * a1 + 4 * a2
    b4 = a1 * a3 + 2 * a4
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2 ** 3) + 36 * b2 * b4 - 216 * b6
    delta = -(b2 * b2 * b8) - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if delta.is_zero:
        raise SingularModel(delta)
    j = c4 ** 3 / delta
    return Invariants(b2, b4, b6, b8, c4, c6, delta, j)


def validate(model: WeierstrassModel, allow_isotrivial: bool = False) -> None:
    """
    Gate for every downstream stage. With allow_isotrivial the model may have
    constant j as long as it has at least one singular fibre; constant
    families are always rejected.
    """
    inv = invariants(model)
    if not inv.j.is_constant:
        return
    if allow_isotrivial and bad_places(model):
        logger.info("[WM] isotrivial model admitted: j = %s", inv.j)
        return
    raise Isotrivial(inv.j)


# --- Kodaira types ---

# tag -> (components m, Euler contribution, monodromy trace); I_n and I_n* are computed
_ADDITIVE = {
    "II": (1, 2, 1),
    "III": (2, 3, 0),
    "IV": (3, 4, -1),
    "IV*": (7, 8, -1),
    "III*": (8, 9, 0),
    "II*": (9, 10, 1),
}


@dataclass(frozen=True)
class KodairaType:
    tag: str          # "I", "I*" or one of the additive tags above
    n: int = 0

    @property
    def name(self) -> str:
        if self.tag == "I":
            return f"I{self.n}"
        if self.tag == "I*":
            return f"I{self.n}*"
        return self.tag

    @classmethod
    def parse(cls, name: str) -> "KodairaType":
        if name in _ADDITIVE:
            return cls(name)
        star = name.endswith("*")
        digits = name[1:-1] if star else name[1:]
        if not name.startswith("I") or not digits.isdigit():
            raise ValueError(f"unknown Kodaira type {name!r}")
        return cls("I*" if star else "I", int(digits))

    @property
    def components(self) -> int:
        if self.tag == "I":
            return max(self.n, 1)
        if self.tag == "I*":
            return 5 + self.n
        return _ADDITIVE[self.tag][0]

    @property
    def euler(self) -> int:
        if self.tag == "I":
            return self.n
        if self.tag == "I*":
            return 6 + self.n
        return _ADDITIVE[self.tag][1]

    @property
    def trace(self) -> int:
        if self.tag == "I":
            return 2
        if self.tag == "I*":
            return -2
        return _ADDITIVE[self.tag][2]

    def __str__(self) -> str:
        return self.name


def kodaira_type(vc4, vc6, vdelta: int) -> KodairaType:
    if vdelta == 0:
        return KodairaType("I", 0)
    if vc4 == 0:
        return KodairaType("I", vdelta)
    if vc6 == 1 and vdelta == 2:
        return KodairaType("II")
    if vc4 == 1 and vdelta == 3:
        return KodairaType("III")
    if vc6 == 2 and vdelta == 4:
        return KodairaType("IV")
    if vdelta == 6 and vc4 >= 2 and vc6 >= 3 and (vc4 == 2 or vc6 == 3):
        return KodairaType("I*", 0)
    if vc4 == 2 and vc6 == 3 and vdelta > 6:
        return KodairaType("I*", vdelta - 6)
    if vc6 == 4 and vdelta == 8:
        return KodairaType("IV*")
    if vc4 == 3 and vdelta == 9:
        return KodairaType("III*")
    if vc6 == 5 and vdelta == 10:
        return KodairaType("II*")
    raise UnclassifiedValuations((vc4, vc6, vdelta))


# --- Local fibre data ---

@dataclass(frozen=True)
class LocalFiberData:
    place: Place
    type: KodairaType
    vc4: float
    vc6: float
    vdelta: int
    twist: int

    @property
    def m_s(self) -> int:
        return self.type.components

    @property
    def e_loc(self) -> int:
        return self.type.euler

    @property
    def trace(self) -> int:
        return self.type.trace


def _twist_needed(v, weight: int) -> int:
    # smallest k with v + weight*k >= 0
    if v == VAL_INFINITY:
        return -10 ** 9
    return -(v // weight)


def minimalize_at(model: WeierstrassModel, place: Place) -> Tuple[float, float, int, int]:
    """
    Valuations (vc4, vc6, vdelta) of the model twisted by uniformizer^twist,
    with twist minimal such that c4 and c6 are integral at the place.
    """
    inv = invariants(model)
    vc4 = valuation(inv.c4, place)
    vc6 = valuation(inv.c6, place)
    vd = valuation(inv.delta, place)
    k = max(_twist_needed(vc4, 4), _twist_needed(vc6, 6))
    return vc4 + 4 * k, vc6 + 6 * k, vd + 12 * k, k


def _candidate_places(model: WeierstrassModel) -> List[Place]:
    inv = invariants(model)
    polys = [inv.delta.num, inv.delta.den, inv.c4.den, inv.c6.den]
    places = set()
    for p in polys:
        if degree(p) > 0:
            _, facs = factor(p)
            places.update(Place(g) for g, _ in facs)
    return sort_places(places)


@lru_cache(maxsize=256)
def _bad_fibers(model: WeierstrassModel) -> Tuple[LocalFiberData, ...]:
    out = []
    for place in _candidate_places(model) + [Place.infinity()]:
        vc4, vc6, vd, k = minimalize_at(model, place)
        if vd <= 0:
            continue
        kt = kodaira_type(vc4, vc6, vd)
        logger.debug("[WM] place %s: (vc4, vc6, vd) = (%s, %s, %s) twist %s -> %s",
                     place, vc4, vc6, vd, k, kt)
        out.append(LocalFiberData(place, kt, vc4, vc6, vd, k))
    return tuple(out)


def bad_places(model: WeierstrassModel) -> List[Place]:
    return [fd.place for fd in _bad_fibers(model)]


def fiber_data(model: WeierstrassModel) -> List[LocalFiberData]:
    """Kodaira data at every bad place, finite places first, infinity last."""
    return list(_bad_fibers(model))


# --- Sections and the group law ---

@dataclass(frozen=True)
class Section:
    """A point of the generic fibre; X = Y = None is the zero section."""
    X: Optional[RatFunc] = None
    Y: Optional[RatFunc] = None

    @classmethod
    def zero(cls) -> "Section":
        return cls()

    @classmethod
    def of(cls, X, Y) -> "Section":
        return cls(RatFunc.coerce(X), RatFunc.coerce(Y))

    @property
    def is_zero(self) -> bool:
        return self.X is None

    def __str__(self) -> str:
        return "O" if self.is_zero else f"({self.X}, {self.Y})"


def check_section(model: WeierstrassModel, s: Section) -> None:
    if not s.is_zero and not model.equation_residual(s.X, s.Y).is_zero:
        raise SectionNotOnCurve(s)


def negate_section(model: WeierstrassModel, s: Section) -> Section:
    if s.is_zero:
        return s
    return Section(s.X, -s.Y - model.a1 * s.X - model.a3)


def add_sections(model: WeierstrassModel, p: Section, q: Section) -> Section:
    """Chord-tangent law on the long Weierstrass model."""
    if p.is_zero:
        return q
    if q.is_zero:
        return p
    a1, a2, a3, a4, a6 = model.coefficients
    if p.X == q.X:
        if (p.Y + q.Y + a1 * q.X + a3).is_zero:
            return Section.zero()
        denom = 2 * p.Y + a1 * p.X + a3
        lam = (3 * p.X * p.X + 2 * a2 * p.X + a4 - a1 * p.Y) / denom
        nu = (-(p.X ** 3) + a4 * p.X + 2 * a6 - a3 * p.Y) / denom
    else:
        dx = q.X - p.X
        lam = (q.Y - p.Y) / dx
        nu = (p.Y * q.X - q.Y * p.X) / dx
    X3 = lam * lam + a1 * lam - a2 - p.X - q.X
    Y3 = -(lam + a1) * X3 - nu - a3
    return Section(X3, Y3)


def multiply_section(model: WeierstrassModel, s: Section, n: int) -> Section:
    if n < 0:
        return multiply_section(model, negate_section(model, s), -n)
    result, base = Section.zero(), s
    while n:
        if n & 1:
            result = add_sections(model, result, base)
        base = add_sections(model, base, base)
        n >>= 1
    return result


# --- Short model for the Gauss-Manin stage ---

def cubic_model(model: WeierstrassModel) -> Tuple[RatFunc, RatFunc, RatFunc]:
    """
    Coefficients (a, b, c) of f = x^3 + a x^2 + b x + c with
    (y + (a1 x + a3)/2)^2 = f(x) equivalent to the long equation.
    """
    inv = invariants(model)
    return inv.b2 / 4, inv.b4 / 2, inv.b6 / 4


def shifted_y(model: WeierstrassModel, X: RatFunc, Y: RatFunc) -> RatFunc:
    return Y + (model.a1 * X + model.a3) / 2


def hesse_model() -> WeierstrassModel:
    """
    Weierstrass form of the Hesse pencil x^3 + y^3 + 1 = mu xy, obtained by
    sending the flex (1:-1:0) to the point at infinity.
    """
    mu = RatFunc.var()
    return WeierstrassModel.long(a1=3 * mu, a3=mu ** 3 - 27)
