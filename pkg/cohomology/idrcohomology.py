"""
ellsurf/cohomology/idrcohomology.py

Inhomogeneous de Rham Cohomology.
---------------------------------
Locally exact rational functions Z (Lambda f = Z is solvable by a
single-valued meromorphic f near every point) modulo the globally exact
ones Lambda(K(X)), computed on pole-bounded subspaces L(D) by exact linear
algebra, and the search for the two divisors A0 <= A that carve out the
holomorphic and (1,1) pieces.

Research Note:
L(D) = { P / M_D : deg P <= deg M_D + D(inf) } with M_D = prod pi^D(pi).
Divisors are kept in the function normalization; the quadratic
normalization Z (dt)^2 shifts the order at infinity by 4.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Tuple

from sympy import Poly, QQ, Rational

from algebra import linalg
from algebra.exactcore import EllSurfError, Place, RatFunc, T, coefficients, degree, sort_places
from ode.gaussmanin import DiffOp2
from ode.localsolve import (
    ExactnessCertificate, integer_roots, certificates, image_numerators, is_locally_exact,
    rational_solutions,
)
from surface.invariants import surface_invariants
from surface.weiermodel import WeierstrassModel

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_SEARCH_BOUND = 24
QUADRATIC_SHIFT = 4


class SearchExhausted(EllSurfError):
    def __init__(self, bound: int, stage: str = "A"):
        self.bound = bound
        self.stage = stage
        super().__init__(f"no divisor {stage} found within total pole degree {bound}")


# --- Divisors ---

@dataclass(frozen=True)
class PoleDivisor:
    """Allowed pole orders; `orders` is sorted by place and stored in the function normalization."""
    orders: Tuple[Tuple[Place, int], ...]

    @classmethod
    def of(cls, orders: Dict[Place, int]) -> "PoleDivisor":
        return cls(tuple(sorted(((p, int(n)) for p, n in orders.items() if n),
                                key=lambda pn: pn[0].sort_key())))

    @classmethod
    def from_quadratic(cls, orders: Dict[Place, int]) -> "PoleDivisor":
        shifted = dict(orders)
        inf = Place.infinity()
        shifted[inf] = shifted.get(inf, 0) - QUADRATIC_SHIFT
        return cls.of(shifted)

    def order(self, place: Place) -> int:
        return dict(self.orders).get(place, 0)

    def quadratic(self) -> Dict[Place, int]:
        out = dict(self.orders)
        inf = Place.infinity()
        out[inf] = out.get(inf, 0) + QUADRATIC_SHIFT
        return {p: n for p, n in out.items() if n}

    def denominator(self) -> Poly:
        M = Poly(1, T, domain=QQ)
        for place, n in self.orders:
            if not place.is_infinity and n > 0:
                M = M * place.pi ** n
        return M

    def render(self, quadratic: bool = False) -> str:
        items = self.quadratic().items() if quadratic else dict(self.orders).items()
        parts = [f"{p}:{n}" for p, n in sorted(items, key=lambda pn: pn[0].sort_key())]
        return "{" + ", ".join(parts) + "}"

    def __str__(self) -> str:
        return self.render()


def riemann_roch_basis(D: PoleDivisor) -> Tuple[Poly, List[RatFunc]]:
    """(M_D, basis t^i / M_D of L(D))."""
    M = D.denominator()
    top = degree(M) + D.order(Place.infinity())
    return M, [RatFunc.make(Poly(T ** i, T, domain=QQ), M) for i in range(top + 1)]


# --- Parabolic and exact subspaces ---

@dataclass(frozen=True)
class IDRClass:
    Z: RatFunc
    certificates: Tuple[ExactnessCertificate, ...]
    is_exact: bool

    @property
    def is_parabolic(self) -> bool:
        return all(c.locally_exact for c in self.certificates)


def idr_class(op: DiffOp2, Z: RatFunc) -> IDRClass:
    return IDRClass(Z, tuple(certificates(op, Z)), rational_solutions(op, Z) is not None)


def _check_places(op: DiffOp2, D: PoleDivisor) -> List[Place]:
    places = set(op.singular_places()) | {p for p, n in D.orders if n > 0} | {Place.infinity()}
    return sort_places(places)


def _combine(basis: List[RatFunc], vec: List[Rational]) -> RatFunc:
    total = RatFunc.zero()
    for c, f in zip(vec, basis):
        if c:
            total = total + f * c
    return total


@lru_cache(maxsize=512)
def _parabolic_vectors(op: DiffOp2, D: PoleDivisor) -> Tuple[Tuple[Rational, ...], ...]:
    _, basis = riemann_roch_basis(D)
    if not basis:
        return ()
    places = _check_places(op, D)
    columns = []
    for Z in basis:
        col: List[Rational] = []
        for v in places:
            col.extend(is_locally_exact(op, Z, v).vector())
        columns.append(col)
    nrows = len(columns[0])
    rows = [[columns[k][i] for k in range(len(basis))] for i in range(nrows)]
    kernel = linalg.nullspace(rows, len(basis))
    return tuple(tuple(v) for v in kernel)


def parabolic_subspace(op: DiffOp2, D: PoleDivisor) -> List[RatFunc]:
    """Basis of the locally exact elements of L(D)."""
    _, basis = riemann_roch_basis(D)
    return [_combine(basis, list(v)) for v in _parabolic_vectors(op, D)]


def induced_divisor(op: DiffOp2, D: PoleDivisor) -> Tuple[Poly, int]:
    """(M', d'): any g with Lambda g in L(D) lies in { P / M' : deg P <= d' }."""
    M = Poly(1, T, domain=QQ)
    for place in _check_places(op, D):
        if place.is_infinity:
            continue
        n0 = min([2 - D.order(place)] + integer_roots(op, place))
        if n0 < 0:
            M = M * place.pi ** (-n0)
    inf = Place.infinity()
    n_inf = min([-D.order(inf) - 2] + integer_roots(op, inf))
    return M, degree(M) - n_inf


def _vectors(polys: List[Poly], length: int) -> List[List[Rational]]:
    out = []
    for p in polys:
        cs = coefficients(p)
        out.append(cs + [Rational(0)] * (length - len(cs)))
    return out


@lru_cache(maxsize=512)
def _quotient(op: DiffOp2, D: PoleDivisor) -> Tuple[int, int, Tuple[Tuple[Rational, ...], ...]]:
    """(dim parabolic, dim parabolic & exact, coefficient vectors of representatives)."""
    par = [list(v) for v in _parabolic_vectors(op, D)]
    if not par:
        return 0, 0, ()
    M_D, basis = riemann_roch_basis(D)
    M2, d2 = induced_divisor(op, D)
    images: List[Poly] = []
    W = Poly(1, T, domain=QQ)
    if d2 >= 0:
        images, W = image_numerators(op, M2, d2 + 1)
    C = W.lcm(M_D)
    cw, cm = C.exquo(W), C.exquo(M_D)
    image_polys = [N * cw for N in images]
    par_polys = [sum((Poly(T ** i, T, domain=QQ) * c for i, c in enumerate(v) if c),
                     Poly(0, T, domain=QQ)) * cm for v in par]
    length = max([degree(p) for p in image_polys + par_polys] + [0]) + 1
    img_vecs = _vectors(image_polys, length)
    par_vecs = _vectors(par_polys, length)
    r_img = linalg.span_rank(img_vecs)
    r_both = linalg.span_rank(img_vecs + par_vecs)
    dim_par = len(par)
    dim_exact = dim_par + r_img - r_both
    reps: List[Tuple[Rational, ...]] = []
    acc, r = list(img_vecs), r_img
    for v, pv in zip(par, par_vecs):
        r_new = linalg.span_rank(acc + [pv])
        if r_new > r:
            acc.append(pv)
            r = r_new
            reps.append(tuple(v))
    logger.debug("[IDR] D=%s dim par=%d exact=%d", D, dim_par, dim_exact)
    return dim_par, dim_exact, tuple(reps)


def idr_quotient(op: DiffOp2, D: PoleDivisor) -> Tuple[int, List[RatFunc]]:
    """dim (parabolic & L(D)) / (exact & L(D)) and representatives of a basis."""
    dim_par, dim_exact, reps = _quotient(op, D)
    _, basis = riemann_roch_basis(D)
    return dim_par - dim_exact, [_combine(basis, list(v)) for v in reps]


def exact_dimension(op: DiffOp2, D: PoleDivisor) -> int:
    return _quotient(op, D)[1]


def expected_dimension(model: WeierstrassModel, allow_isotrivial: bool = False) -> int:
    """dim H^1(P1, R^1 pi_*) from the Leray bookkeeping b2 = 2 + sum(m_s - 1) + dim H^1."""
    inv = surface_invariants(model, allow_isotrivial)
    return inv.b2 - 2 - inv.sum_m_minus_1


# --- Hodge search ---

@dataclass(frozen=True)
class HodgeResult:
    A0: PoleDivisor
    A: PoleDivisor
    holomorphic_basis: Tuple[RatFunc, ...]
    quotient_basis: Tuple[RatFunc, ...]
    p_g: int
    h11_prime: int


def _lattice(places: List[Place], total: int) -> Iterator[Tuple[int, ...]]:
    """Quadratic pole-order vectors of weighted total `total`, lexicographic."""
    weights = [p.degree for p in places]

    def rec(i: int, remaining: int) -> Iterator[Tuple[int, ...]]:
        if i == len(places) - 1:
            if remaining % weights[i] == 0:
                yield (remaining // weights[i],)
            return
        for n in range(remaining // weights[i] + 1):
            for rest in rec(i + 1, remaining - n * weights[i]):
                yield (n,) + rest

    if places:
        yield from rec(0, total)


def _to_divisor(places: List[Place], vec: Tuple[int, ...]) -> PoleDivisor:
    return PoleDivisor.from_quadratic(dict(zip(places, vec)))


def _search_places(op: DiffOp2) -> List[Place]:
    return sort_places(set(op.singular_places()) | {Place.infinity()})


@lru_cache(maxsize=64)
def hodge_search(model: WeierstrassModel, op: DiffOp2, bound: int = DEFAULT_SEARCH_BOUND) -> HodgeResult:
    inv = surface_invariants(model)
    p_g = inv.p_g
    h11_prime = expected_dimension(model) - 2 * p_g
    places = _search_places(op)

    A0 = None
    for total in range(bound + 1):
        for vec in _lattice(places, total):
            D = _to_divisor(places, vec)
            dim_par, dim_exact, _ = _quotient(op, D)
            if dim_par == p_g and dim_exact == 0:
                A0 = (vec, D)
                break
        if A0 is not None:
            break
    if A0 is None:
        raise SearchExhausted(bound, "A0")
    vec0, D0 = A0
    logger.info("[IDR] A0 = %s", D0.render(quadratic=True))

    target = p_g + h11_prime
    for total in range(sum(n * p.degree for n, p in zip(vec0, places)), bound + 1):
        for vec in _lattice(places, total):
            if any(a < b for a, b in zip(vec, vec0)):
                continue
            D = _to_divisor(places, vec)
            dim, reps = idr_quotient(op, D)
            if dim == target:
                logger.info("[IDR] A = %s, quotient dimension %d", D.render(quadratic=True), dim)
                return HodgeResult(D0, D, tuple(parabolic_subspace(op, D0)), tuple(reps), p_g, h11_prime)
    raise SearchExhausted(bound, "A")
