"""
ellsurf/ode/localsolve.py

Local Solutions.
----------------
Frobenius series at regular singular places, the local exactness decision
for Lambda f = Z (a single-valued formal solution exists near the place) and
the global decision (a rational solution exists).

Research Note:
In the theta-form theta(theta-1) + a(u) theta + b(u) the coefficients of an
integer-power ansatz obey I(n) c_n + sum_k (a_k (n-k) + b_k) c_(n-k) = r_n,
where I is the indicial polynomial. Only the integer roots of I can block a
solution, so the obstructions live at finitely many known indices.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from sympy import Poly, QQ, Rational

from algebra import linalg
from algebra.exactcore import (
    T, VAL_INFINITY, Place, RatFunc, ResidueElem, coefficients, degree, finite_poles,
    local_series, sort_places, valuation,
)
from ode.gaussmanin import DiffOp2, local_exponents, local_operator, rhs_shift

logger = logging.getLogger(__name__)

# Configuration
BASE_TRUNCATION = 16


# --- Frobenius bases ---

@dataclass(frozen=True)
class FrobeniusSolution:
    """
    u^exponent * sum coefficients[k] u^k, plus log_factor * y1 * log(u) when
    log_degree is 1 (y1 the solution at the larger exponent).
    """
    place: Place
    exponent: Rational
    log_degree: int
    coefficients: Tuple[ResidueElem, ...]
    log_factor: Optional[ResidueElem] = None


def _recurrence_sum(loc, rho, coeffs, n: int):
    F = loc.place.residue_field
    acc = F.zero
    for k in range(1, n + 1):
        acc = acc + (loc.a[k] * (rho + n - k) + loc.b[k]) * coeffs[n - k]
    return acc


def _log_source(loc, rho2, y1: List[ResidueElem], j: int) -> ResidueElem:
    """Coefficient j of (2 theta - 1 + a) y1, shifted to exponent rho2."""
    acc = y1[j] * (2 * (rho2 + j) - 1)
    for k in range(j + 1):
        acc = acc + loc.a[k] * y1[j - k]
    return acc


def frobenius_basis(op: DiffOp2, place: Place, N: int = BASE_TRUNCATION
                    ) -> Tuple[FrobeniusSolution, FrobeniusSolution]:
    """Two formal solutions at the place, truncated to N coefficients each."""
    r1, r2 = local_exponents(op, place)
    loc = local_operator(op, place, N)
    F = place.residue_field

    y1 = [F.one]
    for n in range(1, N):
        y1.append(-_recurrence_sum(loc, r2, y1, n) / loc.indicial(r2 + n))
    first = FrobeniusSolution(place, r2, 0, tuple(y1))

    gap = r2 - r1
    if not gap.is_integer:
        y2 = [F.one]
        for n in range(1, N):
            y2.append(-_recurrence_sum(loc, r1, y2, n) / loc.indicial(r1 + n))
        return first, FrobeniusSolution(place, r1, 0, tuple(y2))

    m = int(gap)
    if m == 0:
        C = F.one
        y2 = [F.zero]
    else:
        C = F.zero
        y2 = [F.one]
    for n in range(1, N):
        acc = _recurrence_sum(loc, r1, y2, n)
        if n == m:
            # resonance: I(r1 + m) = 0 fixes the log factor, d_m is free (set to 0)
            C = -acc / m
            y2.append(F.zero)
            continue
        if n > m:
            acc = acc + C * _log_source(loc, r2, y1, n - m)
        y2.append(-acc / loc.indicial(r1 + n))
    log_degree = 0 if C.is_zero else 1
    second = FrobeniusSolution(place, r1, log_degree, tuple(y2), C if log_degree else None)
    logger.debug("[LS] %s exponents (%s, %s) log=%d", place, r1, r2, log_degree)
    return first, second


def frobenius_residual(op: DiffOp2, sol: FrobeniusSolution,
                       partner: Optional[FrobeniusSolution] = None) -> List[ResidueElem]:
    """
    Coefficients of the operator applied to a truncated solution, in the
    theta-form at its place; partner is the larger-exponent solution needed
    for the log term of a logarithmic solution.
    """
    N = len(sol.coefficients)
    loc = local_operator(op, sol.place, N)
    out = []
    for n in range(N):
        val = loc.indicial(sol.exponent + n) * sol.coefficients[n]
        val = val + _recurrence_sum(loc, sol.exponent, sol.coefficients, n)
        if sol.log_degree and partner is not None:
            m = int(partner.exponent - sol.exponent)
            if n >= m:
                val = val + sol.log_factor * _log_source(loc, partner.exponent,
                                                         list(partner.coefficients), n - m)
        out.append(val)
    return out


# --- Local exactness ---

class _Affine:
    """const + sum coeffs[j] * param_j over a residue field."""

    def __init__(self, const: ResidueElem, coeffs: Optional[Dict[int, ResidueElem]] = None):
        self.const = const
        self.coeffs = dict(coeffs or {})

    def __add__(self, other: "_Affine") -> "_Affine":
        coeffs = dict(self.coeffs)
        for j, c in other.coeffs.items():
            coeffs[j] = coeffs[j] + c if j in coeffs else c
        return _Affine(self.const + other.const, coeffs)

    def scale(self, c) -> "_Affine":
        return _Affine(self.const * c, {j: v * c for j, v in self.coeffs.items()})

    def shift(self, c) -> "_Affine":
        return _Affine(self.const + c, self.coeffs)

    def is_param_free(self) -> bool:
        return all(v.is_zero for v in self.coeffs.values())


@dataclass(frozen=True)
class ExactnessCertificate:
    place: Place
    locally_exact: bool
    obstructions: Tuple[ResidueElem, ...] = field(default=())

    def vector(self) -> List[Rational]:
        """Obstructions flattened to rational coordinates."""
        out: List[Rational] = []
        for o in self.obstructions:
            out.extend(o.coordinates())
        return out


def integer_roots(op: DiffOp2, place: Place) -> List[int]:
    return sorted({int(r) for r in local_exponents(op, place) if r.is_integer})


def lowest_index(op: DiffOp2, Z: RatFunc, place: Place):
    """Lower bound on the order at the place of any single-valued local solution."""
    vR = valuation(Z, place) - rhs_shift(place)
    return min([vR] + integer_roots(op, place))


def _eliminate(constraints: List[_Affine], nparams: int) -> List[ResidueElem]:
    rows = [_Affine(c.const, c.coeffs) for c in constraints]
    used = set()
    for j in range(nparams):
        pivot = next((i for i, r in enumerate(rows)
                      if i not in used and not r.coeffs.get(j, r.const.field.zero).is_zero), None)
        if pivot is None:
            continue
        used.add(pivot)
        prow = rows[pivot].scale(rows[pivot].coeffs[j].inverse())
        rows[pivot] = prow
        for i, r in enumerate(rows):
            if i != pivot and j in r.coeffs and not r.coeffs[j].is_zero:
                rows[i] = r + prow.scale(-r.coeffs[j])
    return [r.const for i, r in enumerate(rows) if i not in used]


@lru_cache(maxsize=8192)
def is_locally_exact(op: DiffOp2, Z: RatFunc, place: Place) -> ExactnessCertificate:
    roots = integer_roots(op, place)
    if not roots:
        return ExactnessCertificate(place, True, ())
    n0 = lowest_index(op, Z, place)
    count = roots[-1] - n0 + 1
    loc = local_operator(op, place, count)
    r = local_series(Z, place, n0 + rhs_shift(place), count)
    F = place.residue_field

    coeffs: List[_Affine] = []
    constraints: List[_Affine] = []
    for i in range(count):
        n = n0 + i
        acc = _Affine(F.zero)
        for k in range(1, i + 1):
            acc = acc + coeffs[i - k].scale(loc.a[k] * (n - k) + loc.b[k])
        if n in roots:
            constraints.append(acc.shift(-r[i]))
            coeffs.append(_Affine(F.zero, {len(constraints) - 1: F.one}))
        else:
            coeffs.append(acc.scale(-1).shift(r[i]).scale(loc.indicial(n).inverse()))
    obstructions = tuple(_eliminate(constraints, len(constraints)))
    exact = all(o.is_zero for o in obstructions)
    return ExactnessCertificate(place, exact, obstructions)


def check_places(op: DiffOp2, Z: RatFunc) -> List[Place]:
    """Places where local exactness can fail: op singularities, poles of Z, infinity."""
    places = set(op.singular_places()) | set(finite_poles(Z)) | {Place.infinity()}
    return sort_places(places)


def certificates(op: DiffOp2, Z: RatFunc) -> List[ExactnessCertificate]:
    return [is_locally_exact(op, Z, v) for v in check_places(op, Z)]


def is_parabolic(op: DiffOp2, Z: RatFunc) -> bool:
    return all(c.locally_exact for c in certificates(op, Z))


# --- Rational solutions ---

def image_numerators(op: DiffOp2, M: Poly, count: int) -> Tuple[List[Poly], Poly]:
    """
    Numerators N_k and the common denominator W with op(t^k / M) = N_k / W,
    for k < count.
    """
    pn, pd = op.p.num, op.p.den
    qn, qd = op.q.num, op.q.den
    M1 = M.diff(T)
    M2 = M1.diff(T)
    W = M ** 3 * pd * qd
    pdqd = pd * qd
    out = []
    for k in range(count):
        P = Poly(T ** k, T, domain=QQ)
        P1 = P.diff(T)
        P2 = P1.diff(T)
        N = (pdqd * (P2 * M ** 2 - 2 * P1 * M1 * M - P * M2 * M + 2 * P * M1 ** 2)
             + pn * qd * M * (P1 * M - P * M1)
             + qn * pd * M ** 2 * P)
        out.append(N)
    return out, W


def solution_bounds(op: DiffOp2, Z: RatFunc) -> Tuple[Poly, int]:
    """
    (M, d): every rational solution of op(f) = Z is P / M with deg P <= d
    (d < 0 means only f = 0 is possible).
    """
    M = Poly(1, T, domain=QQ)
    finite = set(p for p in op.singular_places() if not p.is_infinity) | set(finite_poles(Z))
    for place in sort_places(finite):
        n0 = lowest_index(op, Z, place)
        if n0 < 0:
            M = M * place.pi ** int(-n0)
    n_inf = lowest_index(op, Z, Place.infinity())
    if n_inf == VAL_INFINITY:
        return M, -1
    return M, degree(M) - int(n_inf)


def _coefficient_rows(polys: List[Poly], length: int) -> List[List[Rational]]:
    """Column k of the result is the coefficient vector of polys[k]."""
    cols = []
    for p in polys:
        cs = coefficients(p)
        cols.append(cs + [Rational(0)] * (length - len(cs)))
    return [[cols[k][i] for k in range(len(cols))] for i in range(length)]


@dataclass(frozen=True)
class RationalSolution:
    f: RatFunc
    trivial: bool = False  # Z = 0 answered by f = 0 without solving


def rational_solutions(op: DiffOp2, Z: RatFunc) -> Optional[RationalSolution]:
    """
    A rational f with op(f) = Z, or None. For Z = 0 the zero function is
    returned with `trivial` set; nonzero homogeneous solutions come from
    `homogeneous_rational_solutions`.
    """
    if Z.is_zero:
        return RationalSolution(RatFunc.zero(), trivial=True)
    M, d = solution_bounds(op, Z)
    if d < 0:
        return None
    nums, W = image_numerators(op, M, d + 1)
    lhs = [N * Z.den for N in nums]
    rhs = Z.num * W
    length = max([degree(p) for p in lhs] + [degree(rhs)]) + 1
    rows = _coefficient_rows(lhs, length)
    target = coefficients(rhs)
    target = target + [Rational(0)] * (length - len(target))
    x = linalg.solve(rows, target, d + 1)
    if x is None:
        logger.debug("[LS] no rational solution for Z = %s", Z)
        return None
    P = Poly.from_list(list(reversed(x)), T, domain=QQ)
    f = RatFunc.make(P, M)
    logger.debug("[LS] rational solution f = %s", f)
    return RationalSolution(f)


def homogeneous_rational_solutions(op: DiffOp2) -> List[RatFunc]:
    """Basis of the rational solutions of op(f) = 0."""
    M, d = solution_bounds(op, RatFunc.zero())
    if d < 0:
        return []
    nums, _ = image_numerators(op, M, d + 1)
    length = max(degree(p) for p in nums) + 1
    if length <= 0:
        return [RatFunc.make(Poly(T ** k, T, domain=QQ), M) for k in range(d + 1)]
    basis = linalg.nullspace(_coefficient_rows(nums, length), d + 1)
    return [RatFunc.make(Poly.from_list(list(reversed(v)), T, domain=QQ), M) for v in basis]
