"""
ellsurf/ode/monodromy.py

Numerical Monodromy.
--------------------
Analytic continuation of D^2 + pD + q along polylines by recentred Taylor
series, local monodromy matrices around every singular point, the loop
around infinity and the global product relation.

Research Note:
Every step stays inside half the radius of convergence at its centre, so the
Taylor tail decays at least like 2^-n and the order can be raised until the
last terms drop below the tolerance. Errors are heuristic, not rigorous.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from algebra.exactcore import EllSurfError, Place, RatFunc, coefficients, finite_poles, sort_places
from ode.gaussmanin import DiffOp2
from surface.weiermodel import WeierstrassModel, fiber_data

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_TOL = 1e-9
MAX_TAYLOR_ORDER = 384
SAFETY_FACTOR = 0.5
LOOP_SEGMENTS = 16
MIN_DISTANCE = 1e-10
MAX_STEPS = 200000


# --- Errors ---

class StepUnderflow(EllSurfError):
    def __init__(self, point: complex):
        self.point = point
        super().__init__(f"path passes too close to a singular point near {point:.6g}")


class ToleranceNotMet(EllSurfError):
    def __init__(self, estimate: float, what: str = "Taylor tail at maximal order"):
        self.estimate = estimate
        super().__init__(f"tolerance failure: {what} {estimate:.3g} above tolerance")


# --- Numeric coefficients ---

def _to_numpy(f_poly) -> np.ndarray:
    return np.array([complex(float(c)) for c in coefficients(f_poly)] or [0j], dtype=complex)


def _shift(coeffs: np.ndarray, c: complex) -> np.ndarray:
    """Coefficients of poly(c + h), low to high, by repeated synthetic division."""
    a = coeffs.copy()
    n = len(a)
    for i in range(n):
        for j in range(n - 2, i - 1, -1):
            a[j] += c * a[j + 1]
    return a


def _divide(a: np.ndarray, b: np.ndarray, count: int) -> np.ndarray:
    q = np.zeros(count, dtype=complex)
    bb = np.zeros(count, dtype=complex)
    bb[:min(count, len(b))] = b[:count]
    aa = np.zeros(count, dtype=complex)
    aa[:min(count, len(a))] = a[:count]
    for k in range(count):
        q[k] = (aa[k] - np.dot(bb[1:k + 1], q[k - 1::-1] if k else q[:0])) / bb[0]
    return q


def place_points(place: Place) -> List[complex]:
    """Complex points of a finite place, by numpy root finding."""
    cs = [float(c) for c in place.pi.all_coeffs()]
    return sorted((complex(r) for r in np.roots(cs)), key=lambda z: (round(z.real, 12), round(z.imag, 12)))


class _NumericOperator:
    def __init__(self, op: DiffOp2, Z: Optional[RatFunc] = None):
        self.parts = [(_to_numpy(op.p.num), _to_numpy(op.p.den)),
                      (_to_numpy(op.q.num), _to_numpy(op.q.den))]
        if Z is not None:
            self.parts.append((_to_numpy(Z.num), _to_numpy(Z.den)))
        self.forced = Z is not None
        places = [v for v in op.singular_places() if not v.is_infinity]
        if Z is not None:
            places = sort_places(places + finite_poles(Z))
        self.points = [z for v in places for z in place_points(v)]

    def distance(self, z: complex) -> float:
        if not self.points:
            return math.inf
        return min(abs(z - s) for s in self.points)

    def taylor(self, z: complex, count: int) -> List[np.ndarray]:
        return [_divide(_shift(n, z), _shift(d, z), count) for n, d in self.parts]


def _taylor_step(nop: _NumericOperator, z: complex, h: complex, tol: float) -> Tuple[np.ndarray, float]:
    """Affine 3x3 transfer over one step and its tail estimate."""
    order = 24
    while True:
        series = nop.taylor(z, order + 1)
        P, Q = series[0], series[1]
        Y = np.zeros((order + 1, 3), dtype=complex)
        Y[0, 0] = 1.0
        Y[1, 1] = 1.0
        for n in range(order - 1):
            k = np.arange(n + 1)
            acc = (P[:n + 1] * (n - k + 1)) @ Y[n + 1:0:-1] + Q[:n + 1] @ Y[n::-1]
            if nop.forced:
                acc[2] -= series[2][n]
            Y[n + 2] = -acc / ((n + 2) * (n + 1))
        hp = h ** np.arange(order + 1)
        terms = np.abs(Y * hp[:, None])
        scale = max(1.0, float(terms.sum(axis=0).max()))
        tail = 2.0 * float(terms[-2:].max()) * max(1.0, order / max(abs(h), 1e-300))
        if tail <= tol * scale:
            break
        if order >= MAX_TAYLOR_ORDER:
            raise ToleranceNotMet(tail / scale)
        order = min(2 * order, MAX_TAYLOR_ORDER)
    value = hp @ Y
    deriv = (np.arange(1, order + 1) * hp[:order]) @ Y[1:]
    step = np.array([value, deriv, [0.0, 0.0, 1.0]], dtype=complex)
    return step, tail


# --- Paths ---

@dataclass(frozen=True)
class PathPlan:
    base_point: complex
    polyline: Tuple[complex, ...]
    enclosed_places: Tuple[Place, ...] = ()


@dataclass(frozen=True)
class MonodromyMatrix:
    entries: np.ndarray = field(compare=False)
    error: float

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    @property
    def det(self) -> complex:
        return complex(np.linalg.det(self.entries))

    def distance_to_identity(self) -> float:
        return float(np.abs(self.entries - np.eye(2)).max())


def _continue(nop: _NumericOperator, polyline: Sequence[complex], tol: float) -> Tuple[np.ndarray, float]:
    T = np.eye(3, dtype=complex)
    err = 0.0
    z = complex(polyline[0])
    steps = 0
    for w in polyline[1:]:
        w = complex(w)
        while z != w:
            dist = nop.distance(z)
            if dist < MIN_DISTANCE or steps > MAX_STEPS:
                raise StepUnderflow(z)
            hmax = SAFETY_FACTOR * dist
            d = w - z
            if abs(d) <= hmax:
                h, nxt = d, w
            else:
                h = d / abs(d) * hmax
                nxt = z + h
            step, tail = _taylor_step(nop, z, h, tol)
            T = step @ T
            err += tail * float(np.abs(T).max())
            z = nxt
            steps += 1
    return T, err


def integrate(op: DiffOp2, plan: PathPlan, tol: float = DEFAULT_TOL) -> MonodromyMatrix:
    """Transfer matrix of (value, derivative) from the start to the end of the plan."""
    T, err = _continue(_NumericOperator(op), plan.polyline, tol)
    return MonodromyMatrix(T[:2, :2].copy(), err)


def integrate_affine(op: DiffOp2, Z: RatFunc, plan: PathPlan, tol: float = DEFAULT_TOL) -> Tuple[MonodromyMatrix, np.ndarray]:
    """Continuation of op(f) = Z: the homogeneous transfer and the particular offset."""
    T, err = _continue(_NumericOperator(op, Z), plan.polyline, tol)
    return MonodromyMatrix(T[:2, :2].copy(), err), T[:2, 2].copy()


def single_valued_defect(M: MonodromyMatrix, offset: np.ndarray) -> float:
    """
    Distance from solvability of (M - I) y = -offset, i.e. of a particular
    solution returning to itself around the loop.
    """
    A = M.entries - np.eye(2)
    s_a = np.linalg.svd(A, compute_uv=False)
    cutoff = 1e-6 * max(1.0, float(s_a[0]))
    r = int((s_a > cutoff).sum())
    s_b = np.linalg.svd(np.column_stack([A, offset]), compute_uv=False)
    return float(s_b[r]) if r < len(s_b) else 0.0


def circle_loop(base: complex, center: complex, radius: float, enclosed: Sequence[Place] = (),
                clockwise: bool = False, phi: Optional[float] = None,
                segments: int = LOOP_SEGMENTS) -> PathPlan:
    """base -> circle around center (starting at angle phi) -> base."""
    if phi is None:
        phi = cmath.phase(base - center)
    sign = -1.0 if clockwise else 1.0
    ring = [center + radius * cmath.exp(1j * (phi + sign * 2 * math.pi * k / segments))
            for k in range(segments + 1)]
    pts = [base] + ring + [base]
    return PathPlan(base, tuple(pts), tuple(enclosed))


def _segment_distance(s: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(s - a)
    x = ((s - a) * d.conjugate()).real / abs(d) ** 2
    x = min(1.0, max(0.0, x))
    return abs(s - (a + x * d))


def _clearance(b: complex, points: List[complex]) -> float:
    score = min((abs(b - s) for s in points), default=math.inf)
    for i, s in enumerate(points):
        for j, other in enumerate(points):
            if i != j:
                score = min(score, _segment_distance(other, b, s))
    return score


def choose_base_point(points: List[complex]) -> complex:
    """Deterministic base point maximizing the clearance of the spokes."""
    if not points:
        return 0j
    c = sum(points) / len(points)
    scale = max(max(abs(s - c) for s in points), 0.5)
    grid = np.linspace(-1.0, 1.0, 9)
    best, best_score = c, -1.0
    for x in grid:
        for y in grid:
            b = complex(round((c + scale * complex(x, y)).real, 6), round((c + scale * complex(x, y)).imag, 6))
            score = _clearance(b, points)
            if score > best_score + 1e-12:
                best, best_score = b, score
    return best


# --- Local monodromies ---

@dataclass(frozen=True)
class LocalMonodromy:
    place: Place
    point: Optional[complex]
    matrix: MonodromyMatrix
    expected_trace: int
    expected_det: complex

    @property
    def trace_error(self) -> float:
        return abs(self.matrix.trace - self.expected_trace)


@dataclass(frozen=True)
class MonodromyReport:
    base_point: complex
    loops: Tuple[LocalMonodromy, ...]
    relation_defect: float

    @property
    def max_trace_error(self) -> float:
        return max((m.trace_error for m in self.loops), default=0.0)


def _residue(op: DiffOp2, s: complex) -> complex:
    num, den = _to_numpy(op.p.num), _to_numpy(op.p.den)
    dden = np.polynomial.polynomial.polyder(den) if len(den) > 1 else np.zeros(1)
    d = np.polynomial.polynomial.polyval(s, dden)
    if d == 0:
        return 0j
    return complex(np.polynomial.polynomial.polyval(s, num) / d)


def _spoke_loops(op: DiffOp2, base: complex) -> Tuple[float, List[Tuple[Place, complex, PathPlan]]]:
    places = [v for v in op.singular_places() if not v.is_infinity]
    pts = [(v, z) for v in places for z in place_points(v)]
    all_z = [z for _, z in pts]
    angles = sorted(cmath.phase(z - base) % (2 * math.pi) for z in all_z)
    if angles:
        gaps = [(angles[(i + 1) % len(angles)] - a) % (2 * math.pi) or 2 * math.pi
                for i, a in enumerate(angles)]
        i = int(np.argmax(gaps))
        ray = (angles[i] + gaps[i] / 2) % (2 * math.pi)
    else:
        ray = 0.0
    plans = []
    for v, z in pts:
        others = [abs(z - w) for w in all_z if w != z] + [abs(z - base)]
        radius = 0.5 * min(others)
        plans.append((v, z, circle_loop(base, z, radius, (v,))))
    plans.sort(key=lambda item: (cmath.phase(item[1] - base) - ray) % (2 * math.pi))
    return ray, plans


def local_monodromies(model: WeierstrassModel, op: DiffOp2, base_point: Optional[complex] = None,
                      tol: float = DEFAULT_TOL) -> MonodromyReport:
    """
    One loop per geometric singular point ordered counterclockwise from the
    ray to infinity, plus a clockwise loop around all of them for infinity.
    M_inf * M_n * ... * M_1 = I is checked numerically.
    """
    nop = _NumericOperator(op)
    base = choose_base_point(nop.points) if base_point is None else complex(base_point)
    traces = {fd.place: fd.trace for fd in fiber_data(model)}
    ray, plans = _spoke_loops(op, base)

    loops: List[LocalMonodromy] = []
    product = np.eye(2, dtype=complex)
    total_res = 0j
    for place, z, plan in plans:
        M = integrate(op, plan, tol)
        res = _residue(op, z)
        total_res += res
        logger.info("[MONO] loop around %s (%.6g%+.6gi): trace %.9g", place, z.real, z.imag, M.trace.real)
        loops.append(LocalMonodromy(place, z, M, traces.get(place, 2), cmath.exp(-2j * math.pi * res)))
        product = M.entries @ product

    inf = Place.infinity()
    R = 2.0 * max([abs(z - base) for _, z, _ in plans], default=1.0) + 1.0
    big = circle_loop(base, base, R, (inf,), clockwise=True, phi=ray, segments=4 * LOOP_SEGMENTS)
    M_inf = integrate(op, big, tol)
    logger.info("[MONO] loop around infinity: trace %.9g", M_inf.trace.real)
    loops.append(LocalMonodromy(inf, None, M_inf, traces.get(inf, 2), cmath.exp(2j * math.pi * total_res)))
    product = M_inf.entries @ product
    defect = float(np.abs(product - np.eye(2)).max())
    logger.info("[MONO] global relation defect %.3g", defect)
    return MonodromyReport(base, tuple(loops), defect)
