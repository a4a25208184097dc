"""
ellsurf/surface/invariants.py

Global Invariants.
------------------
Euler number, Hodge and Betti numbers, the Shioda-Tate bookkeeping
rho = r + 2 + sum(m_s - 1) and the rank bound it implies, plus a comparison
of the invariants two generically isogenous families must share.

Research Note:
The base is P1, so q = b1 = 0. chi(O) = e/12 and p_g = chi(O) - 1 hold for
relatively minimal fibrations with section over a rational base.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Tuple

from algebra.exactcore import EllSurfError
from surface.weiermodel import (
    LocalFiberData, WeierstrassModel, fiber_data, invariants, validate,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurfaceInvariants:
    e: int
    chiO: int
    p_g: int
    q: int
    b1: int
    b2: int
    h11: int
    sum_m_minus_1: int
    rank_bound: int
    j_degree: int
    fibers: Tuple[LocalFiberData, ...] = field(default=(), compare=False)

    @property
    def betti(self) -> Tuple[int, int, int, int, int]:
        return (1, self.b1, self.b2, self.b1, 1)

    def rho_given_r(self, r: int) -> int:
        """Picard number forced by a Mordell-Weil rank r."""
        return r + 2 + self.sum_m_minus_1

    @property
    def kodaira_multiset(self) -> List[str]:
        names = []
        for fd in self.fibers:
            names.extend([fd.type.name] * fd.place.degree)
        return sorted(names)


def j_degree(model: WeierstrassModel) -> int:
    return invariants(model).j.height()


def surface_invariants(model: WeierstrassModel, allow_isotrivial: bool = False) -> SurfaceInvariants:
    validate(model, allow_isotrivial=allow_isotrivial)
    fibers = tuple(fiber_data(model))
    e = sum(fd.place.degree * fd.e_loc for fd in fibers)
    if e % 12:
        raise EllSurfError(f"Euler number {e} is not divisible by 12")
    chiO = e // 12
    p_g = chiO - 1
    b2 = e - 2
    h11 = b2 - 2 * p_g
    sigma = sum(fd.place.degree * (fd.m_s - 1) for fd in fibers)
    inv = SurfaceInvariants(
        e=e, chiO=chiO, p_g=p_g, q=0, b1=0, b2=b2, h11=h11,
        sum_m_minus_1=sigma, rank_bound=h11 - 2 - sigma,
        j_degree=j_degree(model), fibers=fibers,
    )
    logger.info("[INV] e=%d p_g=%d h11=%d sum(m-1)=%d rank<=%d", e, p_g, h11, sigma, inv.rank_bound)
    return inv


# --- Isogeny comparison ---

@dataclass(frozen=True)
class IsogenyComparison:
    rows: Tuple[Tuple[str, object, object], ...]
    note: str

    @property
    def mismatches(self) -> List[str]:
        return [name for name, a, b in self.rows if a != b]

    @property
    def verdict(self) -> str:
        if self.mismatches:
            return "not generically isogenous"
        return "necessary conditions hold"


COMPONENT_NOTE = ("component counts m_s at individual places need not agree under a "
                  "generic isogeny; only their sum is invariant")


def compare_isogeny_invariants(m1: WeierstrassModel, m2: WeierstrassModel,
                               allow_isotrivial: bool = False) -> IsogenyComparison:
    s1 = surface_invariants(m1, allow_isotrivial)
    s2 = surface_invariants(m2, allow_isotrivial)
    rows = (
        ("j_degree", s1.j_degree, s2.j_degree),
        ("e", s1.e, s2.e),
        ("betti", s1.betti, s2.betti),
        ("p_g", s1.p_g, s2.p_g),
        ("q", s1.q, s2.q),
        ("sum_m_minus_1", s1.sum_m_minus_1, s2.sum_m_minus_1),
    )
    return IsogenyComparison(rows, COMPONENT_NOTE)
