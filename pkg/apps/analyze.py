import math
from typing import Any, Dict, List

from sympy import Symbol

from apps.base import Command
from kernel.family_parser import FamilySpec
from surface.invariants import surface_invariants
from surface.weiermodel import invariants


def _val(v) -> Any:
    return "inf" if math.isinf(v) else int(v)


class Analyze(Command):
    """Fibre table and global invariants."""
    name = "analyze"

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        spec = specs[0]
        model = spec.model()
        inv = surface_invariants(model, allow_isotrivial=self.flags.allow_isotrivial)
        var = spec.variable

        self.log(f"family {spec.name}: {model.render(Symbol(var))}")
        self.log(f"j = {invariants(model).j.as_expr(Symbol(var))}")
        self.log("fibers:")
        rows = []
        for fd in inv.fibers:
            place = fd.place.render(Symbol(var))
            self.log(f"  {place:<24} {fd.type.name:<6} m={fd.m_s:<3} e={fd.e_loc:<3} "
                     f"v(c4,c6,D)=({_val(fd.vc4)},{_val(fd.vc6)},{fd.vdelta}) deg={fd.place.degree}")
            rows.append({
                "place": fd.place, "degree": fd.place.degree, "type": fd.type.name,
                "components": fd.m_s, "euler": fd.e_loc, "trace": fd.trace,
                "valuations": [_val(fd.vc4), _val(fd.vc6), fd.vdelta], "twist": fd.twist,
            })

        self.log(f"e = {inv.e}, chi(O) = {inv.chiO}, p_g = {inv.p_g}, q = {inv.q}")
        self.log(f"betti = {inv.betti}, h11 = {inv.h11}")
        self.log(f"sum(m_s - 1) = {inv.sum_m_minus_1}, rank bound {inv.rank_bound}, deg j = {inv.j_degree}")
        self.log(f"rho = r + 2 + {inv.sum_m_minus_1}; expected IDR dimension "
                 f"{inv.b2 - 2 - inv.sum_m_minus_1}")
        return {
            "fibers": rows,
            "invariants": {
                "e": inv.e, "chiO": inv.chiO, "p_g": inv.p_g, "q": inv.q,
                "betti": list(inv.betti), "h11": inv.h11,
                "sum_m_minus_1": inv.sum_m_minus_1, "rank_bound": inv.rank_bound,
                "j_degree": inv.j_degree, "expected_idr_dimension": inv.b2 - 2 - inv.sum_m_minus_1,
                "kodaira": inv.kodaira_multiset,
            },
            "j": invariants(model).j,
        }
