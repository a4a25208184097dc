from typing import Any, Dict, List

from sympy import Symbol

from apps.base import Command
from algebra.exactcore import RatFunc
from kernel.family_parser import FamilySpec
from ode.gaussmanin import classify_singularity, fuchs_defect, gauss_manin
from surface.weiermodel import validate


def cleared_coefficients(op) -> List[RatFunc]:
    """Polynomial coefficients (of D^2, D, 1) of op times the lcm of its denominators."""
    L = op.p.den.lcm(op.q.den)
    lead = RatFunc.make(L)
    return [lead, op.p * lead, op.q * lead]


class PicardFuchs(Command):
    """Gauss-Manin system, Picard-Fuchs operator and its local exponents."""
    name = "picard-fuchs"

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        spec = specs[0]
        model = spec.model()
        validate(model)
        system = gauss_manin(model)
        op = system.operator
        var = Symbol(spec.variable)
        N1, N2 = system.d1[0], system.d2[0]

        c2, c1, c0 = cleared_coefficients(op)
        self.log(f"family {spec.name}: {model.render(var)}")
        self.log(f"D omega   = ({N1.coeff(0).as_expr(var)}) omega + ({N1.coeff(1).as_expr(var)}) x omega")
        self.log(f"D^2 omega = ({N2.coeff(0).as_expr(var)}) omega + ({N2.coeff(1).as_expr(var)}) x omega")
        self.log(f"operator: ({c2.as_expr(var)}) D^2 + ({c1.as_expr(var)}) D + ({c0.as_expr(var)})")

        table = []
        self.log("exponents:")
        for place in op.singular_places():
            sp = classify_singularity(op, place, model)
            r1, r2 = sp.exponents
            name = place.render(var)
            self.log(f"  {name:<24} ({r1}, {r2})  {sp.kind}{'  log' if sp.logarithmic else ''}")
            table.append({"place": place, "exponents": [r1, r2], "kind": sp.kind,
                          "logarithmic": sp.logarithmic})
        defect = fuchs_defect(op)
        self.log(f"Fuchs relation defect: {defect}")
        return {
            "gauss_manin": {"d1": [N1.coeff(0), N1.coeff(1)], "d2": [N2.coeff(0), N2.coeff(1)]},
            "operator": {"p": op.p, "q": op.q, "cleared": [c2, c1, c0]},
            "exponents": table,
            "fuchs_defect": defect,
        }
