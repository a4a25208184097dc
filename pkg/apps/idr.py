from typing import Any, Dict, List

from sympy import Symbol

from apps.base import Command
from cohomology.idrcohomology import expected_dimension, hodge_search, idr_quotient
from kernel.family_parser import FamilySpec
from ode.gaussmanin import picard_fuchs
from surface.weiermodel import validate


class IDR(Command):
    """Inhomogeneous de Rham cohomology: dimensions and the Hodge divisors."""
    name = "idr"

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        spec = specs[0]
        model = spec.model()
        validate(model)
        op = picard_fuchs(model)
        var = Symbol(spec.variable)
        expected = expected_dimension(model)
        self.log(f"family {spec.name}: expected dimension {expected}")

        result = hodge_search(model, op, self.flags.search_bound)
        dim, reps = idr_quotient(op, result.A)
        self.log(f"p_g = {result.p_g}, h11' = {result.h11_prime}")
        self.log(f"A0 = {result.A0.render(quadratic=True)}  (function normalization {result.A0.render()})")
        self.log(f"A  = {result.A.render(quadratic=True)}  (function normalization {result.A.render()})")
        self.log(f"dim L(A0) parabolic = {len(result.holomorphic_basis)}")
        self.log(f"dim H1_IDR on L(A) = {dim}")
        for Z in reps:
            self.log(f"  class {Z.as_expr(var)}")

        def divisor(D) -> Dict[str, Any]:
            return {"function": {str(p.render(var)): n for p, n in D.orders},
                    "quadratic": {str(p.render(var)): n for p, n in D.quadratic().items()}}

        return {
            "expected_dimension": expected,
            "p_g": result.p_g,
            "h11_prime": result.h11_prime,
            "A0": divisor(result.A0),
            "A": divisor(result.A),
            "holomorphic_basis": list(result.holomorphic_basis),
            "quotient_dimension": dim,
            "quotient_basis": reps,
        }
