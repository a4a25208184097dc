from typing import Any, Dict, List

from sympy import Symbol

from apps.base import Command
from kernel.family_parser import FamilySpec
from kernel.report import Approx
from ode.gaussmanin import picard_fuchs
from ode.monodromy import ToleranceNotMet, local_monodromies
from surface.weiermodel import validate

# Configuration
RELATION_MARGIN_FACTOR = 10  # relation defect is held to margin * factor


class Monodromy(Command):
    """Local monodromy matrices by numerical continuation."""
    name = "monodromy"

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        spec = specs[0]
        model = spec.model()
        validate(model)
        op = picard_fuchs(model)
        tol, margin = self.flags.tol, self.flags.margin
        report = local_monodromies(model, op, self.flags.base_point, tol)
        var = Symbol(spec.variable)

        b = report.base_point
        self.log(f"family {spec.name}: base point {b.real:.6g}{b.imag:+.6g}i")
        loops = []
        for lm in report.loops:
            where = "infinity" if lm.point is None else f"{lm.point.real:.6g}{lm.point.imag:+.6g}i"
            self.log(f"  {lm.place.render(var):<24} at {where:<24} trace {lm.matrix.trace.real:+.9f} "
                     f"(expected {lm.expected_trace:+d})")
            loops.append({
                "place": lm.place,
                "point": None if lm.point is None else Approx(lm.point, tol),
                "trace": Approx(lm.matrix.trace, margin),
                "det": Approx(lm.matrix.det, margin),
                "expected_trace": lm.expected_trace,
                "matrix": [[Approx(x, margin) for x in row] for row in lm.matrix.entries.tolist()],
            })
        self.log(f"global relation defect {report.relation_defect:.3g}")

        worst = report.max_trace_error
        if worst > margin:
            raise ToleranceNotMet(worst, "trace error")
        if report.relation_defect > RELATION_MARGIN_FACTOR * margin:
            raise ToleranceNotMet(report.relation_defect, "global relation defect")
        return {
            "base_point": Approx(b, tol),
            "loops": loops,
            "relation_defect": Approx(report.relation_defect, margin),
        }
