from typing import Any, Dict, List

from sympy import Symbol

from algebra.exactcore import EllSurfError
from apps.base import Command
from cohomology.idrcohomology import idr_class
from kernel.family_parser import FamilySpec
from ode.gaussmanin import manin_map, picard_fuchs
from surface.weiermodel import validate


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


class Manin(Command):
    """Manin's map on the sections listed in the family file."""
    name = "manin"

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        spec = specs[0]
        model = spec.model()
        validate(model)
        if not spec.sections():
            raise EllSurfError(f"family {spec.name} lists no section")
        op = picard_fuchs(model)
        var = Symbol(spec.variable)

        classes = []
        for (xs, ys), s in zip(spec.section_texts, spec.sections()):
            Z = manin_map(model, op, s)
            cls = idr_class(op, Z)
            self.log(f"section ({xs}, {ys}):")
            self.log(f"  Z = {Z.as_expr(var)}")
            self.log(f"  parabolic: {_yes(cls.is_parabolic)}, exact: {_yes(cls.is_exact)}")
            for c in cls.certificates:
                if not c.locally_exact:
                    self.log(f"  obstruction at {c.place.render(var)}: {[str(o) for o in c.obstructions]}")
            classes.append({
                "section": [s.X, s.Y],
                "Z": Z,
                "parabolic": cls.is_parabolic,
                "exact": cls.is_exact,
                "locally_exact": {c.place.render(var): c.locally_exact for c in cls.certificates},
            })
        return {"classes": classes}
