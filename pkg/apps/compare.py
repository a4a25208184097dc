from typing import Any, Dict, List

from apps.base import Command
from kernel.family_parser import FamilySpec
from surface.invariants import compare_isogeny_invariants, surface_invariants


class Compare(Command):
    """Necessary conditions for two families to be generically isogenous."""
    name = "compare"
    families = 2

    def run(self, specs: List[FamilySpec]) -> Dict[str, Any]:
        a, b = specs
        iso = self.flags.allow_isotrivial
        cmp = compare_isogeny_invariants(a.model(), b.model(), allow_isotrivial=iso)
        self.log(f"{'':<16} {a.name:<20} {b.name:<20}")
        rows = []
        for name, x, y in cmp.rows:
            mark = "" if x == y else "  <- differs"
            self.log(f"{name:<16} {str(x):<20} {str(y):<20}{mark}")
            rows.append({"name": name, "left": list(x) if isinstance(x, tuple) else x,
                         "right": list(y) if isinstance(y, tuple) else y, "equal": x == y})
        kod_a = surface_invariants(a.model(), iso).kodaira_multiset
        kod_b = surface_invariants(b.model(), iso).kodaira_multiset
        self.log(f"kodaira: {' '.join(kod_a)} | {' '.join(kod_b)}")
        self.log(f"note: {cmp.note}")
        self.log(f"verdict: {cmp.verdict}")
        return {
            "rows": rows,
            "kodaira": {"left": kod_a, "right": kod_b},
            "note": cmp.note,
            "verdict": cmp.verdict,
        }
