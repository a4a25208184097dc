"""
ellsurf/kernel/report.py

Machine-readable Reports.
-------------------------
A report is a tree of plain values (dicts, lists, strings, ints) plus the
exact and numeric objects the pipeline produces. Encoding tags every
non-JSON value so that decoding restores it:

    {"exact": "l**2 - l"}          rational function in the family variable
    {"rational": "-1/4"}           exact rational number
    {"approx": [re, im], "tol": x} floating-point value and its tolerance

Research Note:
Keys are sorted and floats are written with repr precision, so a fixed input
and fixed flags give byte-identical output.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict

from sympy import Rational, Symbol

from algebra.exactcore import Place, RatFunc
from kernel.family_parser import FamilyParser

# Configuration
SCHEMA = "ellsurf-report/1"


@dataclass(frozen=True)
class Approx:
    """A numerically computed value together with the tolerance it was computed to."""
    value: complex
    tol: float


@dataclass
class Report:
    command: str
    family: str
    variable: str
    sections: Dict[str, Any] = field(default_factory=dict)


def _encode_value(value: Any, variable: str) -> Any:
    if isinstance(value, RatFunc):
        return {"exact": str(value.as_expr(Symbol(variable)))}
    if isinstance(value, Rational):
        return {"rational": str(value)}
    if isinstance(value, Approx):
        v = complex(value.value)
        return {"approx": [v.real, v.imag], "tol": value.tol}
    if isinstance(value, Place):
        return value.render(Symbol(variable))
    if isinstance(value, dict):
        return {str(k): _encode_value(v, variable) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode_value(v, variable) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        raise TypeError("untagged float in report; wrap it in Approx")
    return str(value)


def encode(report: Report) -> str:
    doc = {
        "schema": SCHEMA,
        "command": report.command,
        "family": report.family,
        "variable": report.variable,
        "sections": _encode_value(report.sections, report.variable),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _decode_value(value: Any, parser: FamilyParser, variable: str) -> Any:
    if isinstance(value, dict):
        if set(value) == {"exact"}:
            return parser.parse_value(value["exact"], variable)
        if set(value) == {"rational"}:
            return Rational(value["rational"])
        if set(value) == {"approx", "tol"}:
            re, im = value["approx"]
            return Approx(complex(re, im), value["tol"])
        return {k: _decode_value(v, parser, variable) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode_value(v, parser, variable) for v in value]
    return value


def decode(text: str) -> Report:
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {doc.get('schema')!r}")
    variable = doc["variable"]
    sections = _decode_value(doc["sections"], FamilyParser(), variable)
    return Report(doc["command"], doc["family"], variable, sections)
