"""
ellsurf/kernel/family_parser.py

The Family Parser turns a family file into an exact Weierstrass model.
It accepts `key = value` entries, one per line or separated by ';', with
'#' starting a comment.

    name = legendre
    variable = l
    a2 = -(1 + l); a4 = l
    section = 0, 1

Research Note:
Only exact input is accepted: integers, rationals, + - * / ^ with integer
exponents, parentheses and the single family variable. Anything else is
rejected with the line and column of the offending entry.
"""

import io
import keyword
import logging
import os
import re
import tokenize
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from sympy import Float, Function, Integer, Rational, Symbol, nan, oo, zoo
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from algebra.exactcore import EllSurfError, RatFunc, T
from surface.weiermodel import Section, WeierstrassModel, check_section

logger = logging.getLogger(__name__)

# Configuration
DEFAULT_VARIABLE = "t"
COEFFICIENT_KEYS = ("a1", "a2", "a3", "a4", "a6")
VALID_KEYS = ("name", "variable", "section") + COEFFICIENT_KEYS
TRANSFORMATIONS = standard_transformations + (convert_xor,)
ALLOWED_OPERATORS = ("+", "-", "*", "**", "/", "^", "(", ")")
SKIPPED_TOKENS = (tokenize.NEWLINE, tokenize.NL, tokenize.ENDMARKER, tokenize.INDENT, tokenize.DEDENT)
NUMBER_PATTERN = re.compile(r"(\d+(\.\d*)?|\.\d+)\Z")


# --- Errors ---

class FamilySyntaxError(EllSurfError):
    def __init__(self, message: str, line: int, column: int):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class NonRationalCoefficient(EllSurfError):
    def __init__(self, text: str):
        self.text = text
        super().__init__(f"not a rational function with rational coefficients: {text!r}")


class WrongVariable(EllSurfError):
    def __init__(self, name: str, expected: str = DEFAULT_VARIABLE):
        self.name = name
        self.expected = expected
        super().__init__(f"unknown symbol {name!r} (family variable is {expected!r})")


@dataclass(frozen=True)
class _Entry:
    key: str
    value: str
    line: int
    column: int  # 1-based column where the value starts


@dataclass
class FamilySpec:
    name: str = "family"
    variable: str = DEFAULT_VARIABLE
    coefficients: Dict[str, str] = field(default_factory=dict)
    section_texts: List[Tuple[str, str]] = field(default_factory=list)
    _model: Optional[WeierstrassModel] = field(default=None, repr=False, compare=False)
    _sections: List[Section] = field(default_factory=list, repr=False, compare=False)

    def model(self) -> WeierstrassModel:
        return self._model

    def sections(self) -> List[Section]:
        return list(self._sections)


class FamilyParser:
    """
    Validates and converts family files.
    """

    def parse(self, text: str, name: str = "family") -> FamilySpec:
        entries = self._split(text)
        spec = FamilySpec(name=name)
        for e in entries:
            if e.key == "name":
                spec.name = e.value
            elif e.key == "variable":
                if not e.value.isidentifier() or keyword.iskeyword(e.value):
                    raise FamilySyntaxError(f"bad variable name {e.value!r}", e.line, e.column)
                spec.variable = e.value

        values: Dict[str, RatFunc] = {}
        sections: List[Section] = []
        for e in entries:
            if e.key in COEFFICIENT_KEYS:
                if e.key in spec.coefficients:
                    raise FamilySyntaxError(f"duplicate key {e.key!r}", e.line, 1)
                spec.coefficients[e.key] = e.value
                values[e.key] = self.parse_value(e.value, spec.variable, e.line, e.column)
            elif e.key == "section":
                parts = e.value.split(",")
                if len(parts) != 2:
                    raise FamilySyntaxError("section needs exactly two expressions 'X, Y'", e.line, e.column)
                X = self.parse_value(parts[0], spec.variable, e.line, e.column)
                Y = self.parse_value(parts[1], spec.variable, e.line, e.column + len(parts[0]) + 1)
                spec.section_texts.append((parts[0].strip(), parts[1].strip()))
                sections.append(Section(X, Y))

        spec._model = WeierstrassModel(*(values.get(k, RatFunc.zero()) for k in COEFFICIENT_KEYS))
        for s in sections:
            check_section(spec._model, s)
        spec._sections = sections
        logger.info("[FP] parsed family %s: %s", spec.name, spec._model.render(Symbol(spec.variable)))
        return spec

    def parse_value(self, text: str, variable: str = DEFAULT_VARIABLE,
                    line: int = 1, column: int = 1) -> RatFunc:
        """Exact parse of one expression in the family variable."""
        var = Symbol(variable)
        source = text.strip()
        if not source:
            raise FamilySyntaxError("empty expression", line, column)
        self._check_tokens(source, variable, line, column + len(text) - len(text.lstrip()))
        global_dict = {"Integer": Integer, "Rational": Rational, "Symbol": Symbol,
                       "Float": Float, "Function": Function}
        try:
            expr = parse_expr(source, local_dict={variable: var}, global_dict=global_dict,
                              transformations=TRANSFORMATIONS)
        except (SyntaxError, TypeError, ValueError) as e:
            col = column + (len(text) - len(text.lstrip()))
            raise FamilySyntaxError(f"cannot parse {source!r} ({e.__class__.__name__})", line, col) from e
        except Exception as e:
            # tokenizer errors surface as assorted exception types
            raise FamilySyntaxError(f"cannot parse {source!r}: {e}", line, column) from e

        for sym in expr.free_symbols:
            if sym != var:
                raise WrongVariable(str(sym), variable)
        if expr.has(Float, zoo, oo, nan) or expr.atoms(Function) or not expr.is_rational_function(var):
            raise NonRationalCoefficient(source)
        return RatFunc.from_expr(expr.subs(var, T))

    def _check_tokens(self, source: str, variable: str, line: int, column: int):
        """Only numbers, the variable, + - * / ^ and parentheses reach the evaluator."""
        try:
            tokens = list(tokenize.generate_tokens(io.StringIO(source).readline))
        except (tokenize.TokenError, SyntaxError) as e:
            raise FamilySyntaxError(f"cannot parse {source!r}", line, column) from e
        for i, tok in enumerate(tokens):
            col = column + tok.start[1]
            if tok.type in SKIPPED_TOKENS:
                continue
            if tok.type == tokenize.NUMBER and NUMBER_PATTERN.match(tok.string):
                continue
            if tok.type == tokenize.OP and tok.string in ALLOWED_OPERATORS:
                continue
            if tok.type == tokenize.NAME and not keyword.iskeyword(tok.string):
                if tok.string == variable:
                    continue
                if i + 1 < len(tokens) and tokens[i + 1].string == "(":
                    raise NonRationalCoefficient(source)
                raise WrongVariable(tok.string, variable)
            raise FamilySyntaxError(f"unexpected {tok.string!r}", line, col)

    def _split(self, text: str) -> List[_Entry]:
        entries: List[_Entry] = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            body = raw.split("#", 1)[0]
            offset = 0
            for chunk in body.split(";"):
                start = offset
                offset += len(chunk) + 1
                if not chunk.strip():
                    continue
                if "=" not in chunk:
                    col = start + len(chunk) - len(chunk.lstrip()) + 1
                    raise FamilySyntaxError("expected 'key = value'", lineno, col)
                key, value = chunk.split("=", 1)
                name = key.strip()
                if name not in VALID_KEYS:
                    col = start + len(key) - len(key.lstrip()) + 1
                    raise FamilySyntaxError(f"unknown key {name!r}", lineno, col)
                vcol = start + len(key) + 1 + (len(value) - len(value.lstrip())) + 1
                entries.append(_Entry(name, value.strip(), lineno, vcol))
        return entries


def parse_family(text: str, name: str = "family") -> FamilySpec:
    return FamilyParser().parse(text, name)


def load_family(path: str) -> FamilySpec:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_family(text, os.path.splitext(os.path.basename(path))[0])
