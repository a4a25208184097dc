import pytest
from sympy import Rational

from algebra.exactcore import RatFunc
from kernel.family_parser import (
    FamilyParser, FamilySyntaxError, NonRationalCoefficient, WrongVariable, load_family,
    parse_family,
)
from surface.weiermodel import SectionNotOnCurve, WeierstrassModel, fiber_data

from tests.conftest import family_path

t = RatFunc.var()


def test_legendre_spec():
    spec = parse_family("variable = l\na2 = -(1+l); a4 = l\n")
    assert spec.variable == "l"
    assert spec.model() == WeierstrassModel.long(a2=-(1 + t), a4=t)
    assert spec.coefficients == {"a2": "-(1+l)", "a4": "l"}


def test_rank1_spec_with_section():
    spec = parse_family("a4 = t; a6 = 1  # rank one\nsection = 0, 1\n")
    assert spec.model() == WeierstrassModel.short(t, 1)
    assert len(spec.sections()) == 1
    assert spec.section_texts == [("0", "1")]


def test_k3_spec_uses_caret():
    spec = parse_family("a6 = t^7 + 1")
    assert spec.model().a6 == t ** 7 + 1


def test_rational_coefficients():
    f = FamilyParser().parse_value("3/4*t^2 - 1/(t + 2)")
    assert f == Rational(3, 4) * t ** 2 - 1 / (t + 2)


def test_wrong_variable():
    with pytest.raises(WrongVariable) as err:
        parse_family("variable = l\na4 = t")
    assert err.value.name == "t"


@pytest.mark.parametrize("text", ["a6 = sqrt(2)", "a6 = 0.5", "a6 = 1/0", "a6 = t^(1/2)"])
def test_non_rational_coefficients(text):
    with pytest.raises(NonRationalCoefficient):
        parse_family(text)


def test_syntax_error_position():
    with pytest.raises(FamilySyntaxError) as err:
        parse_family("name = x\n\na4 = (t +")
    assert err.value.line == 3
    assert err.value.column == 6


def test_missing_equals_and_unknown_key():
    with pytest.raises(FamilySyntaxError) as err:
        parse_family("a4 = t; nonsense")
    assert (err.value.line, err.value.column) == (1, 9)
    with pytest.raises(FamilySyntaxError) as err:
        parse_family("a5 = t")
    assert err.value.column == 1


def test_duplicate_key():
    with pytest.raises(FamilySyntaxError):
        parse_family("a4 = t\na4 = 1")


def test_section_must_lie_on_curve():
    with pytest.raises(SectionNotOnCurve):
        parse_family("a4 = t; a6 = 1\nsection = 0, 2")


def test_catalog_files_load():
    for name in ("legendre", "hesse", "rank1", "k3", "k3_fibred", "constant"):
        spec = load_family(family_path(name))
        assert spec.name == name
    hesse = load_family(family_path("hesse"))
    assert [fd.type.name for fd in fiber_data(hesse.model())] == ["I3", "I3", "I3"]


def test_name_defaults_to_file_stem(tmp_path):
    path = tmp_path / "twisted.fam"
    path.write_text("a4 = t; a6 = t^2", encoding="utf-8")
    assert load_family(str(path)).name == "twisted"


@pytest.mark.parametrize("value, column", [
    ("(1).__class__.__mro__[-1].__subclasses__() and 1", 9),
    ("t.__class__", 7),
    ("[t]", 6),
    ("t if 1 else 2", 8),
    ("'1'", 6),
    ("1j", 6),
])
def test_only_arithmetic_tokens_reach_the_evaluator(monkeypatch, value, column):
    def refuse(*args, **kwargs):
        raise AssertionError("expression was evaluated")

    monkeypatch.setattr("kernel.family_parser.parse_expr", refuse)
    with pytest.raises(FamilySyntaxError) as err:
        parse_family(f"a4 = t\na6 = {value}")
    assert (err.value.line, err.value.column) == (2, column)


def test_function_calls_are_rejected_before_evaluation(monkeypatch):
    monkeypatch.setattr("kernel.family_parser.parse_expr", None)
    with pytest.raises(NonRationalCoefficient):
        parse_family("a6 = __import__(1)")
    with pytest.raises(WrongVariable):
        parse_family("a6 = __builtins__")
