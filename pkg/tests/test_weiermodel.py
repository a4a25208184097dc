import pytest
from sympy import Symbol

from algebra.exactcore import Place, RatFunc, poly
from surface.weiermodel import (
    Isotrivial, KodairaType, Section, SectionNotOnCurve, SingularModel, UnclassifiedValuations,
    WeierstrassModel, add_sections, bad_places, check_section, fiber_data, invariants, kodaira_type,
    minimalize_at, multiply_section, negate_section, validate,
)

t = RatFunc.var()


def _table(model):
    return [(fd.place.render(), fd.type.name) for fd in fiber_data(model)]


def test_discriminant_identity(legendre, rank1, hesse, k3):
    for model in (legendre, rank1, hesse, k3):
        inv = invariants(model)
        assert inv.c4 ** 3 - inv.c6 ** 2 == 1728 * inv.delta


def test_rank1_invariants(rank1):
    inv = invariants(rank1)
    assert inv.c4 == -48 * t
    assert inv.c6 == RatFunc.const(-864)
    assert inv.delta == -16 * (4 * t ** 3 + 27)


def test_singular_model_rejected():
    with pytest.raises(SingularModel):
        invariants(WeierstrassModel.short(0, 0))


def test_constant_family_is_isotrivial(constant):
    with pytest.raises(Isotrivial) as err:
        validate(constant)
    assert "isotrivial: j is constant" in str(err.value)
    with pytest.raises(Isotrivial):
        validate(constant, allow_isotrivial=True)


def test_k3_needs_allow_isotrivial(k3):
    with pytest.raises(Isotrivial):
        validate(k3)
    validate(k3, allow_isotrivial=True)


def test_legendre_fibers(legendre):
    assert _table(legendre) == [("t - 1", "I2"), ("t", "I2"), ("infinity", "I2*")]


def test_rank1_fibers(rank1):
    table = _table(rank1)
    assert table[-1] == ("infinity", "III*")
    cubic = fiber_data(rank1)[0]
    assert cubic.place.degree == 3
    assert cubic.type.name == "I1"
    assert (cubic.vc4, cubic.vc6, cubic.vdelta) == (0, 0, 1)
    assert fiber_data(rank1)[-1].twist == 1


def test_hesse_fibers(hesse):
    fibers = fiber_data(hesse)
    assert [fd.type.name for fd in fibers] == ["I3", "I3", "I3"]
    assert [fd.place.degree for fd in fibers] == [1, 2, 1]
    assert fibers[0].place == Place.finite(poly([-3, 1]))
    assert fibers[1].place == Place.finite(poly([9, 3, 1]))


def test_k3_fibers(k3):
    fibers = fiber_data(k3)
    assert [(fd.place.degree, fd.type.name) for fd in fibers] == [(1, "II"), (6, "II"), (1, "II*")]
    assert fibers[-1].twist == 2


def test_kodaira_table():
    assert kodaira_type(0, 0, 5).name == "I5"
    assert kodaira_type(2, 3, 8).name == "I2*"
    assert kodaira_type(3, 6, 9).name == "III*"
    assert kodaira_type(float("inf"), 5, 10).name == "II*"
    with pytest.raises(UnclassifiedValuations):
        kodaira_type(1, 1, 1)


def test_kodaira_type_parse():
    for name in ("I0", "I7", "I0*", "I3*", "II", "III", "IV", "IV*", "III*", "II*"):
        assert KodairaType.parse(name).name == name
    assert KodairaType.parse("I3*").euler == 9
    assert KodairaType.parse("IV*").components == 7
    with pytest.raises(ValueError):
        KodairaType.parse("V")


def test_twist_invariance(rank1):
    twisted = rank1.twist(t + 2)
    assert invariants(twisted).j == invariants(rank1).j


def test_section_check(rank1):
    check_section(rank1, Section.of(0, 1))
    with pytest.raises(SectionNotOnCurve):
        check_section(rank1, Section.of(0, 2))


def test_doubling_on_rank1(rank1):
    P = Section.of(0, 1)
    twoP = multiply_section(rank1, P, 2)
    assert twoP.X == t ** 2 / 4
    assert twoP.Y == -(t ** 3) / 8 - 1
    check_section(rank1, twoP)


def test_group_law_identities(rank1):
    P = Section.of(0, 1)
    assert add_sections(rank1, P, negate_section(rank1, P)).is_zero
    threeP = add_sections(rank1, multiply_section(rank1, P, 2), P)
    assert threeP == multiply_section(rank1, P, 3)
    check_section(rank1, threeP)


def test_torsion(legendre, hesse):
    assert multiply_section(legendre, Section.of(0, 0), 2).is_zero
    assert multiply_section(hesse, Section.of(0, 0), 3).is_zero
    assert not multiply_section(hesse, Section.of(0, 0), 2).is_zero


def test_minimalize_at():
    zero, inf = Place.finite(poly([0, 1])), Place.infinity()
    assert minimalize_at(WeierstrassModel.long(a2=-(1 + t), a4=t), zero) == (0, 0, 2, 0)
    assert minimalize_at(WeierstrassModel.short(t, 1), inf) == (3, 6, 9, 1)


def test_bad_places(rank1):
    places = bad_places(rank1)
    assert [p.render() for p in places] == ["t**3 + 27/4", "infinity"]


def test_render_in_family_variable(legendre):
    assert legendre.render(Symbol("l")) == "a2 = -l - 1, a4 = l"
    assert str(legendre) == "a2 = -t - 1, a4 = t"
