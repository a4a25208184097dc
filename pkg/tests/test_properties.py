import random
from typing import Iterator, List

import numpy as np
import pytest
from sympy import Rational

from algebra.exactcore import EllSurfError, Place, RatFunc, divisor, poly, valuation
from cohomology.idrcohomology import expected_dimension
from ode.gaussmanin import fuchs_defect, gauge_transform, local_exponents, manin_map, picard_fuchs
from ode.localsolve import check_places, is_locally_exact, is_parabolic, rational_solutions
from ode.monodromy import circle_loop, integrate, local_monodromies
from surface.invariants import surface_invariants
from surface.weiermodel import (
    Section, SingularModel, WeierstrassModel, fiber_data, invariants, validate,
)

SEED = 20240611
FUZZ_MODELS = 200
OPERATOR_MODELS = 40


def _poly(rng: random.Random, max_degree: int) -> RatFunc:
    d = rng.randint(0, max_degree)
    return RatFunc.make(poly([rng.randint(-3, 3) for _ in range(d + 1)]))


def _models(rng: random.Random, count: int, max_degree: int) -> Iterator[WeierstrassModel]:
    made = 0
    while made < count:
        model = WeierstrassModel.short(_poly(rng, min(max_degree, 4)), _poly(rng, max_degree))
        try:
            validate(model)
        except EllSurfError:
            continue
        made += 1
        yield model


def _long_models(rng: random.Random, count: int) -> List[WeierstrassModel]:
    out = []
    while len(out) < count:
        model = WeierstrassModel.long(*(_poly(rng, 2) for _ in range(5)))
        try:
            invariants(model)
        except SingularModel:
            continue
        out.append(model)
    return out


def test_discriminant_identity_on_long_models():
    rng = random.Random(SEED)
    for model in _long_models(rng, FUZZ_MODELS):
        inv = invariants(model)
        assert inv.c4 ** 3 - inv.c6 ** 2 == 1728 * inv.delta


def test_euler_number_and_leray_identity():
    rng = random.Random(SEED + 1)
    for model in _models(rng, FUZZ_MODELS, 6):
        inv = surface_invariants(model)
        assert inv.e % 12 == 0
        assert inv.e > 0
        assert expected_dimension(model) + 2 + inv.sum_m_minus_1 == inv.b2
        assert inv.rank_bound >= 0


@pytest.mark.slow
def test_operators_are_fuchsian_with_exponent_relation():
    rng = random.Random(SEED + 2)
    for model in _models(rng, OPERATOR_MODELS, 4):
        op = picard_fuchs(model)
        for place in op.singular_places():
            local_exponents(op, place)
        assert fuchs_defect(op) == 0


@pytest.mark.slow
def test_gauge_transform_is_a_group_action():
    rng = random.Random(SEED + 3)
    for model in _models(rng, OPERATOR_MODELS // 4, 3):
        op = picard_fuchs(model)
        g = _poly(rng, 2) + 1 if rng.random() < 0.5 else 1 / (_poly(rng, 2) + 7)
        h = _poly(rng, 2) + 5
        if g.is_zero or h.is_zero:
            continue
        assert gauge_transform(gauge_transform(op, g), h) == gauge_transform(op, g * h)


@pytest.mark.slow
def test_exact_classes_are_locally_exact_and_solved():
    rng = random.Random(SEED + 4)
    for model in _models(rng, OPERATOR_MODELS // 4, 3):
        op = picard_fuchs(model)
        g = _poly(rng, 2) / (_poly(rng, 1) + 11)
        Z = op.apply(g)
        assert is_parabolic(op, Z)
        sol = rational_solutions(op, Z)
        assert sol is not None
        assert op.apply(sol.f) == Z


t = RatFunc.var()
PLACES = (
    Place.finite(poly([-3, 1])),
    Place.finite(poly([1, 0, 1])),
    Place.finite(poly([-2, 0, 1])),
    Place.finite(poly([Rational(27, 4), 0, 0, 1])),
    Place.finite(poly([-2, 0, 0, 1])),
)
TWISTS = (t + 2, 1 / (t ** 2 + 1), 3 * t ** 3)
SUBSTITUTIONS = (t + 5, 7 * t, t - Rational(1, 3))


def _nonzero(rng: random.Random, max_degree: int) -> RatFunc:
    while True:
        f = _poly(rng, max_degree)
        if not f.is_zero:
            return f


def _random_function(rng: random.Random) -> RatFunc:
    f = _nonzero(rng, 3) / _nonzero(rng, 3)
    for place in PLACES[:3]:
        f = f * RatFunc.make(place.pi) ** rng.randint(0, 2) / RatFunc.make(place.pi) ** rng.randint(0, 2)
    return f


def _fibres(model: WeierstrassModel):
    return [(fd.place, fd.type.name) for fd in fiber_data(model)]


def test_fibres_and_invariants_survive_twists_and_base_translations(rank1):
    rng = random.Random(SEED + 5)
    for model in [rank1] + list(_models(rng, 10, 4)):
        base = surface_invariants(model)
        for u in TWISTS:
            twisted = model.twist(u)
            assert _fibres(twisted) == _fibres(model)
            assert surface_invariants(twisted) == base
        for g in SUBSTITUTIONS:
            moved = surface_invariants(model.substitute(g))
            assert moved == base
            assert moved.kodaira_multiset == base.kodaira_multiset


def test_divisor_degree_is_zero():
    rng = random.Random(SEED + 6)
    for _ in range(FUZZ_MODELS):
        f = _random_function(rng)
        assert sum(p.degree * n for p, n in divisor(f).items()) == 0


def test_valuation_is_additive():
    rng = random.Random(SEED + 7)
    places = PLACES + (Place.infinity(),)
    for _ in range(FUZZ_MODELS // 4):
        f, g = _random_function(rng), _random_function(rng)
        for place in places:
            assert valuation(f * g, place) == valuation(f, place) + valuation(g, place)


def test_residue_inverses():
    rng = random.Random(SEED + 8)
    for place in PLACES:
        F = place.residue_field
        for _ in range(20):
            x = F(poly([Rational(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(F.degree)]))
            if x.is_zero:
                continue
            assert x * x.inverse() == F.one


@pytest.mark.slow
def test_local_exactness_is_linear(rank1):
    rng = random.Random(SEED + 9)
    op = picard_fuchs(rank1)
    Z1 = manin_map(rank1, op, Section.of(0, 1))
    cubic = RatFunc.make(PLACES[3].pi)
    for _ in range(5):
        Z2 = _nonzero(rng, 3) / cubic ** rng.randint(0, 2)
        c = Rational(rng.randint(-5, 5), rng.randint(1, 3))
        Z = Z1 + c * Z2
        if Z.is_zero:
            continue
        for place in check_places(op, Z):
            v1 = is_locally_exact(op, Z1, place).vector()
            v2 = is_locally_exact(op, Z2, place).vector()
            assert is_locally_exact(op, Z, place).vector() == [a + c * b for a, b in zip(v1, v2)]


@pytest.mark.slow
def test_monodromy_is_homotopy_invariant(legendre):
    op = picard_fuchs(legendre)
    zero = Place.finite(poly([0, 1]))
    base = 0.5 + 0.5j
    reference = integrate(op, circle_loop(base, 0j, 0.3, (zero,)))
    for radius, segments in ((0.25, 16), (0.35, 24), (0.3, 32)):
        M = integrate(op, circle_loop(base, 0j, radius, (zero,), segments=segments))
        assert np.allclose(M.entries, reference.entries, atol=1e-7)

    first = local_monodromies(legendre, op)
    moved = local_monodromies(legendre, op, base_point=first.base_point + 0.01 + 0.01j)
    assert [lm.place for lm in moved.loops] == [lm.place for lm in first.loops]
    for a, b in zip(first.loops, moved.loops):
        assert abs(a.matrix.trace - b.matrix.trace) < 1e-8
