import pytest
from sympy import Rational

from algebra.exactcore import Place, RatFunc, poly
from cohomology.idrcohomology import (
    PoleDivisor, SearchExhausted, exact_dimension, expected_dimension, hodge_search, idr_class,
    idr_quotient, parabolic_subspace, riemann_roch_basis,
)
from ode.gaussmanin import manin_map, picard_fuchs
from ode.localsolve import is_parabolic, rational_solutions
from surface.weiermodel import Isotrivial, Section

t = RatFunc.var()
ZERO = Place.finite(poly([0, 1]))
ONE = Place.finite(poly([-1, 1]))
INF = Place.infinity()
CUBIC = Place.finite(poly([Rational(27, 4), 0, 0, 1]))


def test_divisor_normalizations():
    D = PoleDivisor.from_quadratic({INF: 4, ZERO: 1})
    assert D.order(INF) == 0
    assert D.order(ZERO) == 1
    assert D.quadratic() == {INF: 4, ZERO: 1}
    assert D.render(quadratic=True) == "{t:1, infinity:4}"
    assert PoleDivisor.of({ZERO: 0}) == PoleDivisor.of({})


def test_riemann_roch_basis():
    M, basis = riemann_roch_basis(PoleDivisor.of({ZERO: 2}))
    assert M == poly([0, 0, 1])
    assert basis == [1 / t ** 2, 1 / t, RatFunc.one()]
    _, basis = riemann_roch_basis(PoleDivisor.of({}))
    assert basis == [RatFunc.one()]
    _, basis = riemann_roch_basis(PoleDivisor.of({INF: -1}))
    assert basis == []


def test_legendre_has_no_cohomology(legendre):
    op = picard_fuchs(legendre)
    for D in (PoleDivisor.of({}), PoleDivisor.of({ZERO: 2, ONE: 2, INF: 2})):
        dim, reps = idr_quotient(op, D)
        assert dim == 0
        assert reps == []
        assert exact_dimension(op, D) == len(parabolic_subspace(op, D))


def test_rank1_constants_carry_the_class(rank1):
    op = picard_fuchs(rank1)
    dim, reps = idr_quotient(op, PoleDivisor.of({}))
    assert dim == 1
    assert reps == [RatFunc.one()]


def test_rank1_quotient_stabilizes(rank1):
    op = picard_fuchs(rank1)
    chain = [PoleDivisor.of({INF: -1}), PoleDivisor.of({}), PoleDivisor.of({CUBIC: 1}),
             PoleDivisor.of({CUBIC: 2, INF: 2})]
    dims = [idr_quotient(op, D)[0] for D in chain]
    assert dims == sorted(dims)
    assert dims[-1] == 1
    assert dims[0] == 0


def test_quotient_representatives_are_parabolic_and_not_exact(rank1):
    op = picard_fuchs(rank1)
    D = PoleDivisor.of({CUBIC: 2, INF: 2})
    _, reps = idr_quotient(op, D)
    for Z in reps:
        assert is_parabolic(op, Z)
        assert rational_solutions(op, Z) is None
    for Z in parabolic_subspace(op, D):
        assert is_parabolic(op, Z)


def test_manin_class_in_quotient(rank1):
    op = picard_fuchs(rank1)
    Z = manin_map(rank1, op, Section.of(0, 1))
    cls = idr_class(op, Z)
    assert cls.is_parabolic
    assert not cls.is_exact
    dim, _ = idr_quotient(op, PoleDivisor.of({CUBIC: 1}))
    assert dim == 1


@pytest.mark.slow
def test_rank1_hodge_search(rank1):
    op = picard_fuchs(rank1)
    result = hodge_search(rank1, op)
    assert (result.p_g, result.h11_prime) == (0, 1)
    assert result.A0.quadratic() == {}
    assert result.A.render(quadratic=True) == "{infinity:4}"
    assert result.holomorphic_basis == ()
    assert result.quotient_basis == (RatFunc.one(),)


def test_legendre_hodge_search_is_trivial(legendre):
    result = hodge_search(legendre, picard_fuchs(legendre))
    assert result.A0 == result.A
    assert result.quotient_basis == ()


def test_search_exhausted(rank1):
    with pytest.raises(SearchExhausted) as err:
        hodge_search(rank1, picard_fuchs(rank1), 2)
    assert err.value.bound == 2


def test_k3_search_needs_non_constant_j(k3):
    with pytest.raises(Isotrivial):
        picard_fuchs(k3)


@pytest.mark.slow
def test_k3_fibred_hodge_search(k3_fibred):
    op = picard_fuchs(k3_fibred)
    result = hodge_search(k3_fibred, op)
    assert (result.p_g, result.h11_prime) == (1, 10)
    assert len(result.holomorphic_basis) == 1
    assert len(parabolic_subspace(op, result.A0)) == 1
    assert exact_dimension(op, result.A0) == 0
    for place, n in result.A0.orders:
        assert result.A.order(place) >= n
    dim, reps = idr_quotient(op, result.A)
    assert dim == result.p_g + result.h11_prime == 11
    for Z in reps:
        assert is_parabolic(op, Z)


@pytest.mark.slow
def test_k3_fibred_reaches_expected_dimension(k3_fibred):
    op = picard_fuchs(k3_fibred)
    dims = [idr_quotient(op, PoleDivisor.of({INF: n}))[0] for n in (8, 16, 24)]
    assert dims == sorted(dims)
    assert dims[-1] == expected_dimension(k3_fibred) == 12
