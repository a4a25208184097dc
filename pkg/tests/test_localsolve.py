from sympy import Rational

from algebra.exactcore import Place, RatFunc, poly
from ode.gaussmanin import DiffOp2, manin_map, picard_fuchs
from ode.localsolve import (
    certificates, frobenius_basis, frobenius_residual, homogeneous_rational_solutions,
    is_locally_exact, is_parabolic, lowest_index, rational_solutions, solution_bounds,
)
from surface.weiermodel import Section

t = RatFunc.var()
ZERO = Place.finite(poly([0, 1]))
INF = Place.infinity()


def test_legendre_frobenius_at_zero(legendre):
    op = picard_fuchs(legendre)
    y1, y2 = frobenius_basis(op, ZERO, 6)
    # 2F1(1/2, 1/2; 1; t)
    assert [c.to_rational() for c in y1.coefficients[:4]] == [1, Rational(1, 4), Rational(9, 64),
                                                              Rational(25, 256)]
    assert y1.log_degree == 0
    assert y2.log_degree == 1
    assert all(r.is_zero for r in frobenius_residual(op, y1))
    assert all(r.is_zero for r in frobenius_residual(op, y2, y1))


def test_frobenius_non_integer_gap(rank1):
    op = picard_fuchs(rank1)
    y1, y2 = frobenius_basis(op, INF, 6)
    assert (y2.exponent, y1.exponent) == (Rational(1, 4), Rational(7, 4))
    assert y1.log_degree == y2.log_degree == 0
    assert all(r.is_zero for r in frobenius_residual(op, y1))
    assert all(r.is_zero for r in frobenius_residual(op, y2))


def test_frobenius_at_degree_three_place(rank1):
    op = picard_fuchs(rank1)
    cubic = op.singular_places()[0]
    y1, y2 = frobenius_basis(op, cubic, 5)
    assert all(r.is_zero for r in frobenius_residual(op, y1))
    assert all(r.is_zero for r in frobenius_residual(op, y2, y1))


def test_local_exactness_at_zero(legendre):
    op = picard_fuchs(legendre)
    assert not is_locally_exact(op, 1 / t ** 2, ZERO).locally_exact
    assert is_locally_exact(op, 1 / (t * (t - 1)), ZERO).locally_exact


def test_lowest_index(legendre):
    op = picard_fuchs(legendre)
    assert lowest_index(op, 1 / t ** 3, ZERO) == -1
    assert lowest_index(op, RatFunc.one(), ZERO) == 0


def test_exact_is_parabolic_and_solved(legendre):
    op = picard_fuchs(legendre)
    g = 1 / t
    Z = op.apply(g)
    assert is_parabolic(op, Z)
    assert all(c.locally_exact for c in certificates(op, Z))
    sol = rational_solutions(op, Z)
    assert sol.f == g
    assert not sol.trivial


def test_zero_right_hand_side(legendre):
    op = picard_fuchs(legendre)
    sol = rational_solutions(op, RatFunc.zero())
    assert sol.trivial
    assert sol.f.is_zero
    assert homogeneous_rational_solutions(op) == []


def test_homogeneous_solutions_of_apparent_operator():
    op = DiffOp2(-2 / (t - 2), RatFunc.zero())
    M, d = solution_bounds(op, RatFunc.zero())
    assert d == 3
    sols = homogeneous_rational_solutions(op)
    assert len(sols) == 2
    for f in sols:
        assert op.apply(f).is_zero


def test_manin_class_is_parabolic_not_exact(rank1):
    op = picard_fuchs(rank1)
    Z = manin_map(rank1, op, Section.of(0, 1))
    assert is_parabolic(op, Z)
    assert rational_solutions(op, Z) is None


def test_constant_class_on_rank1(rank1):
    op = picard_fuchs(rank1)
    assert is_parabolic(op, RatFunc.one())
    assert rational_solutions(op, RatFunc.one()) is None
