import pytest

from cohomology.idrcohomology import expected_dimension
from surface.invariants import (
    COMPONENT_NOTE, compare_isogeny_invariants, j_degree, surface_invariants,
)
from surface.weiermodel import Isotrivial


def test_legendre_invariants(legendre):
    inv = surface_invariants(legendre)
    assert (inv.e, inv.chiO, inv.p_g, inv.q) == (12, 1, 0, 0)
    assert inv.betti == (1, 0, 10, 0, 1)
    assert inv.h11 == 10
    assert inv.sum_m_minus_1 == 8
    assert inv.rank_bound == 0
    assert inv.j_degree == 6
    assert inv.rho_given_r(0) == inv.h11
    assert inv.kodaira_multiset == ["I2", "I2", "I2*"]


def test_hesse_invariants(hesse):
    inv = surface_invariants(hesse)
    assert inv.e == 12
    assert inv.sum_m_minus_1 == 8
    assert inv.rank_bound == 0
    assert inv.j_degree == 12
    assert inv.kodaira_multiset == ["I3"] * 4


def test_rank1_invariants(rank1):
    inv = surface_invariants(rank1)
    assert inv.e == 12
    assert inv.sum_m_minus_1 == 7
    assert inv.rank_bound == 1
    assert j_degree(rank1) == 3
    assert inv.kodaira_multiset == ["I1", "I1", "I1", "III*"]


def test_k3_invariants(k3):
    inv = surface_invariants(k3, allow_isotrivial=True)
    assert (inv.e, inv.p_g, inv.h11) == (24, 1, 20)
    assert inv.sum_m_minus_1 == 8
    assert inv.rank_bound == 10
    assert inv.j_degree == 0
    assert inv.kodaira_multiset.count("II") == 7
    assert expected_dimension(k3, allow_isotrivial=True) == 12


def test_isotrivial_gate(k3, constant):
    with pytest.raises(Isotrivial):
        surface_invariants(k3)
    with pytest.raises(Isotrivial):
        surface_invariants(constant, allow_isotrivial=True)


def test_leray_identity(legendre, rank1, hesse):
    for model in (legendre, rank1, hesse):
        inv = surface_invariants(model)
        assert expected_dimension(model) + 2 + inv.sum_m_minus_1 == inv.b2
    assert expected_dimension(legendre) == 0
    assert expected_dimension(rank1) == 1


def test_compare_same_family(legendre):
    cmp = compare_isogeny_invariants(legendre, legendre)
    assert cmp.mismatches == []
    assert cmp.verdict == "necessary conditions hold"
    assert cmp.note == COMPONENT_NOTE


def test_compare_detects_mismatch(legendre, rank1):
    cmp = compare_isogeny_invariants(legendre, rank1)
    assert "j_degree" in cmp.mismatches
    assert "sum_m_minus_1" in cmp.mismatches
    assert "e" not in cmp.mismatches
    assert cmp.verdict == "not generically isogenous"


def test_k3_fibred_invariants(k3_fibred):
    inv = surface_invariants(k3_fibred)
    assert (inv.e, inv.p_g, inv.h11) == (24, 1, 20)
    assert inv.kodaira_multiset == ["I1"] * 14 + ["II*"]
    assert inv.sum_m_minus_1 == 8
    assert inv.rank_bound == 10
    assert expected_dimension(k3_fibred) == 12
