import os

import pytest

from algebra.exactcore import RatFunc
from surface.weiermodel import WeierstrassModel, hesse_model

FAMILIES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "families")

t = RatFunc.var()


def family_path(name: str) -> str:
    return os.path.join(FAMILIES_DIR, f"{name}.fam")


@pytest.fixture
def legendre() -> WeierstrassModel:
    """y^2 = x (x - 1) (x - t)."""
    return WeierstrassModel.long(a2=-(1 + t), a4=t)


@pytest.fixture
def rank1() -> WeierstrassModel:
    """y^2 = x^3 + t x + 1."""
    return WeierstrassModel.short(t, 1)


@pytest.fixture
def hesse() -> WeierstrassModel:
    return hesse_model()


@pytest.fixture
def k3() -> WeierstrassModel:
    """y^2 = x^3 + t^7 + 1."""
    return WeierstrassModel.short(0, t ** 7 + 1)


@pytest.fixture
def constant() -> WeierstrassModel:
    return WeierstrassModel.short(0, 1)


@pytest.fixture
def k3_fibred() -> WeierstrassModel:
    """y^2 = x^3 + t x + t^7 + 1."""
    return WeierstrassModel.short(t, t ** 7 + 1)
