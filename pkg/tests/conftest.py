import numpy as np
import pytest

from multilevy import (
    FrequencyGrid,
    Interaction,
    Monomial,
    Power,
    ProductCoupling,
    Quadratic,
    SaturatingCoupling,
    Separable,
    gaussian_field,
)


@pytest.fixture(scope="session")
def grid1d():
    return FrequencyGrid(shape=(1024,), dxi=(0.02,))


@pytest.fixture(scope="session")
def grid1d_small():
    return FrequencyGrid(shape=(256,), dxi=(0.08,))


@pytest.fixture(scope="session")
def grid2d():
    return FrequencyGrid(shape=(128, 128), dxi=(0.12, 0.12))


@pytest.fixture(scope="session")
def gaussian_family():
    half = Quadratic(matrix=[[0.5]])
    return Separable(symbols=(half, half))


@pytest.fixture(scope="session")
def cauchy_family():
    return Monomial(exponents=(2, 1), symbol=Power(alpha=1.0))


@pytest.fixture(scope="session")
def biharmonic_product_family():
    p2 = Power(alpha=2.0)
    return Interaction(psi1=p2, psi2=p2, psi3=p2, coupling=ProductCoupling)


@pytest.fixture(scope="session")
def saturating_family():
    return Interaction(
        psi1=Power(alpha=2.0),
        psi2=Power(alpha=1.0),
        psi3=Quadratic(matrix=[[0.5]]),
        coupling=SaturatingCoupling,
    )


@pytest.fixture(scope="session")
def gaussian_datum(grid1d):
    return gaussian_field(grid1d)


def rel_l2(a, b):
    num = np.sqrt(np.sum(np.abs(a - b) ** 2))
    den = np.sqrt(np.sum(np.abs(b) ** 2))
    return num / den if den > 0 else num
