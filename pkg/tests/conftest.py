import numpy as np
import pytest

import mkropina as mk

SQRT_HALF = 1.0 / np.sqrt(2.0)


@pytest.fixture(scope="session")
def su2():
    return mk.preset("su2")


@pytest.fixture(scope="session")
def u2():
    return mk.preset("u2")


@pytest.fixture(scope="session")
def abelian4():
    return mk.preset("abelian_4")


@pytest.fixture(scope="session")
def su2_pair(su2):
    return mk.build_inner_product_pair(su2, mk.ReductiveDecomposition(3, ()), np.eye(3))


@pytest.fixture(scope="session")
def u2_pair(u2):
    return mk.build_inner_product_pair(u2, mk.ReductiveDecomposition(4, ()), np.eye(4))


@pytest.fixture(scope="session")
def u2_central_met(u2_pair):
    """u2 with identity products and the central defining vector X = 0.8 e0."""
    return mk.MKropinaMetric(m_exp=1.0, x_vec=[0.8, 0, 0, 0], gram=u2_pair.gram)


@pytest.fixture(scope="session")
def flag_a():
    """Y = (e0 + e2)/sqrt(2), U = e1: the worked central-X fixture (K = 0.04)."""
    y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
    u = np.array([0.0, 1.0, 0.0, 0.0])
    return mk.Flag(y, u, orthonormal=True)


@pytest.fixture(scope="session")
def flag_b():
    """Y = (e0 + e2)/sqrt(2), U = (e0 - e2)/sqrt(2): commuting edges, K = 0."""
    y = np.array([SQRT_HALF, 0.0, SQRT_HALF, 0.0])
    u = np.array([SQRT_HALF, 0.0, -SQRT_HALF, 0.0])
    return mk.Flag(y, u, orthonormal=True)


def metric_for_preset(name: str, m_exp: float = 1.0) -> tuple:
    """(metric, pair) for a preset with identity products and a 0.8-norm X.

    X is the central e0 for u2/abelian_4 and e1 for su2.
    """
    alg = mk.preset(name)
    dec = mk.ReductiveDecomposition(alg.dim, ())
    pair = mk.build_inner_product_pair(alg, dec, np.eye(alg.dim))
    x = np.zeros(alg.dim)
    x[0] = 0.8
    met = mk.MKropinaMetric(m_exp=m_exp, x_vec=x, gram=pair.gram)
    return met, pair
