import numpy as np
import pytest

import clusterlab
from clusterlab.generators import gen_moons
from clusterlab.metrics import pairwise


@pytest.fixture(scope="session")
def iris():
    return clusterlab.iris()


@pytest.fixture(scope="session")
def iris_distances(iris):
    return pairwise(iris)


@pytest.fixture(scope="session")
def moons2000():
    return gen_moons(2000, 0.07, seed=0)


@pytest.fixture(scope="session")
def moons_distances(moons2000):
    return pairwise(moons2000)


def random_points(rng, n, m=2, scale=5.0):
    return scale * rng.random((n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
