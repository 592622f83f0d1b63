import numpy as np
import pytest

from ccpair.anorm import MatrixPair


def crandn(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_pair(rng, n=2):
    while True:
        try:
            return MatrixPair(crandn(rng, n, n), crandn(rng, n, n))
        except ValueError:
            continue


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
