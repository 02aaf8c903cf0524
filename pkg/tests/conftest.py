import numpy as np
import pytest

from affequil.fixtures import (
    cyclic_3x3_fixture,
    four_map_fixture,
    kron_pair_fixture,
)


def rel_err(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    scale = np.maximum(np.maximum(np.abs(a), np.abs(b)), 1e-300)
    return float((np.abs(a - b) / scale).max())


def random_invertible(rng, d, min_condition=5e-3):
    """Random Gaussian matrix, resampled until decently conditioned."""
    while True:
        A = rng.normal(size=(d, d))
        sv = np.linalg.svd(A, compute_uv=False)
        if sv[-1] >= min_condition * sv[0]:
            return A


@pytest.fixture(scope="session")
def thm1():
    return kron_pair_fixture()


@pytest.fixture(scope="session")
def thm2():
    return four_map_fixture()


@pytest.fixture(scope="session")
def eq1():
    return cyclic_3x3_fixture()
