import random
from fractions import Fraction as F

import pytest

from asaikit.asai import random_mock_eigenform
from asaikit.distribution import DistParams


def acceptance_mock(seed: int, p: int, k: int = 2, R: int = 100_000):
    """Mock eigenform with eigen-data at every prime up to R and fast-decaying
    tails (support limited to mid-range primes, small Satake units)."""
    rng = random.Random(seed)
    return random_mock_eigenform(
        rng,
        k=k,
        N=1,
        p=p,
        prime_bound=R,
        support_bound=80,
        support_min=31,
        c_num_bound=2,
        satake_units=(2, -2),
    )


@pytest.fixture(scope="session")
def dist_params_small():
    """Shared profile at modest truncation for unit tests (p = 3, s = 5)."""
    f = acceptance_mock(7, 3, R=10_000)
    return DistParams(f, 3, F(5), 10_000, 128)


@pytest.fixture(scope="session")
def dist_params_p5():
    f = acceptance_mock(8, 5, R=10_000)
    return DistParams(f, 5, F(5), 10_000, 128)
