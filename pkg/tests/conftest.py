import numpy as np
import pytest

from heisgeo.moduli import MetricParam, canonicalize


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def make_cf(diag, rho=0.0):
    """Canonical form from a diagonal horizontal block."""
    d = np.asarray(diag, dtype=float)
    return canonicalize(MetricParam(n=len(d) // 2, A_tilde=np.diag(d), rho=rho))


def random_invertible(rng, size, scale=2.0, det_min=0.3, cond_max=10.0):
    while True:
        a = rng.uniform(-scale, scale, (size, size))
        if abs(np.linalg.det(a)) >= det_min and np.linalg.cond(a) <= cond_max:
            return a
