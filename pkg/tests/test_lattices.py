import numpy as np
import pytest

from heisgeo.errors import SingularMatrix
from heisgeo.lattices import (closest_vector, enumerate_quadratic, lll_reduce, quadratic_form,
                              shortest_vector, successive_minima)
from heisgeo.selftest import brute_force_shortest


def random_gram(rng, dim, scale=1.5):
    while True:
        b = rng.uniform(-scale, scale, (dim, dim))
        if abs(np.linalg.det(b)) > 0.3:
            return b @ b.T


def test_enumerate_counts_unit_lattice():
    # closed ball of radius 1 in Z^2 contains 0 and the four unit vectors
    pts = enumerate_quadratic(np.eye(2), 1.0)
    assert len(pts) == 5


def test_shortest_vector_identity():
    c, norm = shortest_vector(np.eye(3))
    assert norm == 1.0 and np.sum(np.abs(c)) == 1


def test_shortest_vector_hexagonal():
    gram = np.array([[1.0, 0.5], [0.5, 1.0]])
    _, norm = shortest_vector(gram)
    assert np.isclose(norm, 1.0)


def test_shortest_vector_skewed():
    # basis (1, 0), (10, 1): reduction must find the short second direction
    b = np.array([[1.0, 0.0], [10.0, 1.0]])
    gram = b @ b.T
    c, norm = shortest_vector(gram)
    assert np.isclose(norm, 1.0)
    assert np.array_equal(np.abs(c), [0, 1]) or np.isclose(quadratic_form(gram, c), 1.0)


def test_shortest_vector_against_brute_force(rng):
    for _ in range(30):
        dim = int(rng.integers(2, 7))
        gram = random_gram(rng, dim)
        lam_min = np.min(np.linalg.eigvalsh(gram))
        if np.sqrt(np.min(np.diag(gram)) / lam_min) > 6:
            continue
        _, norm = shortest_vector(gram)
        _, oracle = brute_force_shortest(gram, box=6)
        assert np.isclose(norm, oracle, rtol=1e-12)


def test_lll_transform_is_unimodular(rng):
    for _ in range(20):
        gram = random_gram(rng, int(rng.integers(2, 7)))
        u = lll_reduce(gram)
        assert abs(round(np.linalg.det(u.astype(float)))) == 1
        reduced = u @ gram @ u.T
        assert np.all(np.linalg.eigvalsh(reduced) > 0)


def test_successive_minima_diagonal():
    norms, vecs = successive_minima(np.diag([4.0, 1.0, 9.0]))
    assert np.allclose(norms, [1.0, 2.0, 3.0])
    assert abs(round(np.linalg.det(vecs.astype(float)))) >= 1


def test_successive_minima_properties(rng):
    for _ in range(10):
        dim = int(rng.integers(2, 5))
        gram = random_gram(rng, dim)
        norms, vecs = successive_minima(gram)
        assert np.all(np.diff(norms) >= -1e-12)
        _, lam1 = shortest_vector(gram)
        assert np.isclose(norms[0], lam1, rtol=1e-12)
        for k in range(dim):
            assert np.isclose(norms[k], np.sqrt(quadratic_form(gram, vecs[k])), rtol=1e-12)
        assert np.linalg.matrix_rank(vecs) == dim


def test_closest_vector_simple():
    c, dist = closest_vector(np.eye(2), np.array([0.4, 2.6]))
    assert np.array_equal(c, [0, 3]) and np.isclose(dist, np.hypot(0.4, 0.4))


def test_closest_vector_against_scan(rng):
    for _ in range(20):
        dim = int(rng.integers(2, 4))
        gram = random_gram(rng, dim)
        target = rng.uniform(-2, 2, dim)
        _, dist = closest_vector(gram, target)
        # oracle: scan a generous box around the target
        lo = np.floor(target).astype(int) - 4
        best = np.inf
        for offset in np.ndindex(*([9] * dim)):
            c = lo + np.array(offset)
            best = min(best, quadratic_form(gram, c - target))
        assert np.isclose(dist, np.sqrt(best), rtol=1e-12)


def test_not_positive_definite_rejected():
    with pytest.raises(SingularMatrix):
        shortest_vector(np.array([[1.0, 2.0], [2.0, 1.0]]))
