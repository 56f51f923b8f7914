import numpy as np
import pytest

from heisgeo.errors import RankDeficient
from heisgeo.moduli import MetricParam, validate_lattice
from heisgeo.volumes import (coefficient, minimal_popp_coeff, popp_coeff, riemannian_coeff,
                             total_measure)

from conftest import random_invertible


def metric(diag, rho):
    return MetricParam(n=len(diag) // 2, A_tilde=np.diag(np.asarray(diag, float)), rho=rho)


class TestRiemannian:
    def test_identity(self):
        assert riemannian_coeff(metric([1.0, 1.0], 1.0)) == 1.0

    def test_small_metric_family(self):
        k = 5
        assert np.isclose(riemannian_coeff(metric([1.0 / k, 1.0 / k], 1.0 / k)), k**3)

    def test_determinant(self):
        # |det diag(2,2)| = 4
        assert np.isclose(riemannian_coeff(metric([2.0, 2.0], 1.0)), 0.25)

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            riemannian_coeff(metric([1.0, 1.0], 0.0))


class TestPopp:
    def test_identity(self):
        assert np.isclose(popp_coeff(metric([1.0, 1.0], 0.0)), 2.0**-0.5)

    def test_growing_family(self):
        k = 3
        assert np.isclose(popp_coeff(metric([float(k)] * 2, 0.0)), 1.0 / (np.sqrt(2.0) * k**4))

    def test_scaling_exponent(self, rng):
        for n in (1, 2):
            a = random_invertible(rng, 2 * n)
            c = 1.7
            v1 = popp_coeff(MetricParam(n=n, A_tilde=a, rho=0.0))
            v2 = popp_coeff(MetricParam(n=n, A_tilde=c * a, rho=0.0))
            assert np.isclose(v2, v1 * c ** -(2 * n + 2), rtol=1e-12)

    def test_route_agreement(self, rng):
        # structure-constant matrix route vs closed form, off the diagonal family
        for _ in range(30):
            n = int(rng.integers(1, 4))
            a = random_invertible(rng, 2 * n, cond_max=np.inf, det_min=0.1, scale=3.0)
            m = MetricParam(n=n, A_tilde=a, rho=0.0)
            s = m.skew_form()
            via_structure = float(np.sum(s * s)) ** -0.5 / abs(np.linalg.det(a))
            assert np.isclose(popp_coeff(m), via_structure, rtol=1e-9)


class TestMinimalPopp:
    def test_equals_popp_at_corank_one(self, rng):
        a = random_invertible(rng, 2)
        m = MetricParam(n=1, A_tilde=a, rho=0.0)
        assert minimal_popp_coeff(m) == popp_coeff(m)

    def test_branch_switch(self):
        # min(k, k^2/sqrt(2)) k^2: full-rank branch wins from k = 2 on
        for k in range(2, 7):
            m = metric([1.0 / k] * 2, 1.0 / k)
            assert np.isclose(minimal_popp_coeff(m), float(k**3), rtol=1e-12)
        m1 = metric([1.0, 1.0], 1.0)
        assert np.isclose(minimal_popp_coeff(m1), 2.0**-0.5)

    def test_branch_saturation_in_rho(self):
        # 1/rho dominates for small rho (corank-1 branch), loses for large rho
        assert minimal_popp_coeff(metric([1.0, 1.0], 1e-6)) == popp_coeff(metric([1.0, 1.0], 0.0))
        large = metric([1.0, 1.0], 50.0)
        assert minimal_popp_coeff(large) == riemannian_coeff(large)

    def test_never_exceeds_either_branch(self, rng):
        for _ in range(20):
            a = random_invertible(rng, 2)
            m = MetricParam(n=1, A_tilde=a, rho=float(rng.uniform(0.1, 2.0)))
            assert minimal_popp_coeff(m) <= riemannian_coeff(m) * (1 + 1e-12)
            assert minimal_popp_coeff(m) <= popp_coeff(m) * (1 + 1e-12)


class TestTotalMeasure:
    def test_growing_family_total(self):
        lat = validate_lattice(1, (1,))
        k = 3
        assert np.isclose(total_measure(lat, metric([float(k)] * 2, 0.0), "minimal_popp"),
                          1.0 / (np.sqrt(2.0) * k**4))

    def test_small_family_total(self):
        lat = validate_lattice(1, (1,))
        k = 4
        assert np.isclose(total_measure(lat, metric([1.0 / k] * 2, 1.0 / k), "minimal_popp"),
                          float(k**3))

    def test_linear_in_lattice_covolume(self):
        m = metric([1.0, 1.0, 1.0, 1.0], 0.0)
        one = total_measure(validate_lattice(2, (1, 2)), m, "popp")
        two = total_measure(validate_lattice(2, (2, 2)), m, "popp")
        assert np.isclose(two, 2.0 * one, rtol=1e-12)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            coefficient(metric([1.0, 1.0], 0.0), "hausdorff")
