import numpy as np
import pytest

from heisgeo.geodesics import (Covector, geodesic_length, geodesic_point, hamiltonian_residual,
                               momenta, trajectory)
from heisgeo.moduli import MetricParam, canonicalize

from conftest import make_cf, random_invertible


def rk4_hamiltonian_oracle(cf, cov, T, steps=4000):
    """Integrate the first-order system directly; independent of the closed form.

    State (x, y, z, hx, hy); hz = p_z is conserved.  The momentum rotation
    direction is fixed by requiring consistency with the vertical equation
    z' = (1/2) sum d_i (x_i hy_i - y_i hx_i) + rho^2 p_z.
    """
    d = cf.d_array()
    rho = cf.rho
    pz = cov.p_z

    def rhs(state):
        x, y, hx, hy = state[0], state[1], state[2], state[3]
        dz = 0.5 * np.sum(d * (x * hy - y * hx)) + rho**2 * pz
        return np.array([hx, hy, -d * pz * hy, d * pz * hx]), dz

    h = T / steps
    x = np.zeros_like(cov.p_x)
    y = np.zeros_like(cov.p_y)
    hx = cov.p_x.copy()
    hy = cov.p_y.copy()
    z = 0.0
    state = np.array([x, y, hx, hy])
    for _ in range(steps):
        k1, dz1 = rhs(state)
        k2, dz2 = rhs(state + 0.5 * h * k1)
        k3, dz3 = rhs(state + 0.5 * h * k2)
        k4, dz4 = rhs(state + h * k3)
        state = state + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        z += (h / 6.0) * (dz1 + 2 * dz2 + 2 * dz3 + dz4)
    return state[0], state[1], z


class TestGeodesicPoint:
    def test_zero_vertical_momentum_is_straight(self):
        cf = make_cf([1.7, 0.4], rho=0.3)
        cov = Covector(np.array([1.0]), np.array([0.0]), 0.0)
        s = geodesic_point(cf, cov, 2.0)
        assert np.allclose(s.x, [2.0]) and np.allclose(s.y, [0.0]) and s.z == 0.0

    def test_full_circle_height(self):
        # cross-checked against direct RK4 integration of the Hamiltonian system
        cf = make_cf([1.0, 1.0])
        cov = Covector(np.array([1.0]), np.array([0.0]), 1.0)
        T = 2.0 * np.pi
        s = geodesic_point(cf, cov, T)
        assert abs(s.x[0]) < 1e-12 and abs(s.y[0]) < 1e-12
        assert np.isclose(s.z, np.pi, atol=1e-12)
        ox, oy, oz = rk4_hamiltonian_oracle(cf, cov, T)
        assert np.allclose([ox[0], oy[0]], [0.0, 0.0], atol=1e-9)
        assert np.isclose(oz, np.pi, atol=1e-9)

    def test_time_zero(self, rng):
        cf = make_cf([0.5, 2.0, 0.5, 2.0], rho=1.1)
        cov = Covector(rng.normal(size=2), rng.normal(size=2), 0.7)
        s = geodesic_point(cf, cov, 0.0)
        assert np.all(s.x == 0.0) and np.all(s.y == 0.0) and s.z == 0.0

    def test_matches_rk4_on_random_data(self, rng):
        for _ in range(5):
            n = int(rng.integers(1, 3))
            a = random_invertible(rng, 2 * n)
            cf = canonicalize(MetricParam(n=n, A_tilde=a, rho=float(rng.uniform(0, 1))))
            cov = Covector(rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n),
                           float(rng.uniform(-1.5, 1.5)))
            T = float(rng.uniform(0.5, 2.0))
            s = geodesic_point(cf, cov, T)
            ox, oy, oz = rk4_hamiltonian_oracle(cf, cov, T)
            assert np.allclose(s.x, ox, atol=1e-8)
            assert np.allclose(s.y, oy, atol=1e-8)
            assert np.isclose(s.z, oz, atol=1e-8)

    def test_negative_time_rejected(self):
        cf = make_cf([1.0, 1.0])
        with pytest.raises(ValueError):
            geodesic_point(cf, Covector(np.ones(1), np.zeros(1), 0.0), -1.0)

    def test_branch_continuity(self, rng):
        cf = make_cf([1.3, 0.8])
        px, py = rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1)
        s0 = geodesic_point(cf, Covector(px, py, 0.0), 1.0)
        s1 = geodesic_point(cf, Covector(px, py, 1e-6), 1.0)
        assert abs(s0.x[0] - s1.x[0]) < 1e-4
        assert abs(s0.z - s1.z) < 1e-4

    def test_periodicity_of_horizontal_projection(self, rng):
        for _ in range(10):
            a = random_invertible(rng, 2)
            cf = canonicalize(MetricParam(n=1, A_tilde=a, rho=0.0))
            pz = float(rng.uniform(0.3, 2.0))
            cov = Covector(rng.uniform(-1, 1, 1), rng.uniform(-1, 1, 1), pz)
            s = geodesic_point(cf, cov, 2.0 * np.pi / (pz * cf.d_max))
            assert np.hypot(s.x[0], s.y[0]) < 1e-9


class TestSpeedAndLength:
    def test_unit_covector(self):
        cf = make_cf([1.0, 1.0])
        assert geodesic_length(Covector(np.array([1.0]), np.array([0.0]), 0.0), cf, 1.0) == 1.0

    def test_vertical_point_length(self):
        # reaching exp(pZ) with a full-period helix gives length 2 sqrt(pi p)
        p = 1.7
        cf = make_cf([1.0, 1.0])
        pz = np.sqrt(np.pi / p)
        cov = Covector(np.array([1.0]), np.array([0.0]), pz)
        T = 2.0 * np.pi / pz
        s = geodesic_point(cf, cov, T)
        assert np.allclose([s.x[0], s.y[0]], 0.0, atol=1e-12)
        assert np.isclose(s.z, p, rtol=1e-12)
        assert np.isclose(geodesic_length(cov, cf, T), 2.0 * np.sqrt(np.pi * p), rtol=1e-12)

    def test_length_scales_with_covector(self, rng):
        cf = make_cf([0.7, 1.9], rho=0.4)
        cov = Covector(rng.normal(size=1), rng.normal(size=1), 0.8)
        scaled = Covector(3.0 * cov.p_x, 3.0 * cov.p_y, 3.0 * cov.p_z)
        assert np.isclose(geodesic_length(scaled, cf, 2.0),
                          3.0 * geodesic_length(cov, cf, 2.0), rtol=1e-12)

    def test_speed_constant_along_path(self, rng):
        cf = make_cf([0.5, 1.5, 0.5, 1.5], rho=0.9)
        cov = Covector(rng.uniform(-1, 1, 2), rng.uniform(-1, 1, 2), 1.2)
        ts = np.linspace(0.1, 2.0, 30)
        hx, hy = momenta(cf, cov, ts)
        two_h = np.sum(hx**2 + hy**2, axis=1) + cf.rho**2 * cov.p_z**2
        assert np.allclose(np.sqrt(two_h), geodesic_point(cf, cov, 1.0).speed, rtol=1e-12)


class TestHamiltonianResidual:
    def test_straight_line_exact(self):
        cf = make_cf([2.0, 0.5])
        cov = Covector(np.array([1.3]), np.array([-0.2]), 0.0)
        assert hamiltonian_residual(cf, cov, 2.0, 1000) <= 1e-8

    def test_reference_magnitude(self):
        cf = make_cf([1.0, 1.0])
        cov = Covector(np.array([1.0]), np.array([0.0]), 1.0)
        assert hamiltonian_residual(cf, cov, np.pi, 2000) <= 1e-5

    def test_second_order_convergence(self):
        cf = make_cf([1.0, 1.0])
        cov = Covector(np.array([1.0]), np.array([0.0]), 1.0)
        r1 = hamiltonian_residual(cf, cov, np.pi, 1000)
        r2 = hamiltonian_residual(cf, cov, np.pi, 2000)
        assert 3.5 <= r1 / r2 <= 4.5

    def test_minimum_steps_enforced(self):
        cf = make_cf([1.0, 1.0])
        with pytest.raises(ValueError):
            hamiltonian_residual(cf, Covector(np.ones(1), np.zeros(1), 0.0), 1.0, 5)


def test_trajectory_shapes():
    cf = make_cf([1.0, 2.0, 1.0, 2.0])
    cov = Covector(np.array([1.0, 0.0]), np.array([0.0, 1.0]), 0.5)
    xs, ys, zs = trajectory(cf, cov, np.linspace(0, 1, 7))
    assert xs.shape == (7, 2) and ys.shape == (7, 2) and zs.shape == (7,)
