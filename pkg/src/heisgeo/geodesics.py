"""Closed-form normal geodesics from the identity and residual checks.

For a canonical-form metric with invariants d_i and vertical scale rho, the
geodesic issuing from the identity with initial momenta (p_x, p_y, p_z) in the
metric-adapted frame is, writing xi_i = p_z d_i,

    x_i(t) = S(xi_i, t) p_{x_i} - C(xi_i, t) p_{y_i}
    y_i(t) = C(xi_i, t) p_{x_i} + S(xi_i, t) p_{y_i}
    z(t)   = rho^2 p_z t + (1/2) sum_i d_i G(xi_i, t) (p_{x_i}^2 + p_{y_i}^2)

with S = sin(xi t)/xi, C = (1 - cos(xi t))/xi, G = (xi t - sin(xi t))/xi^2.
At p_z = 0 these reduce exactly to straight lines x_i = p_{x_i} t,
y_i = p_{y_i} t, z = 0.  The momenta rotate at rate xi_i:

    h_{x_i}(t) = p_{x_i} cos(xi_i t) - p_{y_i} sin(xi_i t)
    h_{y_i}(t) = p_{x_i} sin(xi_i t) + p_{y_i} cos(xi_i t)

and the speed sqrt(sum(p_x^2 + p_y^2) + rho^2 p_z^2) is constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .moduli import CanonicalForm

# Below this |xi t| the trig expressions are evaluated by 4th-order series.
# The subtracted forms lose up to ~1e-5 relative accuracy near u = 1e-5, so
# the switch happens well above that; at u = 1e-2 the series truncation error
# is ~1e-17 relative while direct evaluation of (u - sin u) is still fine.
SMALL_U = 1e-2


@dataclass(frozen=True, eq=False)
class Covector:
    """Initial momenta (h_{x_i}(0), h_{y_i}(0), h_z(0)) in the adapted frame."""

    p_x: np.ndarray
    p_y: np.ndarray
    p_z: float

    def __post_init__(self):
        px = np.atleast_1d(np.asarray(self.p_x, dtype=float))
        py = np.atleast_1d(np.asarray(self.p_y, dtype=float))
        if px.shape != py.shape or px.ndim != 1:
            raise DimensionMismatch("p_x and p_y must be equal-length vectors")
        if not (np.all(np.isfinite(px)) and np.all(np.isfinite(py)) and np.isfinite(self.p_z)):
            raise DimensionMismatch("covector entries must be finite")
        px.flags.writeable = False
        py.flags.writeable = False
        object.__setattr__(self, "p_x", px)
        object.__setattr__(self, "p_y", py)
        object.__setattr__(self, "p_z", float(self.p_z))

    @property
    def n(self) -> int:
        return self.p_x.shape[0]


@dataclass(frozen=True, eq=False)
class GeodesicSample:
    """One sample of a geodesic: time, frame coordinates and (constant) speed."""

    t: float
    x: np.ndarray
    y: np.ndarray
    z: float
    speed: float


def _sin_over(xi: np.ndarray, t: float) -> np.ndarray:
    """S(xi, t) = sin(xi t)/xi, series near xi t = 0 (value t at xi = 0)."""
    u = xi * t
    small = np.abs(u) < SMALL_U
    out = np.empty_like(u)
    us = u[small]
    out[small] = t * (1.0 - us**2 / 6.0 + us**4 / 120.0)
    ub = u[~small]
    out[~small] = np.sin(ub) / xi[~small]
    return out


def _versin_over(xi: np.ndarray, t: float) -> np.ndarray:
    """C(xi, t) = (1 - cos(xi t))/xi, series near xi t = 0 (value 0 at xi = 0)."""
    u = xi * t
    small = np.abs(u) < SMALL_U
    out = np.empty_like(u)
    us = u[small]
    out[small] = (t * us / 2.0) * (1.0 - us**2 / 12.0 + us**4 / 360.0)
    ub = u[~small]
    out[~small] = (1.0 - np.cos(ub)) / xi[~small]
    return out


def _area_over(xi: np.ndarray, t: float) -> np.ndarray:
    """G(xi, t) = (xi t - sin(xi t))/xi^2, series near xi t = 0 (value 0 at xi = 0)."""
    u = xi * t
    small = np.abs(u) < SMALL_U
    out = np.empty_like(u)
    us = u[small]
    out[small] = (t**2 * us / 6.0) * (1.0 - us**2 / 20.0 + us**4 / 840.0)
    ub = u[~small]
    out[~small] = (ub - np.sin(ub)) / xi[~small] ** 2
    return out


def _check_compatible(cf: CanonicalForm, cov: Covector) -> None:
    if cf.n != cov.n:
        raise DimensionMismatch(f"canonical form has n = {cf.n}, covector has n = {cov.n}")


def speed(cf: CanonicalForm, cov: Covector) -> float:
    """Constant speed sqrt(2H) = sqrt(sum(p_x^2 + p_y^2) + rho^2 p_z^2)."""
    _check_compatible(cf, cov)
    return float(np.sqrt(np.sum(cov.p_x**2 + cov.p_y**2) + cf.rho**2 * cov.p_z**2))


def trajectory(cf: CanonicalForm, cov: Covector, ts: np.ndarray):
    """Vectorized frame coordinates (x, y, z) at the given times.

    Returns arrays of shape (len(ts), n), (len(ts), n) and (len(ts),).
    """
    _check_compatible(cf, cov)
    ts = np.asarray(ts, dtype=float)
    d = cf.d_array()
    xi = cov.p_z * d
    xs = np.empty((ts.size, cf.n))
    ys = np.empty((ts.size, cf.n))
    zs = np.empty(ts.size)
    p_sq = cov.p_x**2 + cov.p_y**2
    for k, t in enumerate(ts):
        s_t = _sin_over(xi, float(t))
        c_t = _versin_over(xi, float(t))
        g_t = _area_over(xi, float(t))
        xs[k] = s_t * cov.p_x - c_t * cov.p_y
        ys[k] = c_t * cov.p_x + s_t * cov.p_y
        zs[k] = cf.rho**2 * cov.p_z * t + 0.5 * float(np.sum(d * g_t * p_sq))
    return xs, ys, zs


def momenta(cf: CanonicalForm, cov: Covector, ts: np.ndarray):
    """Rotating horizontal momenta h_x(t), h_y(t) at the given times."""
    _check_compatible(cf, cov)
    ts = np.asarray(ts, dtype=float)
    xi = cov.p_z * cf.d_array()
    u = np.outer(ts, xi)
    cos_u, sin_u = np.cos(u), np.sin(u)
    hx = cos_u * cov.p_x - sin_u * cov.p_y
    hy = sin_u * cov.p_x + cos_u * cov.p_y
    return hx, hy


def geodesic_point(cf: CanonicalForm, cov: Covector, t: float) -> GeodesicSample:
    """Evaluate the geodesic from the identity at time t >= 0 (frame coordinates)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    xs, ys, zs = trajectory(cf, cov, np.array([t]))
    return GeodesicSample(t=float(t), x=xs[0], y=ys[0], z=float(zs[0]), speed=speed(cf, cov))


def geodesic_length(cov: Covector, cf: CanonicalForm, T: float) -> float:
    """Length of the geodesic on [0, T]: T * sqrt(2H)."""
    if T < 0:
        raise ValueError(f"T must be >= 0, got {T}")
    return float(T) * speed(cf, cov)


def hamiltonian_residual(cf: CanonicalForm, cov: Covector, T: float, steps: int) -> float:
    """Finite-difference residual of the first-order system along the closed form.

    Checks the 2n+1 state equations

        x_i' = h_{x_i},  y_i' = h_{y_i},
        z'   = (1/2) sum_i d_i (x_i h_{y_i} - y_i h_{x_i}) + rho^2 p_z

    with central differences on a uniform grid of `steps` intervals.  A
    correct closed form makes the result O(h^2) in the step h = T/steps.
    """
    if steps < 10:
        raise ValueError(f"steps must be >= 10, got {steps}")
    _check_compatible(cf, cov)
    ts = np.linspace(0.0, float(T), steps + 1)
    h = float(T) / steps
    xs, ys, zs = trajectory(cf, cov, ts)
    hx, hy = momenta(cf, cov, ts)
    d = cf.d_array()

    dx = (xs[2:] - xs[:-2]) / (2.0 * h)
    dy = (ys[2:] - ys[:-2]) / (2.0 * h)
    dz = (zs[2:] - zs[:-2]) / (2.0 * h)
    res_x = np.abs(dx - hx[1:-1])
    res_y = np.abs(dy - hy[1:-1])
    z_rhs = 0.5 * np.sum(d * (xs * hy - ys * hx), axis=1) + cf.rho**2 * cov.p_z
    res_z = np.abs(dz - z_rhs[1:-1])
    return float(max(res_x.max(initial=0.0), res_y.max(initial=0.0), res_z.max(initial=0.0)))
