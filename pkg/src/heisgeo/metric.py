"""Distances on H_n and on its compact quotients.

Exact formulas cover horizontal targets (straight segments) and vertical
targets (vertical line vs. full-turn helix); everything else reduces to a
one-dimensional root finding in the vertical momentum p_z.  For fixed p_z the
endpoint equations are linear in the horizontal momenta, block by block, so
shooting solves 2x2 systems and then finds the root of the scalar vertical
equation.  Minimizers are searched within the first vertical period
|p_z| d_i T <= 2 pi; beyond it geodesics stop being minimizing.

Quotient distances on Gamma_r \\ H_n enumerate lattice representatives with
two exact lower bounds for pruning: the horizontal norm of the logarithm and
the vertical distance of the z-part minus that norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionMismatch, ShootingFailure
from .geodesics import Covector, _area_over, _sin_over, _versin_over
from .lattices import enumerate_quadratic
from .moduli import CanonicalForm, GroupPoint, LatticeParam, fixed_to_frame, group_inverse, group_mul

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ShootingOptions:
    """Knobs for the boundary-value solver; defaults match the test tolerances."""

    brackets: int = 64          # subintervals scanned for a sign change in p_z
    root_tol: float = 1e-10     # absolute tolerance handed to the root finder
    zero_tol: float = 1e-9      # below this, horizontal/vertical parts count as zero
    force_shooting: bool = False  # skip the closed-form dispatch (for cross-validation)


DEFAULT_OPTIONS = ShootingOptions()


@dataclass(frozen=True, eq=False)
class DistanceResult:
    value: float
    method: str  # vertical_formula | horizontal_formula | shooting | quotient_enumeration
    witness_covector: Covector | None = None
    witness_time: float | None = None
    best_effort: bool = False
    representative: GroupPoint | None = None


def norm_A(cf: CanonicalForm, v: np.ndarray) -> float:
    """Metric norm of a horizontal vector given in the fixed basis."""
    v = np.asarray(v, dtype=float)
    if v.shape != (2 * cf.n,):
        raise DimensionMismatch(f"expected a {2 * cf.n}-vector, got shape {v.shape}")
    return float(np.linalg.norm(cf.A_inv @ v))


def vertical_distance(cf: CanonicalForm, p: float) -> float:
    """Distance from the identity to exp(p Z).

    The minimum of the vertical-line length |p|/rho (infinite at rho = 0) and
    the full-turn helix length (2/d_n) sqrt(|p| pi d_n - pi^2 rho^2).  The
    helix closes up only when |p| d_n >= 2 pi rho^2; below that threshold its
    branch is treated as infinite (at the threshold the two branches agree).
    """
    p = float(p)
    if p == 0.0:
        return 0.0
    ap = abs(p)
    rho = cf.rho
    dn = cf.d_max
    line = np.inf if rho == 0.0 else ap / rho
    if ap * dn >= 2.0 * np.pi * rho**2:
        helix = (2.0 / dn) * np.sqrt(ap * np.pi * dn - (np.pi * rho) ** 2)
    else:
        helix = np.inf
    return float(min(line, helix))


def _vertical_witness(cf: CanonicalForm, z: float) -> tuple[Covector, float]:
    """Witness covector (at time 1) for the vertical distance to exp(z Z)."""
    n = cf.n
    rho = cf.rho
    dn = cf.d_max
    ap = abs(z)
    sign = 1.0 if z >= 0 else -1.0
    p_x = np.zeros(n)
    p_y = np.zeros(n)
    if rho > 0.0 and ap * dn <= 2.0 * np.pi * rho**2:
        return Covector(p_x, p_y, z / rho**2), 1.0
    # amp^2 = (|z| - 2 pi rho^2 / d_n) * 4 pi / d_n
    amp = np.sqrt(max((ap - 2.0 * np.pi * rho**2 / dn) * 4.0 * np.pi / dn, 0.0))
    p_x[n - 1] = amp
    return Covector(p_x, p_y, sign * TWO_PI / dn), 1.0


def _block_solve(d: np.ndarray, p_z: float, x_frame: np.ndarray, y_frame: np.ndarray,
                 skip: np.ndarray | None = None):
    """Horizontal momenta reaching (x_frame, y_frame) at time 1 for given p_z."""
    xi = p_z * d
    s_v = _sin_over(xi, 1.0)
    c_v = _versin_over(xi, 1.0)
    det = s_v**2 + c_v**2
    if skip is not None:
        det = np.where(skip, 1.0, det)
    p_x = (s_v * x_frame + c_v * y_frame) / det
    p_y = (-c_v * x_frame + s_v * y_frame) / det
    if skip is not None:
        p_x = np.where(skip, 0.0, p_x)
        p_y = np.where(skip, 0.0, p_y)
    return p_x, p_y


def _z_at(cf: CanonicalForm, p_z: float, p_x: np.ndarray, p_y: np.ndarray) -> float:
    d = cf.d_array()
    g_v = _area_over(p_z * d, 1.0)
    return cf.rho**2 * p_z + 0.5 * float(np.sum(d * g_v * (p_x**2 + p_y**2)))


def _shoot(cf: CanonicalForm, x_f: np.ndarray, y_f: np.ndarray, z_f: float,
           opts: ShootingOptions) -> tuple[float, Covector]:
    """Minimal geodesic to frame coordinates (x_f, y_f, z_f) with z_f >= 0."""
    n = cf.n
    d = cf.d_array()
    dn = cf.d_max
    p_max = TWO_PI / dn
    rho = cf.rho
    candidates: list[tuple[float, Covector]] = []

    def length_of(p_x, p_y, p_z):
        return float(np.sqrt(np.sum(p_x**2 + p_y**2) + rho**2 * p_z**2))

    if z_f <= opts.zero_tol:
        # straight segment; the p_z -> 0 limit of the block solve
        cov = Covector(x_f.copy(), y_f.copy(), 0.0)
        candidates.append((length_of(x_f, y_f, 0.0), cov))

    def f(p_z: float) -> float:
        p_x, p_y = _block_solve(d, p_z, x_f, y_f)
        val = _z_at(cf, p_z, p_x, p_y) - z_f
        return val if np.isfinite(val) else np.inf

    if z_f > opts.zero_tol:
        lo = p_max * 1e-9
        hi = p_max * (1.0 - 1e-9)
        grid = np.linspace(lo, hi, opts.brackets + 1)
        vals = np.array([f(p) for p in grid])
        for i in range(len(grid) - 1):
            if not (np.isfinite(vals[i]) and np.isfinite(vals[i + 1])):
                continue
            if vals[i] == 0.0:
                root = grid[i]
            elif vals[i] < 0.0 <= vals[i + 1]:
                root = brentq(f, grid[i], grid[i + 1], xtol=opts.root_tol, maxiter=200)
            else:
                continue
            p_x, p_y = _block_solve(d, root, x_f, y_f)
            candidates.append((length_of(p_x, p_y, root), Covector(p_x, p_y, root)))
            break  # the vertical equation is monotone in p_z: one interior root

    # boundary helix: momentum amplitude in the top plane(s) is free when the
    # target has no component there, adding vertical progress at |xi_n| = 2 pi
    top = np.abs(d - dn) <= 1e-12 * dn
    if np.all(np.hypot(x_f[top], y_f[top]) <= opts.zero_tol):
        p_x, p_y = _block_solve(d, p_max, x_f, y_f, skip=top)
        z_base = _z_at(cf, p_max, p_x, p_y)
        amp_sq = (z_f - z_base) * 2.0 * p_max
        if amp_sq >= -opts.zero_tol:
            p_x = p_x.copy()
            p_x[n - 1] = np.sqrt(max(amp_sq, 0.0))
            candidates.append((length_of(p_x, p_y, p_max), Covector(p_x, p_y, p_max)))

    if not candidates:
        raise ShootingFailure("no geodesic candidate bracketed", best=None)
    return min(candidates, key=lambda c: c[0])


def distance_group(cf: CanonicalForm, target: GroupPoint,
                   opts: ShootingOptions = DEFAULT_OPTIONS) -> DistanceResult:
    """Distance from the identity to `target` on H_n with a realizing covector.

    Horizontal and vertical targets are dispatched to their closed forms
    unless ``opts.force_shooting`` is set, in which case the solver handles
    them too (used to cross-validate the formulas).
    """
    x_f, y_f, z_f = fixed_to_frame(cf, target)
    hor = float(np.sqrt(np.sum(x_f**2 + y_f**2)))

    if not opts.force_shooting:
        if abs(z_f) <= opts.zero_tol:
            cov = Covector(x_f, y_f, 0.0)
            return DistanceResult(value=hor, method="horizontal_formula",
                                  witness_covector=cov, witness_time=1.0)
        if hor <= opts.zero_tol:
            cov, t_w = _vertical_witness(cf, z_f)
            return DistanceResult(value=vertical_distance(cf, z_f), method="vertical_formula",
                                  witness_covector=cov, witness_time=t_w)

    if z_f < 0.0:
        # (x, -y, -z) is an isometry fixing the identity; flip back afterwards
        length, cov = _shoot(cf, x_f, -y_f, -z_f, opts)
        cov = Covector(cov.p_x, -cov.p_y, -cov.p_z)
    else:
        length, cov = _shoot(cf, x_f, y_f, z_f, opts)
    return DistanceResult(value=length, method="shooting",
                          witness_covector=cov, witness_time=1.0)


def base_torus_gram(lat: LatticeParam, cf: CanonicalForm) -> np.ndarray:
    """Gram matrix of the horizontal lattice basis {r_i X_i, X_{n+j}}."""
    if lat.n != cf.n:
        raise DimensionMismatch(f"lattice has n = {lat.n}, canonical form has n = {cf.n}")
    basis = lat.basis_matrix()
    w = cf.A_inv @ basis  # columns = basis vectors in the orthonormal frame
    return w.T @ w


def lattice_element(lat: LatticeParam, a, b, m: int) -> GroupPoint:
    """Lattice point with horizontal part (r .* a, b) and central offset m."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ra = np.asarray(lat.r, dtype=float) * a
    return GroupPoint(ra, b, float(m) + 0.5 * float(ra @ b))


def distance_quotient(lat: LatticeParam, cf: CanonicalForm, p: GroupPoint, q: GroupPoint,
                      opts: ShootingOptions = DEFAULT_OPTIONS) -> DistanceResult:
    """Quotient distance on Gamma_r \\ H_n between the classes of p and q.

    Minimizes distance_group(e, p^{-1} gamma q) over lattice elements gamma,
    starting from gamma = e and pruning candidates whose horizontal-norm
    lower bound, or vertical lower bound minus it, already exceeds the best
    value found.
    """
    if not (lat.n == cf.n == p.n == q.n):
        raise DimensionMismatch("lattice, metric and points must share n")
    inv_p = group_inverse(p)
    w0 = group_mul(inv_p, q)
    best_effort = False
    try:
        best = distance_group(cf, w0, opts)
    except ShootingFailure as exc:  # pragma: no cover - defensive
        best = DistanceResult(value=exc.best if exc.best is not None else np.inf,
                              method="quotient_enumeration", best_effort=True)
        best_effort = True
    best_value = best.value
    best_cov, best_time, best_rep = best.witness_covector, best.witness_time, w0

    gram = base_torus_gram(lat, cf)
    delta = q.horizontal() - p.horizontal()
    shift = np.linalg.solve(lat.basis_matrix(), delta)
    slack = 1e-9
    coeff_box = enumerate_quadratic(gram, (best_value * (1.0 + slack)) ** 2 + slack,
                                    center=-shift)
    n = lat.n
    for c in coeff_box:
        a, b = c[:n], c[n:]
        gamma0 = lattice_element(lat, a, b, 0)
        w_base = group_mul(group_mul(inv_p, gamma0), q)
        hor_bound = norm_A(cf, w_base.horizontal())
        if hor_bound > best_value + slack:
            continue
        m0 = int(np.round(-w_base.z))
        for direction in (1, -1):
            m = m0 if direction == 1 else m0 - 1
            while True:
                z_w = w_base.z + m
                if (not np.any(c)) and m == 0:
                    m += direction
                    continue  # gamma = e already handled
                if vertical_distance(cf, z_w) - hor_bound > best_value + slack:
                    break
                w = GroupPoint(w_base.x, w_base.y, z_w)
                try:
                    res = distance_group(cf, w, opts)
                except ShootingFailure as exc:
                    best_effort = True
                    if exc.best is not None and exc.best < best_value:
                        best_value = exc.best
                        best_cov, best_time, best_rep = None, None, w
                    m += direction
                    continue
                if res.value < best_value:
                    best_value = res.value
                    best_cov, best_time, best_rep = res.witness_covector, res.witness_time, w
                m += direction

    return DistanceResult(value=best_value, method="quotient_enumeration",
                          witness_covector=best_cov, witness_time=best_time,
                          best_effort=best_effort, representative=best_rep)
