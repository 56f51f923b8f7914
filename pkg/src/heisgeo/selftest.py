"""Self-contained verification suite: golden values and randomized properties.

Every check is a function of a seed returning a dict {name, passed, detail};
identical seeds give identical reports.  The nine acceptance checks mirror
the package's external guarantees; the remaining ones exercise per-module
invariants.  Brute-force oracles used here are deliberately independent of
the library routines they validate.
"""

from __future__ import annotations

import math

import numpy as np

from . import collapse as clp
from . import systole as sysmod
from . import volumes
from .geodesics import Covector, geodesic_length, geodesic_point, hamiltonian_residual, momenta, trajectory
from .lattices import quadratic_form, shortest_vector, successive_minima
from .metric import (ShootingOptions, base_torus_gram, distance_group, distance_quotient,
                     norm_A, vertical_distance)
from .moduli import (CanonicalForm, GroupPoint, LatticeParam, MetricParam, canonicalize,
                     delta_invariant, fingerprint, frame_to_fixed, group_inverse, group_mul,
                     validate_lattice)

FORCE = ShootingOptions(force_shooting=True)


# ---------------------------------------------------------------------------
# random draws


def random_metric(rng: np.random.Generator, n: int, rho: str | float = 0.0,
                  scale: float = 2.0, det_min: float = 0.3, cond_max: float = 10.0) -> MetricParam:
    """Random well-conditioned metric parameter; rho may be 'positive'."""
    while True:
        a = rng.uniform(-scale, scale, (2 * n, 2 * n))
        if abs(np.linalg.det(a)) < det_min:
            continue
        if np.linalg.cond(a) > cond_max:
            continue
        break
    if rho == "positive":
        rho_val = float(rng.uniform(0.1, 1.5))
    else:
        rho_val = float(rho)
    return MetricParam(n=n, A_tilde=a, rho=rho_val)


def random_point(rng: np.random.Generator, n: int, scale: float = 1.0) -> GroupPoint:
    return GroupPoint(rng.uniform(-scale, scale, n), rng.uniform(-scale, scale, n),
                      float(rng.uniform(-scale, scale)))


def random_lattice(rng: np.random.Generator, n: int, cap: int = 4) -> LatticeParam:
    r = [int(rng.integers(1, cap + 1))]
    for _ in range(n - 1):
        r.append(r[-1] * int(rng.integers(1, 4)))
    return validate_lattice(n, tuple(r))


def a_family(k: int, rho: float = 1.0) -> MetricParam:
    return MetricParam(n=1, A_tilde=np.diag([float(k), float(k)]), rho=rho)


def b_family(k: int) -> MetricParam:
    return MetricParam(n=1, A_tilde=np.diag([1.0 / k, 1.0 / k]), rho=1.0 / k)


# ---------------------------------------------------------------------------
# oracles (independent of the library routines they check)


_BOX_CACHE: dict[tuple[int, int], np.ndarray] = {}


def _box_grid(dim: int, box: int) -> np.ndarray:
    key = (dim, box)
    if key not in _BOX_CACHE:
        axes = [np.arange(-box, box + 1, dtype=np.int8)] * dim
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
        # keep one of each +-c pair (first nonzero coordinate positive); drops 0 too
        signs = np.sign(grid)
        first = signs[np.arange(grid.shape[0]),
                      np.argmax(signs != 0, axis=1)]
        _BOX_CACHE[key] = grid[first > 0]
    return _BOX_CACHE[key]


def brute_force_shortest(gram: np.ndarray, box: int = 6) -> tuple[np.ndarray, float]:
    """Plain minimum of the quadratic form over the coefficient box [-box, box]^dim."""
    dim = gram.shape[0]
    grid = _box_grid(dim, box)
    best_q = np.inf
    best_c = None
    for chunk in np.array_split(grid, max(1, grid.shape[0] // 500_000)):
        c = chunk.astype(np.float64)
        q = np.einsum("ij,jk,ik->i", c, gram, c)
        idx = int(np.argmin(q))
        if q[idx] < best_q:
            best_q = float(q[idx])
            best_c = chunk[idx].astype(np.int64)
    return best_c, float(np.sqrt(best_q))


def _coefficient_bound(gram: np.ndarray) -> int:
    """Provable coefficient box radius containing a shortest vector."""
    radius_sq = float(np.min(np.diag(gram)))
    lam_min = float(np.min(np.linalg.eigvalsh(gram)))
    return int(np.ceil(np.sqrt(radius_sq / lam_min)))


# ---------------------------------------------------------------------------
# acceptance checks


def check_appendix_golden_values(seed: int) -> dict:
    """Golden systoles and total measures of the two scaling families, k = 1..8."""
    worst = 0.0
    lat = validate_lattice(1, (1,))
    for k in range(1, 9):
        m = a_family(k)
        cf = canonicalize(m)
        sys_val = sysmod.systole_value(lat, cf)[0]
        meas = volumes.total_measure(lat, m, "minimal_popp")
        worst = max(worst, abs(sys_val - 1.0 / k) * k, abs(meas - k**-4 / math.sqrt(2)) / (k**-4 / math.sqrt(2)))
    for k in range(1, 9):
        m = b_family(k)
        cf = canonicalize(m)
        sys_val = sysmod.systole_value(lat, cf)[0]
        meas = volumes.total_measure(lat, m, "minimal_popp")
        # the full-rank branch of the minimal coefficient wins only from k = 2 on,
        # where the measure is k^3; at k = 1 the corank-1 branch gives 2^(-1/2)
        expected = float(k**3) if k >= 2 else 2.0**-0.5
        worst = max(worst, abs(sys_val - k) / k, abs(meas - expected) / expected)
    return {"name": "appendix_golden_values", "passed": bool(worst <= 1e-9),
            "detail": {"worst_rel_error": worst, "tolerance": 1e-9}}


def check_invariant_identities(seed: int) -> dict:
    """delta = sqrt(2 sum d_i^2) and |det| = prod d_i on 200 random metrics."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        m = random_metric(rng, n, scale=3.0, det_min=0.1, cond_max=np.inf)
        fp = fingerprint(m)
        d = np.asarray(fp.d)
        worst = max(worst,
                    abs(fp.delta - math.sqrt(2.0 * float(np.sum(d**2)))) / fp.delta,
                    abs(fp.abs_det - float(np.prod(d))) / fp.abs_det)
    return {"name": "invariant_identities", "passed": bool(worst <= 1e-9),
            "detail": {"draws": 200, "worst_rel_error": worst, "tolerance": 1e-9}}


def check_vertical_consistency(seed: int) -> dict:
    """Forced shooting reproduces the vertical-distance formula, with valid witnesses."""
    rng = np.random.default_rng(seed)
    worst_rel = 0.0
    worst_witness = 0.0
    for i in range(20):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n, rho="positive" if i % 2 else 0.0)
        cf = canonicalize(m)
        for p in (0.1, -0.1, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0):
            formula = vertical_distance(cf, p)
            target = GroupPoint(np.zeros(n), np.zeros(n), p)
            res = distance_group(cf, target, FORCE)
            worst_rel = max(worst_rel, abs(res.value - formula) / formula)
            s = geodesic_point(cf, res.witness_covector, res.witness_time)
            endpoint = frame_to_fixed(cf, (s.x, s.y, s.z))
            err = max(float(np.max(np.abs(endpoint.horizontal() - target.horizontal()))),
                      abs(endpoint.z - target.z))
            length = geodesic_length(res.witness_covector, cf, res.witness_time)
            worst_witness = max(worst_witness, err, abs(length - res.value))
    return {"name": "vertical_consistency", "passed": bool(worst_rel <= 1e-6 and worst_witness <= 1e-6),
            "detail": {"worst_rel_error": worst_rel, "worst_witness_error": worst_witness,
                       "tolerance": 1e-6}}


def check_hamiltonian_convergence(seed: int) -> dict:
    """Residual of the first-order system decays at second order in the step."""
    rng = np.random.default_rng(seed)
    ratios = []
    for i in range(20):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n, rho="positive" if i % 3 == 0 else 0.0)
        cf = canonicalize(m)
        p_z = float(rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0]))
        cov = Covector(rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n),
                       rng.uniform(0.5, 2.0, n) * rng.choice([-1.0, 1.0], n), p_z)
        T = float(rng.uniform(0.8, 2.5))
        r1 = hamiltonian_residual(cf, cov, T, 1000)
        r2 = hamiltonian_residual(cf, cov, T, 2000)
        ratios.append(r1 / r2)
    ratios = np.asarray(ratios)
    ok = bool(np.all((ratios >= 3.5) & (ratios <= 4.5)))
    return {"name": "hamiltonian_convergence", "passed": ok,
            "detail": {"min_ratio": float(ratios.min()), "max_ratio": float(ratios.max()),
                       "window": [3.5, 4.5]}}


def check_systolic_inequality(seed: int) -> dict:
    """Random corank-1 instances satisfy the bound; the fiber ratio is an identity."""
    rng = np.random.default_rng(seed)
    failures = 0
    worst_gap = np.inf
    for _ in range(200):
        n = int(rng.integers(1, 3))
        lat = random_lattice(rng, n)
        m = random_metric(rng, n, scale=2.0, det_min=0.2, cond_max=np.inf)
        rep = sysmod.systolic_bound(lat, m)
        if not rep.holds:
            failures += 1
        worst_gap = min(worst_gap, rep.equality_gap / rep.bound_rhs)
    worst_identity = 0.0
    for _ in range(50):
        r = int(rng.integers(1, 7))
        lat = validate_lattice(1, (r,))
        m = random_metric(rng, 1)
        cf = canonicalize(m)
        s2 = sysmod.vertical_systole(cf)
        meas = volumes.total_measure(lat, m, "popp")
        expected = 2.0**1.125 * math.sqrt(math.pi) * r**-0.25
        worst_identity = max(worst_identity, abs(s2 / meas**0.25 - expected) / expected)
    return {"name": "systolic_inequality", "passed": bool(failures == 0 and worst_identity <= 1e-9),
            "detail": {"instances": 200, "violations": failures,
                       "min_relative_gap": worst_gap,
                       "fiber_ratio_worst_rel_error": worst_identity, "identity_tolerance": 1e-9}}


def check_threshold_classification(seed: int) -> dict:
    """3-dimensional case split at r = 4 pi C2^2 and the attained fiber-branch bound."""
    rng = np.random.default_rng(seed)
    ok = True
    for r in range(1, 31):
        m = random_metric(rng, 1)
        rep = sysmod.classify_3d(r, m)
        expected = "1" if r <= 14 else "2"
        ok = ok and rep.case == expected
    rep100 = sysmod.classify_3d(100, MetricParam(1, np.diag([100.0, 1.0]), 0.0))
    gap = abs(rep100.ratio - rep100.constant) / rep100.constant
    ok = ok and rep100.case == "2" and rep100.equality and gap <= 1e-6
    return {"name": "threshold_classification", "passed": bool(ok),
            "detail": {"threshold": sysmod.THRESHOLD_3D, "attained_gap_r100": gap,
                       "tolerance": 1e-6}}


def check_svp_oracle(seed: int) -> dict:
    """Exact enumeration equals the brute-force box minimum on 100 random forms."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    mismatched_witness = 0
    while count < 100:
        n = int(rng.integers(1, 4))
        lat = random_lattice(rng, n, cap=3)
        a = np.eye(2 * n) * rng.uniform(0.5, 2.0) + rng.uniform(-0.4, 0.4, (2 * n, 2 * n))
        if abs(np.linalg.det(a)) < 0.2:
            continue
        cf = canonicalize(MetricParam(n, a, 0.0))
        gram = base_torus_gram(lat, cf)
        if _coefficient_bound(gram) > 6:
            continue  # keep the [-6, 6] box a provably complete oracle
        count += 1
        w_enum, s_enum = shortest_vector(gram)
        w_brute, s_brute = brute_force_shortest(gram, box=6)
        if not (np.array_equal(w_enum, w_brute) or np.array_equal(w_enum, -w_brute)):
            # distinct minimizers are fine only if they tie exactly
            if abs(quadratic_form(gram, w_enum) - quadratic_form(gram, w_brute)) > 1e-12:
                mismatched_witness += 1
        worst = max(worst, abs(s_enum - s_brute) / s_brute)
    return {"name": "svp_oracle", "passed": bool(worst <= 1e-12 and mismatched_witness == 0),
            "detail": {"instances": count, "worst_rel_error": worst,
                       "witness_mismatches": mismatched_witness}}


def check_collapse_dichotomy(seed: int) -> dict:
    """Scaling families classify as stated and the divergence bound dominates."""
    lat = validate_lattice(1, (1,))
    entries_a = [clp.SequenceEntry(lat, MetricParam(1, np.diag([float(k)] * 2), 0.0), k)
                 for k in range(1, 11)]
    rep_a = clp.classify_sequence(entries_a, 10.0)
    fib_expected = np.array([math.sqrt(2.0 * math.pi) / k for k in range(1, 11)])
    fib_err = float(np.max(np.abs(rep_a.fiber_diams - fib_expected) / fib_expected))
    ok = (rep_a.verdict == "collapsed" and "a" in rep_a.dichotomy_case
          and "b" in rep_a.dichotomy_case and fib_err <= 1e-9)

    entries_b = [clp.SequenceEntry(lat, b_family(k), k) for k in range(1, 11)]
    rep_b = clp.classify_sequence(entries_b, 10.0)
    ok = ok and rep_b.verdict == "non_collapsed"

    bound_ok = True
    for k in range(1, 7):
        r_n = k * k
        cf = canonicalize(MetricParam(1, np.diag([float(r_n), 1.0]), 0.0))
        length = clp.lattice_divergence_bound(r_n, cf, 1.0)
        cap = 4.0 * math.sqrt(2.0) / math.sqrt(r_n)
        bound_ok = bound_ok and length <= cap * (1 + 1e-12) and clp.fiber_diameter(cf) <= length
    ok = ok and bound_ok
    return {"name": "collapse_dichotomy", "passed": bool(ok),
            "detail": {"a_verdict": rep_a.verdict, "a_cases": list(rep_a.dichotomy_case),
                       "b_verdict": rep_b.verdict, "fiber_rel_error": fib_err,
                       "divergence_bound_ok": bound_ok}}


def check_sandwich(seed: int) -> dict:
    """dist_torus <= dist_quotient <= dist_torus + 2 * fiber diameter on random pairs."""
    rng = np.random.default_rng(seed)
    worst_lower = -np.inf
    worst_upper = -np.inf
    for i in range(5):
        lat = validate_lattice(1, (int(rng.integers(1, 4)),))
        m = random_metric(rng, 1, rho="positive" if i % 2 else 0.0,
                          scale=1.5, det_min=0.4, cond_max=6.0)
        cf = canonicalize(m)
        samples = [(random_point(rng, 1), random_point(rng, 1)) for _ in range(50)]
        rep = clp.projection_comparison(lat, cf, samples)
        worst_lower = max(worst_lower, rep.lower_violation)
        worst_upper = max(worst_upper, rep.upper_violation)
        if rep.failed:
            return {"name": "sandwich", "passed": False,
                    "detail": {"failed_samples": list(rep.failed)}}
    ok = worst_lower <= 1e-6 and worst_upper <= 1e-6
    return {"name": "sandwich", "passed": bool(ok),
            "detail": {"worst_lower_violation": worst_lower,
                       "worst_upper_violation": worst_upper, "slack": 1e-6}}


# ---------------------------------------------------------------------------
# module property checks


def check_canonicalize_idempotent(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 4))
        m = random_metric(rng, n, det_min=0.1, cond_max=np.inf, scale=3.0)
        cf = canonicalize(m)
        cf2 = canonicalize(MetricParam(n, cf.A_tilde_canonical, m.rho))
        worst = max(worst, float(np.max(np.abs(np.asarray(cf.d) - np.asarray(cf2.d)))))
    return {"name": "canonicalize_idempotent", "passed": bool(worst <= 1e-12),
            "detail": {"worst_d_drift": worst, "tolerance": 1e-12}}


def check_fingerprint_invariance(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n)
        q, _ = np.linalg.qr(rng.standard_normal((2 * n, 2 * n)))
        m2 = MetricParam(n, m.A_tilde @ q, m.rho)
        f1, f2 = fingerprint(m), fingerprint(m2)
        worst = max(worst,
                    abs(f1.delta - f2.delta) / f1.delta,
                    abs(f1.abs_det - f2.abs_det) / f1.abs_det,
                    float(np.max(np.abs(np.asarray(f1.d) - np.asarray(f2.d)) / np.asarray(f1.d))))
    return {"name": "fingerprint_invariance", "passed": bool(worst <= 1e-9),
            "detail": {"draws": 100, "worst_rel_drift": worst, "tolerance": 1e-9}}


def check_group_axioms(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        p, q, r = (random_point(rng, n, 2.0) for _ in range(3))
        lhs = group_mul(group_mul(p, q), r)
        rhs = group_mul(p, group_mul(q, r))
        worst = max(worst, float(np.max(np.abs(lhs.horizontal() - rhs.horizontal()))),
                    abs(lhs.z - rhs.z))
        back = group_mul(p, group_inverse(p))
        worst = max(worst, float(np.max(np.abs(back.horizontal()))), abs(back.z))
    # bracket relation on integer inputs is exact
    n = 2
    e1 = GroupPoint(np.array([1.0, 0.0]), np.zeros(2), 0.0)
    e3 = GroupPoint(np.zeros(2), np.array([1.0, 0.0]), 0.0)
    comm = group_mul(group_mul(e1, e3), group_mul(group_inverse(e1), group_inverse(e3)))
    exact = (np.all(comm.horizontal() == 0.0) and comm.z == 1.0)
    return {"name": "group_axioms", "passed": bool(worst <= 1e-12 and exact),
            "detail": {"worst_error": worst, "commutator_exact": bool(exact)}}


def check_geodesic_speed(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(20):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n, rho="positive" if i % 2 else 0.0)
        cf = canonicalize(m)
        cov = Covector(rng.uniform(-2, 2, n), rng.uniform(-2, 2, n), float(rng.uniform(-2, 2)))
        ts = np.linspace(0.1, 2.0, 50)
        h = 1e-6
        v = math.sqrt(float(np.sum(cov.p_x**2 + cov.p_y**2)) + cf.rho**2 * cov.p_z**2)
        if v < 0.3:
            continue
        xs_p, ys_p, zs_p = trajectory(cf, cov, ts + h)
        xs_m, ys_m, zs_m = trajectory(cf, cov, ts - h)
        hx, hy = momenta(cf, cov, ts)
        dz = (zs_p - zs_m) / (2 * h)
        # vertical velocity in the orthonormal frame is (dz - d-weighted area rate)/rho
        dx = (xs_p - xs_m) / (2 * h)
        dy = (ys_p - ys_m) / (2 * h)
        xs, ys, zs = trajectory(cf, cov, ts)
        area_rate = 0.5 * np.sum(cf.d_array() * (xs * hy - ys * hx), axis=1)
        vert = (dz - area_rate) / cf.rho if cf.rho > 0 else np.zeros_like(dz)
        speeds = np.sqrt(np.sum(dx**2 + dy**2, axis=1) + vert**2)
        worst = max(worst, float(np.max(np.abs(speeds - v) / v)))
    return {"name": "geodesic_speed", "passed": bool(worst <= 1e-6),
            "detail": {"worst_rel_error": worst, "tolerance": 1e-6}}


def check_geodesic_branch_continuity(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 4))
        m = random_metric(rng, n, scale=1.5, det_min=0.4, cond_max=6.0)
        cf = canonicalize(m)
        px, py = rng.uniform(-1.5, 1.5, n), rng.uniform(-1.5, 1.5, n)
        t = float(rng.uniform(0.5, 1.5))
        s0 = geodesic_point(cf, Covector(px, py, 0.0), t)
        s1 = geodesic_point(cf, Covector(px, py, 1e-6), t)
        worst = max(worst, float(np.max(np.abs(s0.x - s1.x))), float(np.max(np.abs(s0.y - s1.y))),
                    abs(s0.z - s1.z))
    return {"name": "geodesic_branch_continuity", "passed": bool(worst <= 1e-4),
            "detail": {"worst_gap": worst, "tolerance": 1e-4}}


def check_geodesic_periodicity(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        m = random_metric(rng, 1)
        cf = canonicalize(m)
        cov = Covector(rng.uniform(-2, 2, 1), rng.uniform(-2, 2, 1),
                       float(rng.uniform(0.2, 2.0) * rng.choice([-1.0, 1.0])))
        period = 2.0 * math.pi / abs(cov.p_z * cf.d_max)
        s = geodesic_point(cf, cov, period)
        worst = max(worst, float(np.hypot(s.x[0], s.y[0])))
    return {"name": "geodesic_periodicity", "passed": bool(worst <= 1e-9),
            "detail": {"worst_horizontal_return": worst, "tolerance": 1e-9}}


def check_horizontal_agreement(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(50):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n, rho="positive" if i % 2 else 0.0)
        cf = canonicalize(m)
        target = GroupPoint(rng.uniform(-2, 2, n), rng.uniform(-2, 2, n), 0.0)
        expected = norm_A(cf, target.horizontal())
        res = distance_group(cf, target, FORCE)
        worst = max(worst, abs(res.value - expected) / max(expected, 1e-12))
    return {"name": "horizontal_agreement", "passed": bool(worst <= 1e-8),
            "detail": {"draws": 50, "worst_rel_error": worst, "tolerance": 1e-8}}


def check_witness_validity(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(30):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n, rho="positive" if i % 2 else 0.0)
        cf = canonicalize(m)
        target = random_point(rng, n, 1.5)
        res = distance_group(cf, target)
        s = geodesic_point(cf, res.witness_covector, res.witness_time)
        endpoint = frame_to_fixed(cf, (s.x, s.y, s.z))
        err = max(float(np.max(np.abs(endpoint.horizontal() - target.horizontal()))),
                  abs(endpoint.z - target.z))
        length = geodesic_length(res.witness_covector, cf, res.witness_time)
        worst = max(worst, err, abs(length - res.value))
    return {"name": "witness_validity", "passed": bool(worst <= 1e-8),
            "detail": {"worst_error": worst, "tolerance": 1e-8}}


def check_scaling_laws(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 3))
        m = random_metric(rng, n)
        cf = canonicalize(m)
        c = 2.0
        cf_scaled = canonicalize(MetricParam(n, c * m.A_tilde, 0.0))
        v = rng.uniform(-2, 2, 2 * n)
        worst = max(worst, abs(norm_A(cf_scaled, v) - norm_A(cf, v) / c))
        # d_n scales by c^2, so vertical distances scale by 1/c
        worst = max(worst, abs(vertical_distance(cf_scaled, 1.0) - vertical_distance(cf, 1.0) / c))
        lat = random_lattice(rng, n)
        rep = sysmod.systolic_bound(lat, m)
        rep_scaled = sysmod.systolic_bound(lat, MetricParam(n, c * m.A_tilde, 0.0))
        ratio = rep.systole / rep.measure ** (1.0 / (2 * n + 2))
        ratio_scaled = rep_scaled.systole / rep_scaled.measure ** (1.0 / (2 * n + 2))
        worst = max(worst, abs(ratio - ratio_scaled) / ratio)
    return {"name": "scaling_laws", "passed": bool(worst <= 1e-9),
            "detail": {"worst_error": worst, "tolerance": 1e-9}}


def check_volume_routes(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst = 0.0
    ok = True
    for i in range(200):
        n = int(rng.integers(1, 4))
        m = random_metric(rng, n, rho="positive" if i % 2 else 0.0,
                          scale=3.0, det_min=0.1, cond_max=np.inf)
        c = m.skew_form()
        via_structure = float(np.sum(c * c)) ** -0.5 / abs(np.linalg.det(m.A_tilde))
        closed = volumes.popp_coeff(m)
        worst = max(worst, abs(via_structure - closed) / closed)
        mp = volumes.minimal_popp_coeff(m)
        ok = ok and mp <= closed * (1 + 1e-12)
        if m.rho > 0:
            ok = ok and mp <= volumes.riemannian_coeff(m) * (1 + 1e-12)
        else:
            ok = ok and mp == closed
    return {"name": "volume_routes", "passed": bool(ok and worst <= 1e-9),
            "detail": {"draws": 200, "worst_route_disagreement": float(worst), "tolerance": 1e-9}}


def check_quotient_metric_axioms(seed: int) -> dict:
    rng = np.random.default_rng(seed)
    worst_sym = 0.0
    worst_tri = -np.inf
    for _ in range(3):
        lat = validate_lattice(1, (int(rng.integers(1, 3)),))
        m = random_metric(rng, 1, scale=1.5, det_min=0.4, cond_max=6.0)
        cf = canonicalize(m)
        pts = [random_point(rng, 1) for _ in range(3)]
        d01 = distance_quotient(lat, cf, pts[0], pts[1]).value
        d10 = distance_quotient(lat, cf, pts[1], pts[0]).value
        d12 = distance_quotient(lat, cf, pts[1], pts[2]).value
        d02 = distance_quotient(lat, cf, pts[0], pts[2]).value
        worst_sym = max(worst_sym, abs(d01 - d10))
        worst_tri = max(worst_tri, d02 - d01 - d12)
    ok = worst_sym <= 1e-6 and worst_tri <= 1e-6
    return {"name": "quotient_metric_axioms", "passed": bool(ok),
            "detail": {"worst_symmetry_gap": worst_sym, "worst_triangle_violation": worst_tri,
                       "slack": 1e-6}}


def check_counterexample_divergence(seed: int) -> dict:
    """No fixed exponent works for the minimal intrinsic volume: two divergent ratios."""
    lat = validate_lattice(1, (1,))
    ratios_a = []
    ratios_b = []
    for k in range(1, 21):
        m = a_family(k)
        cf = canonicalize(m)
        sys_val = sysmod.systole_value(lat, cf)[0]
        ratios_a.append(sys_val / volumes.total_measure(lat, m, "minimal_popp") ** (1.0 / 3.0))
        m = b_family(k)
        cf = canonicalize(m)
        sys_val = sysmod.systole_value(lat, cf)[0]
        ratios_b.append(sys_val / volumes.total_measure(lat, m, "minimal_popp") ** 0.25)
    inc_a = bool(np.all(np.diff(ratios_a) > 0))
    inc_b = bool(np.all(np.diff(ratios_b) > 0))
    return {"name": "counterexample_divergence", "passed": inc_a and inc_b,
            "detail": {"first_family_increasing": inc_a, "second_family_increasing": inc_b,
                       "final_ratios": [float(ratios_a[-1]), float(ratios_b[-1])]}}


def check_base_ratio_bound(seed: int) -> dict:
    """s1 / measure^(1/4) <= 2^(1/8) C2 r^(1/4) for n = 1 corank-1 instances."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    for _ in range(100):
        r = int(rng.integers(1, 7))
        lat = validate_lattice(1, (r,))
        m = random_metric(rng, 1)
        cf = canonicalize(m)
        s1 = sysmod.shortest_lattice_vector(lat, cf)[1]
        meas = volumes.total_measure(lat, m, "popp")
        bound = 2.0**0.125 * sysmod.LOEWNER_C2 * r**0.25
        worst = max(worst, s1 / meas**0.25 - bound)
    return {"name": "base_ratio_bound", "passed": bool(worst <= 1e-9),
            "detail": {"worst_excess": worst, "tolerance": 1e-9}}


def check_fiber_quotient_bound(seed: int) -> dict:
    """Quotient distance between antipodal fiber points never exceeds the diameter formula."""
    rng = np.random.default_rng(seed)
    worst = -np.inf
    lat = validate_lattice(1, (1,))
    m = random_metric(rng, 1, scale=1.5, det_min=0.4, cond_max=6.0)
    cf = canonicalize(m)
    diam = clp.fiber_diameter(cf)
    half = GroupPoint(np.zeros(1), np.zeros(1), 0.5)
    for _ in range(5):
        base = random_point(rng, 1)
        res = distance_quotient(lat, cf, base, group_mul(base, half))
        worst = max(worst, res.value - diam)
    return {"name": "fiber_quotient_bound", "passed": bool(worst <= 1e-6),
            "detail": {"worst_excess": worst, "formula_diameter": diam, "slack": 1e-6}}


ACCEPTANCE_CHECKS = [
    check_appendix_golden_values,
    check_invariant_identities,
    check_vertical_consistency,
    check_hamiltonian_convergence,
    check_systolic_inequality,
    check_threshold_classification,
    check_svp_oracle,
    check_collapse_dichotomy,
    check_sandwich,
]

PROPERTY_CHECKS = [
    check_canonicalize_idempotent,
    check_fingerprint_invariance,
    check_group_axioms,
    check_geodesic_speed,
    check_geodesic_branch_continuity,
    check_geodesic_periodicity,
    check_horizontal_agreement,
    check_witness_validity,
    check_scaling_laws,
    check_volume_routes,
    check_quotient_metric_axioms,
    check_counterexample_divergence,
    check_base_ratio_bound,
    check_fiber_quotient_bound,
]

ALL_CHECKS = {fn.__name__.removeprefix("check_"): fn for fn in ACCEPTANCE_CHECKS + PROPERTY_CHECKS}


def run_selftest(seed: int = 42, checks: list[str] | None = None) -> dict:
    """Run the named checks (all by default).

    The report is a pure function of (seed, checks): identical inputs give
    byte-identical serialized output.
    """
    names = list(ALL_CHECKS) if checks is None else checks
    unknown = [c for c in names if c not in ALL_CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {unknown}; available: {sorted(ALL_CHECKS)}")
    results = [ALL_CHECKS[name](seed + offset) for offset, name in enumerate(names)]
    failures = [r["name"] for r in results if not r["passed"]]
    return {"seed": seed, "ok": not failures, "failures": failures, "checks": results}
