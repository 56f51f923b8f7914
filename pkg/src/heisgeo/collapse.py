"""Collapse analysis of sequences of compact Heisenberg manifolds.

A sequence collapses when its total measure in the minimal intrinsic volume
tends to zero; that forces the circle fibers to shrink, which happens through
one (or both) of

    (a)  min(|rho_k|^(-1), delta_k^(-1)) -> 0
    (b)  |det A_tilde_k|^(-1) -> 0

or through divergence of the lattice parameter r_n(k).  Shrinking fibers pin
the quotient metric onto the flat base torus, whose Gram matrix (after
lattice reduction) estimates the limit space; directions whose successive
minima collapse are dropped from the limit dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .errors import HypothesisViolated, MixedDimension, TooFewEntries
from .lattices import closest_vector, lll_reduce, successive_minima
from .metric import (DEFAULT_OPTIONS, ShootingOptions, base_torus_gram,
                     distance_quotient, norm_A, vertical_distance)
from .moduli import CanonicalForm, GroupPoint, LatticeParam, MetricParam, canonicalize
from .volumes import total_measure

__all__ = [
    "SequenceEntry", "SequenceReport", "fiber_diameter", "lattice_divergence_bound",
    "base_torus_gram", "classify_sequence", "projection_comparison", "torus_distance",
]

#: successive minima below EPS_DIM times the largest one count as collapsed directions
EPS_DIM = 1e-3


@dataclass(frozen=True, eq=False)
class SequenceEntry:
    lat: LatticeParam
    m: MetricParam
    k: int

    def __post_init__(self):
        if self.lat.n != self.m.n:
            raise MixedDimension(f"entry k={self.k}: lattice n={self.lat.n}, metric n={self.m.n}")


@dataclass(frozen=True, eq=False)
class SequenceReport:
    measures: np.ndarray
    fiber_diams: np.ndarray
    diam_bound_used: float
    verdict: str  # collapsed | non_collapsed | inconclusive
    dichotomy_case: tuple[str, ...]  # subset of {"a", "b", "lattice_divergence"}
    limit_torus_gram: np.ndarray
    limit_dimension: int
    successive_minima: np.ndarray  # per entry, 2n ascending minima


def fiber_diameter(cf: CanonicalForm) -> float:
    """Diameter of the circle fibers: dist(e, exp(Z/2))."""
    return vertical_distance(cf, 0.5)


def lattice_divergence_bound(r_n: int, cf: CanonicalForm, D: float) -> float:
    """Length of the four-segment horizontal loop realizing exp(Z/2).

    Two sides of length sqrt(r_n/2) along X_n and two of length
    1/sqrt(2 r_n) along X_{2n} commute to exp(Z/2); under the hypotheses
    ||r_n X_n / 2|| <= D and ||X_{2n} / 2|| <= D the total length is at most
    4 sqrt(2) D / sqrt(r_n), so the fiber shrinks as r_n grows.
    """
    if r_n < 1:
        raise ValueError(f"r_n must be a positive integer, got {r_n}")
    if D <= 0:
        raise ValueError(f"D must be positive, got {D}")
    n = cf.n
    e_n = np.zeros(2 * n)
    e_n[n - 1] = 1.0
    e_2n = np.zeros(2 * n)
    e_2n[2 * n - 1] = 1.0
    norm_xn = norm_A(cf, e_n)
    norm_x2n = norm_A(cf, e_2n)
    if 0.5 * r_n * norm_xn > D * (1.0 + 1e-12):
        raise HypothesisViolated(
            f"||(r_n/2) X_n|| = {0.5 * r_n * norm_xn:.6g} exceeds the diameter bound D = {D}")
    if 0.5 * norm_x2n > D * (1.0 + 1e-12):
        raise HypothesisViolated(
            f"||X_2n / 2|| = {0.5 * norm_x2n:.6g} exceeds the diameter bound D = {D}")
    length = math.sqrt(2.0 * r_n) * norm_xn + math.sqrt(2.0 / r_n) * norm_x2n
    cap = 4.0 * math.sqrt(2.0) * D / math.sqrt(r_n)
    if length > cap * (1.0 + 1e-9):
        raise HypothesisViolated(f"loop length {length:.6g} exceeds 4*sqrt(2)*D/sqrt(r_n) = {cap:.6g}")
    diam = fiber_diameter(cf)
    if diam > length * (1.0 + 1e-9):
        raise HypothesisViolated(
            f"fiber diameter {diam:.6g} exceeds the loop length {length:.6g}")
    return float(length)


def _tends_to_zero(series: np.ndarray) -> bool:
    """Monotone-tail test: last half strictly decreasing and a 10x overall drop."""
    tail = series[-math.ceil(len(series) / 2):]
    return bool(np.all(np.diff(tail) < 0.0) and series[-1] < 0.1 * series[0])


def classify_sequence(entries: list[SequenceEntry], D: float,
                      opts: ShootingOptions = DEFAULT_OPTIONS) -> SequenceReport:
    """Collapse verdict, dichotomy cases and limit-torus estimate for a sequence."""
    if len(entries) < 3:
        raise TooFewEntries(f"need at least 3 entries, got {len(entries)}")
    n = entries[0].lat.n
    for e in entries:
        if e.lat.n != n:
            raise MixedDimension(f"entry k={e.k} has n={e.lat.n}, expected {n}")

    def entry_stats(e: SequenceEntry):
        cf = canonicalize(e.m)
        delta = math.sqrt(2.0 * float(np.sum(cf.d_array() ** 2)))
        rho_inv = np.inf if e.m.rho == 0.0 else 1.0 / e.m.rho
        gram = base_torus_gram(e.lat, cf)
        return (total_measure(e.lat, e.m, "minimal_popp"), fiber_diameter(cf),
                min(rho_inv, 1.0 / delta), 1.0 / abs(float(np.linalg.det(e.m.A_tilde))),
                float(e.lat.r[-1]), successive_minima(gram)[0], gram)

    stats = parallel_map(entry_stats, entries)
    measures = np.array([s[0] for s in stats])
    fibers = np.array([s[1] for s in stats])
    min_slot = np.array([s[2] for s in stats])  # min(|rho|^-1, delta^-1) per entry
    inv_det = np.array([s[3] for s in stats])
    r_n = np.array([s[4] for s in stats])
    minima = np.array([s[5] for s in stats])
    last_gram = stats[-1][6]

    cases = []
    if _tends_to_zero(min_slot):
        cases.append("a")
    if _tends_to_zero(inv_det):
        cases.append("b")
    if np.all(np.diff(r_n) > 0.0):
        cases.append("lattice_divergence")

    if _tends_to_zero(measures):
        verdict = "collapsed"
    elif measures[-1] <= 0.1 * measures[0]:
        verdict = "inconclusive"
    else:
        verdict = "non_collapsed"

    u = lll_reduce(last_gram)
    reduced = u @ last_gram @ u.T
    last_minima = minima[-1]
    keep = last_minima >= EPS_DIM * last_minima[-1]
    return SequenceReport(
        measures=measures, fiber_diams=fibers, diam_bound_used=float(D),
        verdict=verdict, dichotomy_case=tuple(cases),
        limit_torus_gram=reduced, limit_dimension=int(np.sum(keep)),
        successive_minima=minima,
    )


def torus_distance(lat: LatticeParam, cf: CanonicalForm, p: GroupPoint, q: GroupPoint) -> float:
    """Flat quotient distance between the horizontal projections of p and q."""
    gram = base_torus_gram(lat, cf)
    target = np.linalg.solve(lat.basis_matrix(), q.horizontal() - p.horizontal())
    _, dist = closest_vector(gram, target)
    return dist


@dataclass(frozen=True, eq=False)
class ProjectionReport:
    lower_violation: float  # max of dist_torus - dist_quotient over samples
    upper_violation: float  # max of dist_quotient - dist_torus - 2*fiber_diam
    per_sample: np.ndarray  # columns: dist_torus, dist_quotient
    failed: tuple[int, ...]  # sample indices whose solver call was best-effort


def projection_comparison(lat: LatticeParam, cf: CanonicalForm,
                          samples: list[tuple[GroupPoint, GroupPoint]],
                          opts: ShootingOptions = DEFAULT_OPTIONS) -> ProjectionReport:
    """Sandwich check dist_torus <= dist_quotient <= dist_torus + 2 fiber diameter."""
    diam = fiber_diameter(cf)

    def sample_row(pair):
        p, q = pair
        res = distance_quotient(lat, cf, p, q, opts)
        return torus_distance(lat, cf, p, q), res.value, res.best_effort

    triples = parallel_map(sample_row, samples)
    rows = np.array([[t[0], t[1]] for t in triples]).reshape(len(samples), 2)
    failed = [i for i, t in enumerate(triples) if t[2]]
    lower = float(np.max(rows[:, 0] - rows[:, 1], initial=-np.inf))
    upper = float(np.max(rows[:, 1] - rows[:, 0] - 2.0 * diam, initial=-np.inf))
    return ProjectionReport(lower_violation=lower, upper_violation=upper,
                            per_sample=rows, failed=tuple(failed))
