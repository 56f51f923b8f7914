"""Volume coefficients and total measures of compact Heisenberg manifolds.

All coefficients multiply the fixed-basis form X_1* ^ ... ^ X_2n* ^ Z*, whose
integral over a fundamental domain of the lattice Gamma_r equals prod r_i:

    riemannian   (|rho| |det A_tilde|)^(-1)        (requires rho > 0)
    popp         (delta |det A_tilde|)^(-1)        (corank-1 structure)
    minimal_popp min(|rho|^(-1), delta^(-1)) |det A_tilde|^(-1)

with |rho|^(-1) = +infinity at rho = 0, so the minimal coefficient equals the
corank-1 one there.  Infinity flows through arithmetic as a value, never as
an error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient
from .moduli import EPS_ID, LatticeParam, MetricParam, canonicalize

KINDS = ("riemannian", "popp", "minimal_popp")


@dataclass(frozen=True)
class VolumeCoefficient:
    kind: str
    coeff: float  # may be +inf (riemannian slot at rho = 0 inside the min)


def riemannian_coeff(m: MetricParam) -> float:
    """(|rho| |det A_tilde|)^(-1); only defined for full-rank metrics."""
    if m.rho == 0.0:
        raise RankDeficient("riemannian volume requires rho > 0")
    return 1.0 / (m.rho * abs(float(np.linalg.det(m.A_tilde))))


def _riemannian_or_inf(m: MetricParam) -> float:
    if m.rho == 0.0:
        return np.inf
    return riemannian_coeff(m)


def popp_coeff(m: MetricParam) -> float:
    """Intrinsic corank-1 volume coefficient (delta |det A_tilde|)^(-1).

    Computed along two independent routes: from the structure constants
    c_ij = (A_tilde^T J_n A_tilde)_ij via det B = sum c_ij^2, and in closed
    form with delta = sqrt(2 sum d_i^2) from the canonical invariants.  The
    routes must agree within EPS_ID; the closed form is returned.
    """
    abs_det = abs(float(np.linalg.det(m.A_tilde)))
    c = m.skew_form()
    det_b = float(np.sum(c * c))  # 1x1 matrix B for the single vertical slot
    via_structure = det_b ** -0.5 / abs_det
    d = canonicalize(m).d_array()
    closed = 1.0 / (np.sqrt(2.0 * np.sum(d**2)) * abs_det)
    if abs(via_structure - closed) > EPS_ID * closed:
        raise ArithmeticError(
            f"volume routes disagree: {via_structure!r} vs {closed!r}")
    return float(closed)


def minimal_popp_coeff(m: MetricParam) -> float:
    """min(|rho|^(-1), delta^(-1)) |det A_tilde|^(-1), with |rho|^(-1) = inf at rho = 0.

    Computed as the minimum of the full-rank and corank-1 coefficients, so at
    rho = 0 it equals popp_coeff(m) exactly.
    """
    return float(min(_riemannian_or_inf(m), popp_coeff(m)))


def coefficient(m: MetricParam, kind: str) -> float:
    if kind == "riemannian":
        return riemannian_coeff(m)
    if kind == "popp":
        return popp_coeff(m)
    if kind == "minimal_popp":
        return minimal_popp_coeff(m)
    raise ValueError(f"unknown volume kind {kind!r}; expected one of {KINDS}")


def total_measure(lat: LatticeParam, m: MetricParam, kind: str) -> float:
    """coefficient(kind) times prod r_i, the Haar volume of a fundamental domain."""
    return coefficient(m, kind) * float(np.prod(np.asarray(lat.r, dtype=float)))
