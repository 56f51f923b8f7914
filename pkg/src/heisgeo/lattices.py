"""Exact lattice computations for small dimensions (<= 6 here).

Everything operates on a positive-definite Gram matrix G; lattice vectors are
integer coefficient tuples c with squared norm c^T G c.  Enumeration is the
Fincke-Pohst walk over a Cholesky triangularization, exact up to floating
point in the radius comparison; LLL is the textbook algorithm with delta=3/4
and is used only to precondition enumeration radii.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import SingularMatrix

_SLACK = 1e-9  # relative slack on squared-radius comparisons


def _cholesky_upper(gram: np.ndarray) -> np.ndarray:
    try:
        low = np.linalg.cholesky(gram)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrix("Gram matrix is not positive definite") from exc
    return low.T


def quadratic_form(gram: np.ndarray, c: np.ndarray) -> float:
    c = np.asarray(c, dtype=float)
    return float(c @ gram @ c)


def enumerate_quadratic(gram: np.ndarray, radius_sq: float, center=None) -> np.ndarray:
    """All integer vectors c with (c - center)^T G (c - center) <= radius_sq.

    Returns an integer array of shape (count, dim).  `center` defaults to 0.
    """
    gram = np.asarray(gram, dtype=float)
    dim = gram.shape[0]
    t = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
    u = _cholesky_upper(gram)
    bound = radius_sq * (1.0 + _SLACK) + 1e-15

    found: list[tuple[int, ...]] = []
    coeffs = np.zeros(dim, dtype=np.int64)

    def walk(level: int, remaining: float) -> None:
        # offset contributed to row `level` by the already-fixed coordinates
        off = float(u[level, level + 1 :] @ (coeffs[level + 1 :] - t[level + 1 :]))
        diag = u[level, level]
        half_width = np.sqrt(max(remaining, 0.0)) / diag
        mid = t[level] - off / diag
        lo = int(np.ceil(mid - half_width - 1e-12))
        hi = int(np.floor(mid + half_width + 1e-12))
        for c in range(lo, hi + 1):
            term = (diag * (c - t[level]) + off) ** 2
            if term > remaining + 1e-15:
                continue
            coeffs[level] = c
            if level == 0:
                found.append(tuple(int(v) for v in coeffs))
            else:
                walk(level - 1, remaining - term)
        coeffs[level] = 0

    walk(dim - 1, bound)
    if not found:
        return np.zeros((0, dim), dtype=np.int64)
    return np.array(sorted(found), dtype=np.int64)


def _canonical_sign(c: np.ndarray) -> np.ndarray:
    for v in c:
        if v != 0:
            return c if v > 0 else -c
    return c


def shortest_vector(gram: np.ndarray) -> tuple[np.ndarray, float]:
    """Exact shortest nonzero vector: (coefficients, norm).

    The enumeration radius is the best diagonal entry, so the search region
    always contains a nonzero vector.  Among minimizers the lexicographically
    smallest canonical-sign representative is returned.
    """
    gram = np.asarray(gram, dtype=float)
    radius_sq = float(np.min(np.diag(gram)))
    cands = enumerate_quadratic(gram, radius_sq)
    best_q = np.inf
    best_c = None
    for c in cands:
        if not np.any(c):
            continue
        q = quadratic_form(gram, c)
        cc = _canonical_sign(c)
        if q < best_q - 1e-15 or (abs(q - best_q) <= 1e-15 and tuple(cc) < tuple(best_c)):
            best_q = q
            best_c = cc
    return np.array(best_c, dtype=np.int64), float(np.sqrt(best_q))


def lll_reduce(gram: np.ndarray, delta: float = 0.75) -> np.ndarray:
    """LLL reduction; returns the unimodular transform U with U G U^T reduced."""
    gram = np.asarray(gram, dtype=float)
    basis = _cholesky_upper(gram).T.copy()  # rows realize the Gram matrix
    m = basis.shape[0]
    u_transform = np.eye(m, dtype=np.int64)

    def gso(rows):
        star = rows.copy()
        mu = np.zeros((m, m))
        for i in range(m):
            for j in range(i):
                mu[i, j] = (rows[i] @ star[j]) / (star[j] @ star[j])
                star[i] = star[i] - mu[i, j] * star[j]
        return star, mu

    star, mu = gso(basis)
    k = 1
    while k < m:
        for j in range(k - 1, -1, -1):
            q = round(mu[k, j])
            if q != 0:
                basis[k] -= q * basis[j]
                u_transform[k] -= q * u_transform[j]
                star, mu = gso(basis)
        if star[k] @ star[k] >= (delta - mu[k, k - 1] ** 2) * (star[k - 1] @ star[k - 1]):
            k += 1
        else:
            basis[[k - 1, k]] = basis[[k, k - 1]]
            u_transform[[k - 1, k]] = u_transform[[k, k - 1]]
            star, mu = gso(basis)
            k = max(k - 1, 1)
    return u_transform


def _independent_greedy(vectors: np.ndarray, norms: np.ndarray, count: int):
    """Greedily pick `count` Q-linearly-independent vectors in norm order."""
    picked: list[np.ndarray] = []
    picked_norms: list[float] = []
    rows: list[list[Fraction]] = []  # row-echelon basis over Q
    order = np.lexsort(tuple(vectors.T[::-1]) + (norms,))
    for idx in order:
        v = [Fraction(int(x)) for x in vectors[idx]]
        for row in rows:
            pivot = next(i for i, x in enumerate(row) if x != 0)
            if v[pivot] != 0:
                factor = v[pivot] / row[pivot]
                v = [a - factor * b for a, b in zip(v, row)]
        if any(x != 0 for x in v):
            rows.append(v)
            picked.append(vectors[idx])
            picked_norms.append(float(norms[idx]))
            if len(picked) == count:
                break
    return np.array(picked, dtype=np.int64), np.array(picked_norms)


def _enumeration_count_estimate(gram: np.ndarray, radius_sq: float) -> float:
    """Rough number of lattice points in the radius ball (Gram-Schmidt box bound)."""
    u = _cholesky_upper(gram)
    return float(np.prod(2.0 * np.sqrt(radius_sq) / np.abs(np.diag(u)) + 1.0))


def successive_minima(gram: np.ndarray, max_points: float = 5e5) -> tuple[np.ndarray, np.ndarray]:
    """Successive minima lambda_1 <= ... <= lambda_m with realizing vectors.

    LLL preconditions the Gram matrix, the reduced diagonal bounds the
    enumeration radius (the reduced basis itself provides m independent
    vectors within it), and a greedy independent pass over the enumerated
    vectors extracts the minima exactly.

    The full-ball enumeration has ~lambda_m^m / covolume points, which blows
    up for extremely anisotropic lattices (the collapse regime).  When the
    estimate exceeds `max_points` the sorted reduced-basis norms are returned
    instead; at such separations the reduced basis realizes the minima scale
    to within the LLL constant, which is all downstream consumers need.
    """
    gram = np.asarray(gram, dtype=float)
    m = gram.shape[0]
    u_transform = lll_reduce(gram)
    reduced = u_transform @ gram @ u_transform.T
    radius_sq = float(np.max(np.diag(reduced)))
    if _enumeration_count_estimate(reduced, radius_sq) > max_points:
        norms = np.sqrt(np.diag(reduced))
        order = np.argsort(norms, kind="stable")
        return norms[order], (u_transform[order]).astype(np.int64)
    cands = enumerate_quadratic(reduced, radius_sq)
    mask = np.any(cands != 0, axis=1)
    cands = cands[mask]
    norms = np.sqrt(np.einsum("ij,jk,ik->i", cands.astype(float), reduced, cands.astype(float)))
    picked, picked_norms = _independent_greedy(cands, norms, m)
    original = picked @ u_transform
    return picked_norms, original.astype(np.int64)


def closest_vector(gram: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float]:
    """Closest lattice vector to a real coefficient vector: (coefficients, distance)."""
    gram = np.asarray(gram, dtype=float)
    target = np.asarray(target, dtype=float)
    u_transform = lll_reduce(gram)
    reduced = u_transform @ gram @ u_transform.T
    u_inv = np.linalg.inv(u_transform.astype(float))
    t_red = target @ u_inv
    babai = np.round(t_red)
    radius_sq = max(quadratic_form(reduced, babai - t_red), 1e-15)
    cands = enumerate_quadratic(reduced, radius_sq, center=t_red)
    best_q = np.inf
    best_c = babai.astype(np.int64)
    for c in cands:
        q = quadratic_form(reduced, c - t_red)
        if q < best_q:
            best_q = q
            best_c = c
    return (best_c @ u_transform).astype(np.int64), float(np.sqrt(best_q))
