"""Lattices, left-invariant metric parameters and canonical forms on H_n.

The Heisenberg group H_n is coordinatized by exp(sum x_i X_i + sum y_i X_{n+i}
+ z Z) in a fixed basis {X_1, ..., X_2n, Z} with [X_i, X_{i+n}] = Z and all
other brackets zero.  A metric parameter is a pair (A_tilde, rho) where the
columns of A_tilde span the horizontal slot and rho scales the vertical one;
the inner product makes {A_tilde X_1, ..., A_tilde X_2n} (and rho Z when
rho != 0) orthonormal.

Canonicalization multiplies A_tilde from the right by an orthogonal matrix R
so that S = A_tilde^T J_n A_tilde becomes the block form
[[0, diag(d)], [-diag(d), 0]] with 0 < d_1 <= ... <= d_n.  The d_i are the
imaginary parts of the eigenvalues +-i d_i of S and classify the metric up to
the orthogonal right action.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DivisibilityError, NonPositiveEntry, SingularMatrix

EPS_DET = 1e-10    # singularity threshold for |det A_tilde|
EPS_CANON = 1e-9   # tolerance for the canonical block form residual
EPS_ID = 1e-9      # relative tolerance for the determinant / HS-norm identities


def symplectic_j(n: int) -> np.ndarray:
    """Standard skew form J_n = [[0, I_n], [-I_n, 0]] on R^{2n}."""
    j = np.zeros((2 * n, 2 * n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def _frozen_array(obj, arr: np.ndarray, name: str) -> None:
    arr = np.array(arr, dtype=float)
    arr.flags.writeable = False
    object.__setattr__(obj, name, arr)


@dataclass(frozen=True, eq=False)
class LatticeParam:
    """Divisibility tuple r = (r_1, ..., r_n), r_i | r_{i+1}, classifying a lattice.

    The lattice is generated by exp(r_1 X_1), ..., exp(r_n X_n),
    exp(X_{n+1}), ..., exp(X_{2n}) and exp(Z).
    """

    n: int
    r: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatch(f"n must be >= 1, got {self.n}")
        r = tuple(int(v) for v in self.r)
        if len(r) != self.n:
            raise DimensionMismatch(f"len(r) = {len(r)} does not match n = {self.n}")
        for i, v in enumerate(r):
            if v < 1:
                raise NonPositiveEntry(i, v)
        for i in range(self.n - 1):
            if r[i + 1] % r[i] != 0:
                raise DivisibilityError(i + 1, r[i], r[i + 1])
        object.__setattr__(self, "r", r)

    def basis_matrix(self) -> np.ndarray:
        """Columns r_1 X_1, ..., r_n X_n, X_{n+1}, ..., X_{2n} in the fixed basis."""
        return np.diag(np.concatenate([np.asarray(self.r, float), np.ones(self.n)]))


def validate_lattice(n: int, r) -> LatticeParam:
    """Construct a LatticeParam, raising on any violated invariant."""
    return LatticeParam(n=int(n), r=tuple(r))


@dataclass(frozen=True, eq=False)
class MetricParam:
    """Left-invariant metric parameter (A_tilde, rho).

    rho is normalized to be >= 0 at construction; the orthogonal right action
    contains -1 in the vertical slot, so the sign is not an invariant.
    """

    n: int
    A_tilde: np.ndarray
    rho: float

    def __post_init__(self):
        a = np.array(self.A_tilde, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] % 2 != 0:
            raise DimensionMismatch(f"A_tilde must be square of even size, got shape {a.shape}")
        if a.shape[0] != 2 * self.n:
            raise DimensionMismatch(f"A_tilde is {a.shape[0]}x{a.shape[0]} but n = {self.n}")
        if not np.all(np.isfinite(a)):
            raise SingularMatrix("A_tilde has non-finite entries")
        if abs(np.linalg.det(a)) <= EPS_DET:
            raise SingularMatrix(f"|det A_tilde| <= {EPS_DET}")
        _frozen_array(self, a, "A_tilde")
        object.__setattr__(self, "rho", abs(float(self.rho)))

    def skew_form(self) -> np.ndarray:
        """S = A_tilde^T J_n A_tilde, the matrix of the bracket in the metric frame."""
        return self.A_tilde.T @ symplectic_j(self.n) @ self.A_tilde


@dataclass(frozen=True, eq=False)
class CanonicalForm:
    """Reduced metric data: invariants d, the rotation used and A_tilde * R."""

    n: int
    d: tuple[float, ...]
    rho: float
    R_used: np.ndarray
    A_tilde_canonical: np.ndarray
    A_inv: np.ndarray  # inverse of A_tilde_canonical, cached for norm computations

    def __post_init__(self):
        _frozen_array(self, self.R_used, "R_used")
        _frozen_array(self, self.A_tilde_canonical, "A_tilde_canonical")
        _frozen_array(self, self.A_inv, "A_inv")
        object.__setattr__(self, "d", tuple(float(v) for v in self.d))

    @property
    def d_max(self) -> float:
        return self.d[-1]

    def d_array(self) -> np.ndarray:
        return np.asarray(self.d, dtype=float)


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """Point exp(sum x_i X_i + sum y_i X_{n+i} + z Z), coordinates in the fixed basis."""

    x: np.ndarray
    y: np.ndarray
    z: float

    def __post_init__(self):
        x = np.atleast_1d(np.asarray(self.x, dtype=float))
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        if x.shape != y.shape or x.ndim != 1:
            raise DimensionMismatch(f"x and y must be equal-length vectors, got {x.shape}, {y.shape}")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y)) and np.isfinite(self.z)):
            raise DimensionMismatch("GroupPoint coordinates must be finite")
        _frozen_array(self, x, "x")
        _frozen_array(self, y, "y")
        object.__setattr__(self, "z", float(self.z))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    def horizontal(self) -> np.ndarray:
        """The 2n-vector (x, y) in the fixed basis."""
        return np.concatenate([self.x, self.y])

    @staticmethod
    def identity(n: int) -> "GroupPoint":
        return GroupPoint(np.zeros(n), np.zeros(n), 0.0)


@dataclass(frozen=True, eq=False)
class InvariantFingerprint:
    """Orthogonal-action invariants of a metric parameter."""

    d: tuple[float, ...]
    delta: float
    abs_det: float
    rho: float


def group_mul(p: GroupPoint, q: GroupPoint) -> GroupPoint:
    """Product in exponential coordinates of the 2-step group.

    (x,y,z) . (x',y',z') = (x+x', y+y', z+z' + (x.y' - y.x')/2).
    """
    if p.n != q.n:
        raise DimensionMismatch(f"points have n = {p.n} and n = {q.n}")
    z = p.z + q.z + 0.5 * (float(p.x @ q.y) - float(p.y @ q.x))
    return GroupPoint(p.x + q.x, p.y + q.y, z)


def group_inverse(p: GroupPoint) -> GroupPoint:
    """Inverse (-x, -y, -z); exact in exponential coordinates of a 2-step group."""
    return GroupPoint(-p.x, -p.y, -p.z)


def _orient(v: np.ndarray) -> np.ndarray:
    """Flip sign so the first coordinate of significant size is positive."""
    for c in v:
        if abs(c) > 1e-9:
            return v if c > 0 else -v
    return v


def canonicalize(m: MetricParam) -> CanonicalForm:
    """Reduce a metric parameter to canonical form.

    Works on the skew matrix S = A_tilde^T J_n A_tilde: the symmetric matrix
    -S^2 = S^T S has eigenvalues d_i^2, each on a 2-plane invariant under S.
    Picking a unit eigenvector u per plane and its partner v = -S u / d gives
    an orthogonal R = [u_1..u_n, v_1..v_n] with R^T S R in block form.
    Eigenvectors are taken in the order the symmetric eigensolver returns
    them, oriented so their first significant coordinate is positive; this
    fixes a deterministic R even when some d_i coincide.
    """
    n = m.n
    s = m.skew_form()
    w, vecs = np.linalg.eigh(s.T @ s)
    scale = max(float(np.linalg.norm(s)), 1.0)

    u_cols: list[np.ndarray] = []
    v_cols: list[np.ndarray] = []
    d_vals: list[float] = []
    for idx in range(2 * n):
        if len(d_vals) == n:
            break
        e = vecs[:, idx].copy()
        for u, v in zip(u_cols, v_cols):
            e -= (u @ e) * u + (v @ e) * v
        norm = np.linalg.norm(e)
        if norm < 0.5:
            # already covered by a previously chosen pair (degenerate cluster)
            continue
        u = _orient(e / norm)
        su = s @ u
        d = float(np.linalg.norm(su))
        if d <= EPS_DET:
            raise SingularMatrix("skew form has a (numerically) zero eigenvalue")
        v = -su / d
        u_cols.append(u)
        v_cols.append(v)
        d_vals.append(d)
    if len(d_vals) != n:
        raise SingularMatrix("could not extract n invariant 2-planes")

    order = np.argsort(d_vals, kind="stable")
    r_mat = np.column_stack([u_cols[i] for i in order] + [v_cols[i] for i in order])
    d_sorted = tuple(d_vals[i] for i in order)

    block = r_mat.T @ s @ r_mat
    target = np.zeros_like(block)
    target[:n, n:] = np.diag(d_sorted)
    target[n:, :n] = -np.diag(d_sorted)
    if np.max(np.abs(block - target)) > EPS_CANON * scale:
        raise SingularMatrix("canonical block form not reached within tolerance")
    if np.max(np.abs(r_mat.T @ r_mat - np.eye(2 * n))) > EPS_CANON:
        raise SingularMatrix("computed rotation is not orthogonal within tolerance")

    a_canon = m.A_tilde @ r_mat
    return CanonicalForm(
        n=n,
        d=d_sorted,
        rho=m.rho,
        R_used=r_mat,
        A_tilde_canonical=a_canon,
        A_inv=np.linalg.inv(a_canon),
    )


def delta_invariant(m: MetricParam) -> float:
    """Hilbert-Schmidt norm of A_tilde^T J_n A_tilde."""
    return float(np.linalg.norm(m.skew_form()))


def fingerprint(m: MetricParam) -> InvariantFingerprint:
    """Invariants (d, delta, |det A_tilde|, rho) of the orthogonal right action.

    Checks the two internal identities delta = sqrt(2 sum d_i^2) and
    |det A_tilde| = prod d_i before returning.
    """
    cf = canonicalize(m)
    delta = delta_invariant(m)
    abs_det = abs(float(np.linalg.det(m.A_tilde)))
    d = np.asarray(cf.d)
    if abs(delta - np.sqrt(2.0 * np.sum(d**2))) > EPS_ID * delta:
        raise SingularMatrix("HS-norm identity violated beyond tolerance")
    if abs(abs_det - np.prod(d)) > EPS_ID * abs_det:
        raise SingularMatrix("determinant identity violated beyond tolerance")
    return InvariantFingerprint(d=cf.d, delta=delta, abs_det=abs_det, rho=m.rho)


def frame_to_fixed(cf: CanonicalForm, coords: tuple[np.ndarray, np.ndarray, float]) -> GroupPoint:
    """Convert metric-frame coordinates (x, y, z) to a fixed-basis GroupPoint.

    The horizontal part is mapped by A_tilde_canonical; the z coordinate is
    frame-independent because the vertical direction is fixed.
    """
    x, y, z = coords
    hor = cf.A_tilde_canonical @ np.concatenate([np.atleast_1d(x), np.atleast_1d(y)])
    return GroupPoint(hor[: cf.n], hor[cf.n :], float(z))


def fixed_to_frame(cf: CanonicalForm, p: GroupPoint) -> tuple[np.ndarray, np.ndarray, float]:
    """Inverse of :func:`frame_to_fixed`."""
    if p.n != cf.n:
        raise DimensionMismatch(f"point has n = {p.n}, canonical form has n = {cf.n}")
    hor = cf.A_inv @ p.horizontal()
    return hor[: cf.n], hor[cf.n :], p.z
