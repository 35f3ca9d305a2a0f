"""Quadric normal forms of CR singularities.

A quadric lives in C^{m+h+p} with coordinates (z, w, t), w = u + iv, and is

    u_j   = 1/2 z* H_j z                                 (j = 1..h)
    t_i   = z* B_i z + 1/2 z* C_i conj(z) + z* D_i v     (i = 1..p)

so it is parametrized by (x, y, v) in R^{2m+h} with z = x + iy.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .crlinear import CRType, RealSubspace, cr_type_of_subspace
from .errors import InputError, NumericalDegeneracyError
from .numerics import DEFAULT_TOL, Tolerance, as_matrix, null_space, rank_gap, rank_tol
from .pencil import HermitianPencil

SYM_TOL = 1e-10


def _cmat(M, shape, name):
    A = as_matrix(np.asarray(M, dtype=complex).reshape(shape) if np.size(M) == shape[0] * shape[1] else M,
                  dtype=complex)
    if A.shape != shape:
        raise InputError(f"{name} must have shape {shape}, got {A.shape}")
    return A


@dataclass(frozen=True)
class LambdaMap:
    """The R-linear map (z, v) -> B z + C conj(z) + D v."""

    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        B = as_matrix(self.B, dtype=complex)
        m = B.shape[0]
        C = _cmat(self.C, (m, m), "C")
        D = np.asarray(self.D, dtype=complex)
        D = D.reshape(m, -1) if D.size else np.zeros((m, 0), dtype=complex)
        if np.abs(C - C.T).max(initial=0.0) > SYM_TOL * max(1.0, np.abs(C).max(initial=0.0)):
            raise InputError("C must be symmetric")
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "C", 0.5 * (C + C.T))
        object.__setattr__(self, "D", D)

    @property
    def m(self) -> int:
        return self.B.shape[0]

    def __call__(self, z, v=None):
        z = np.asarray(z, dtype=complex)
        out = self.B @ z + self.C @ z.conj()
        if self.D.shape[1]:
            out = out + self.D @ np.asarray(v, dtype=float)
        return out


@dataclass(frozen=True, eq=False)
class Quadric:
    """Normal-form data (H_j, B_i, C_i, D_i) with third-order terms dropped."""

    m: int
    h: int
    p: int
    H: tuple = ()
    B: tuple = ()
    C: tuple = ()
    D: tuple = ()
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m, h, p = self.m, self.h, self.p
        if m < 1 or h < 0 or p < 0:
            raise InputError(f"need m >= 1, h >= 0, p >= 0; got {(m, h, p)}")
        if len(self.H) != h:
            raise InputError(f"expected {h} H matrices, got {len(self.H)}")
        for lst, nm in ((self.B, "B"), (self.C, "C"), (self.D, "D")):
            if len(lst) != p:
                raise InputError(f"expected {p} {nm} matrices, got {len(lst)}")
        Hs = []
        for Hj in self.H:
            A = _cmat(Hj, (m, m), "H_j")
            if np.abs(A - A.conj().T).max(initial=0.0) > SYM_TOL * max(1.0, np.abs(A).max(initial=0.0)):
                raise InputError("H_j must be Hermitian")
            Hs.append(0.5 * (A + A.conj().T))
        lams = [LambdaMap(_cmat(B, (m, m), "B"), C,
                          np.asarray(D, dtype=complex).reshape(m, h) if h else np.zeros((m, 0), complex))
                for B, C, D in zip(self.B, self.C, self.D)]
        object.__setattr__(self, "H", tuple(Hs))
        object.__setattr__(self, "B", tuple(L.B for L in lams))
        object.__setattr__(self, "C", tuple(L.C for L in lams))
        object.__setattr__(self, "D", tuple(L.D for L in lams))

    @property
    def n(self) -> int:
        return self.m + self.h + self.p

    @property
    def codim(self) -> int:
        return self.h + 2 * self.p

    def lambda_map(self, i: int = 0) -> LambdaMap:
        return LambdaMap(self.B[i], self.C[i], self.D[i])

    def point(self, z, v) -> np.ndarray:
        """The point (z, w, t) of the quadric over the parameters (z, v)."""
        z = np.asarray(z, dtype=complex)
        v = np.asarray(v, dtype=float).reshape(self.h)
        zc = z.conj()
        u = np.array([0.5 * (zc @ Hj @ z).real for Hj in self.H])
        w = u + 1j * v
        t = np.array([zc @ B @ z + 0.5 * zc @ C @ zc + zc @ (D @ v)
                      for B, C, D in zip(self.B, self.C, self.D)], dtype=complex)
        return np.concatenate([z, w, t])

    def params_from_real(self, xyv) -> tuple[np.ndarray, np.ndarray]:
        xyv = np.asarray(xyv, dtype=float)
        m = self.m
        return xyv[:m] + 1j * xyv[m:2 * m], xyv[2 * m:]


def lambda_real_matrix(L: LambdaMap) -> np.ndarray:
    """2m x (2m+h) real matrix of (x, y, v) -> (Re, Im) of B z + C conj(z) + D v."""
    F, G = L.B.real, L.B.imag
    P, Q = L.C.real, L.C.imag
    R, S = L.D.real, L.D.imag
    return np.block([[F + P, Q - G, R], [G + Q, F - P, S]])


@dataclass
class TransversalityReport:
    """Per-equation rank of the Lambda matrices and the combined verdict.

    For p = 1 ``transversal`` is the exact rank-2m criterion.  For p > 1 it is
    the conjunction of the per-equation criteria, and ``stacked_rank`` is a
    diagnostic for the vertically stacked matrix; both are an extension beyond
    the single-equation criterion and are flagged by ``extension``.
    """

    m: int
    ranks: list
    per_equation: list
    stacked_rank: int
    transversal: bool
    extension: bool
    rank_gaps: list

    def as_dict(self) -> dict:
        return {
            "m": self.m,
            "ranks": list(self.ranks),
            "per_equation_transversal": list(self.per_equation),
            "stacked_rank": self.stacked_rank,
            "transversal": self.transversal,
            "extension_beyond_single_equation": self.extension,
            "rank_gaps_log10": [None if not np.isfinite(g) else round(float(g), 6) for g in self.rank_gaps],
        }


def is_transversal_origin(q: Quadric, tol: Tolerance = DEFAULT_TOL) -> TransversalityReport:
    """Transversality at 0 of the Gauss map to the stratum of the CR type at 0."""

    if q.p < 1:
        raise InputError("transversality needs at least one t-equation (p >= 1)")
    mats = [lambda_real_matrix(q.lambda_map(i)) for i in range(q.p)]
    ranks = [rank_tol(M, tol) for M in mats]
    per = [r == 2 * q.m for r in ranks]
    return TransversalityReport(
        m=q.m,
        ranks=ranks,
        per_equation=per,
        stacked_rank=rank_tol(np.vstack(mats), tol),
        transversal=all(per),
        extension=q.p > 1,
        rank_gaps=[rank_gap(M, tol) for M in mats],
    )


def kernel_cr_type(B, C, tol: Tolerance = DEFAULT_TOL) -> tuple[int, int]:
    """CR type (r, s) of the real kernel of z -> B z + C conj(z)."""
    B = as_matrix(B, dtype=complex)
    C = as_matrix(C, dtype=complex)
    m = B.shape[0]
    if B.shape != (m, m) or C.shape != (m, m):
        raise InputError("B and C must be square of equal size")
    r = m - rank_tol(np.vstack([B, C.conj()]), tol)
    L = LambdaMap(B, C, np.zeros((m, 0)))
    kdim = 2 * m - rank_tol(lambda_real_matrix(L), tol)
    s = kdim - 2 * r
    if s < 0:
        raise NumericalDegeneracyError(f"kernel dimension {kdim} smaller than 2r = {2 * r}")
    return r, s


def kernel_subspace(B, C, tol: Tolerance = DEFAULT_TOL) -> RealSubspace | None:
    """Real kernel of Lambda_{B,C} as a subspace of C^m, or None if trivial."""

    L = LambdaMap(B, C, np.zeros((np.shape(B)[0], 0)))
    K = null_space(lambda_real_matrix(L), tol)
    if K.shape[1] == 0:
        return None
    return RealSubspace(L.m, K)


def singular_residual(q: Quadric, z, v) -> np.ndarray:
    """Residuals whose common zeros on the quadric are its CR-singular points.

    For each t-equation the residual is

        B z + C conj(z) + D v + (i/2) sum_a (z* D)_a H_a z,

    obtained from the adjoint of the conj(t)-differential reduced modulo the
    w-differentials.  Returns an array of shape (p, m).
    """
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=float).reshape(-1)
    if z.shape != (q.m,) or v.shape != (q.h,):
        raise InputError(f"expected |z| = {q.m} and |v| = {q.h}, got {z.shape}, {v.shape}")
    out = np.empty((q.p, q.m), dtype=complex)
    Hz = [Hj @ z for Hj in q.H]
    for i in range(q.p):
        B, C, D = q.B[i], q.C[i], q.D[i]
        r = B @ z + C @ z.conj() + D @ v
        if q.h:
            zD = z.conj() @ D
            r = r + 0.5j * sum(zD[a] * Hz[a] for a in range(q.h))
        out[i] = r
    return out


def residual_real(q: Quadric, xyv) -> np.ndarray:
    z, v = q.params_from_real(xyv)
    r = singular_residual(q, z, v).ravel()
    return np.concatenate([r.real, r.imag])


def residual_jacobian(q: Quadric, xyv) -> np.ndarray:
    """Real Jacobian of :func:`residual_real` with respect to (x, y, v)."""
    z, v = q.params_from_real(xyv)
    m, h = q.m, q.h
    cols = []
    for direction in range(2 * m + h):
        if direction < 2 * m:
            dz = np.zeros(m, dtype=complex)
            dz[direction % m] = 1.0 if direction < m else 1j
            dv = np.zeros(h)
        else:
            dz = np.zeros(m, dtype=complex)
            dv = np.zeros(h)
            dv[direction - 2 * m] = 1.0
        col = np.empty((q.p, m), dtype=complex)
        for i in range(q.p):
            B, C, D = q.B[i], q.C[i], q.D[i]
            d = B @ dz + C @ dz.conj() + D @ dv
            if h:
                zD = z.conj() @ D
                dzD = dz.conj() @ D
                d = d + 0.5j * sum(dzD[a] * (q.H[a] @ z) + zD[a] * (q.H[a] @ dz) for a in range(h))
            col[i] = d
        col = col.ravel()
        cols.append(np.concatenate([col.real, col.imag]))
    return np.array(cols).T


def newton_zero(q: Quadric, xyv0, tol_abs: float, max_iter: int = 20):
    """Pseudo-inverse Newton iteration towards a zero of the residual."""
    x = np.array(xyv0, dtype=float)
    for _ in range(max_iter):
        r = residual_real(q, x)
        if np.linalg.norm(r) < tol_abs:
            return x, True
        J = residual_jacobian(q, x)
        x = x - np.linalg.pinv(J, rcond=1e-12) @ r
    return x, bool(np.linalg.norm(residual_real(q, x)) < tol_abs)


@dataclass
class SingularScan:
    points: np.ndarray  # (N, 2m+h) real parameters of CR-singular points
    clusters: list  # index arrays into points
    cluster_dims: list
    grid: int
    box: list

    @property
    def dimension(self) -> int | None:
        return max(self.cluster_dims) if self.cluster_dims else None

    def as_dict(self) -> dict:
        return {
            "grid": self.grid,
            "box": [list(map(float, b)) for b in self.box],
            "n_points": int(len(self.points)),
            "n_clusters": len(self.clusters),
            "cluster_dims": list(self.cluster_dims),
            "dimension": self.dimension,
        }


def _single_linkage(points: np.ndarray, radius: float) -> list:
    if len(points) == 0:
        return []
    n = len(points)
    pairs = cKDTree(points).query_pairs(radius, output_type="ndarray")
    A = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(n, n))
    _, labels = connected_components(A, directed=False)
    return [np.flatnonzero(labels == lab) for lab in np.unique(labels)]


def pca_rank(points: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> int:
    if len(points) < 2:
        return 0
    return rank_tol(points - points.mean(axis=0), tol)


def singular_locus_scan(q: Quadric, box=None, grid: int = 20, tol: float = 1e-10,
                        rtol: Tolerance = DEFAULT_TOL, max_iter: int = 20) -> SingularScan:
    """Grid scan of the CR-singular locus in (x, y, v) parameter space.

    Every grid point is refined by pseudo-inverse Newton steps; converged
    points inside the box are kept, deduplicated at 1e-8, grouped
    by single linkage at twice the grid spacing, and each group's dimension is
    the PCA rank of its point cloud.
    """
    if grid < 2:
        raise InputError("grid must have at least 2 points per axis")
    dim = 2 * q.m + q.h
    if box is None:
        box = [(-1.0, 1.0)] * dim
    box = [tuple(map(float, b)) for b in box]
    if len(box) != dim:
        raise InputError(f"box needs {dim} intervals, got {len(box)}")
    axes = [np.linspace(lo, hi, grid) for lo, hi in box]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, dim)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    kept = []
    for x0 in mesh:
        x, ok = newton_zero(q, x0, tol, max_iter)
        if ok and np.all(x >= lo - 1e-12) and np.all(x <= hi + 1e-12):
            kept.append(x)
    pts = np.array(kept).reshape(-1, dim)
    if len(pts):
        _, idx = np.unique(np.round(pts, 8), axis=0, return_index=True)
        pts = pts[np.sort(idx)]
    spacing = float(max((hi - lo).max() / (grid - 1), 1e-12))
    clusters = _single_linkage(pts, 2 * spacing)
    dims = [pca_rank(pts[c], rtol) for c in clusters]
    return SingularScan(points=pts, clusters=clusters, cluster_dims=dims, grid=grid, box=box)


def augmented_pencil(q: Quadric) -> HermitianPencil:
    """H_1..H_h followed by (B+B*)/2 and (i/2)(B*-B) for every t-equation."""
    mats = list(q.H)
    for B in q.B:
        mats.append(0.5 * (B + B.conj().T))
        mats.append(0.5j * (B.conj().T - B))
    if not mats:
        raise InputError("quadric has no H or B matrices")
    return HermitianPencil(tuple(mats))


def defining_hessians(q: Quadric) -> list:
    """Complex Hessians of the real defining functions, entry [a, b] = d^2 f / d conj(zeta_a) d zeta_b.

    The defining functions are, in order, Re w_j - 1/2 z*H_j z, then the real
    and imaginary parts of phi_i = t_i - z*B_i z - 1/2 z*C_i conj(z) - z*D_i v.
    Each Hessian is an n x n Hermitian matrix on (z, w, t); its z-block is
    minus the corresponding augmented-pencil matrix (times 1/2 for the H_j).
    """
    m, h, n = q.m, q.h, q.n
    out = []
    for Hj in q.H:
        M = np.zeros((n, n), dtype=complex)
        M[:m, :m] = -0.5 * Hj
        out.append(M)
    aug = augmented_pencil(q).mats[h:] if q.p else ()
    for i in range(q.p):
        # v = (w - conj w) / 2i couples conj(z) with w through z* D v
        for A, X in ((aug[2 * i], 0.25j * q.D[i]), (aug[2 * i + 1], 0.25 * q.D[i])):
            M = np.zeros((n, n), dtype=complex)
            M[:m, :m] = -A
            M[:m, m:m + h] = X
            M[m:m + h, :m] = X.conj().T
            out.append(M)
    return out


def holomorphic_differentials(q: Quadric, z, v) -> np.ndarray:
    """Rows d(rho)^{1,0} of the defining functions at the point over (z, v)."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=float).reshape(q.h)
    m, h, n = q.m, q.h, q.n
    rows = []
    zc = z.conj()
    for j, Hj in enumerate(q.H):
        r = np.zeros(n, dtype=complex)
        r[m + j] = 0.5
        r[:m] = -0.5 * (zc @ Hj)
        rows.append(r)
    for i in range(q.p):
        B, C, D = q.B[i], q.C[i], q.D[i]
        # phi = t - z*Bz - 1/2 z*C conj(z) - z*D v ; d(phi)^{1,0} and d(conj phi)^{1,0}
        dphi = np.zeros(n, dtype=complex)
        dphi[m + h + i] = 1.0
        dphi[:m] = -(zc @ B)
        dphi[m:m + h] = -(zc @ D) / (2j)
        dphic = np.zeros(n, dtype=complex)
        dphic[:m] = -(B.conj() @ zc + C.conj() @ z + D.conj() @ v)
        dphic[m:m + h] = -(z @ D.conj()) / (2j)
        rows.append(0.5 * (dphi + dphic))
        rows.append((dphi - dphic) / (2j))
    return np.array(rows).reshape(-1, n)


def tangent_levi_pencil(q: Quadric, z, v, tol: Tolerance = DEFAULT_TOL) -> HermitianPencil | None:
    """Levi pencil at the point over (z, v) from the quadric data alone.

    Returns None at CR-singular points, where the holomorphic tangent jumps.
    """

    A = holomorphic_differentials(q, z, v)
    if rank_tol(A, tol) < q.codim:
        return None
    W = null_space(A, tol)
    if W.shape[1] == 0:
        return HermitianPencil(tuple(np.zeros((0, 0)) for _ in range(q.codim)))
    return HermitianPencil(tuple(W.conj().T @ M @ W for M in defining_hessians(q)))


def cr_type_at(q: Quadric, z, v, tol: Tolerance = DEFAULT_TOL) -> CRType:
    """CR type of the tangent plane at the point over (z, v), via the Gauss map."""
    return cr_type_of_subspace(RealSubspace(q.n, tangent_basis(q, z, v)), tol)


def tangent_basis(q: Quadric, z, v) -> np.ndarray:
    """2n x (2m+h) real matrix whose columns span the tangent plane (global ordering)."""
    z = np.asarray(z, dtype=complex)
    v = np.asarray(v, dtype=float)
    m, h = q.m, q.h
    base = np.concatenate([z.real, z.imag, v])
    eps = 1e-6
    cols = []
    for j in range(2 * m + h):
        e = np.zeros(2 * m + h)
        e[j] = eps
        zp, vp = q.params_from_real(base + e)
        zm, vm = q.params_from_real(base - e)
        d = (q.point(zp, vp) - q.point(zm, vm)) / (2 * eps)
        cols.append(np.concatenate([d.real, d.imag]))
    return np.array(cols).T


def garrity_matrix_Mk(n: int, k: float, tol: Tolerance = DEFAULT_TOL) -> tuple[np.ndarray, bool]:
    """Block matrix [[I, ikI], [ikI, -I]] (blocks of size 2n) and its transversality verdict."""
    if n < 1 or not k > 0:
        raise InputError("need n >= 1 and k > 0")
    I = np.eye(2 * n)
    R = np.block([[I, 1j * k * I], [1j * k * I, -I]])
    det = np.linalg.det(R)
    return R, bool(abs(det) > tol.rank_tol)


def _clifford_generators():
    i = 1j
    Q1 = np.array([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]], dtype=complex)
    Q2 = np.array([[0, 0, i, 0], [0, 0, 0, -i], [i, 0, 0, 0], [0, -i, 0, 0]], dtype=complex)
    Q3 = np.array([[0, 0, 0, 1], [0, 0, -1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)
    Q4 = np.array([[0, 0, 0, i], [0, 0, i, 0], [0, i, 0, 0], [i, 0, 0, 0]], dtype=complex)
    return Q1, Q2, Q3, Q4


def _offdiag(X):
    p, q = X.shape
    return np.block([[np.zeros((p, p)), X], [X.conj().T, np.zeros((q, q))]])


def clifford8() -> HermitianPencil:
    """Five anticommuting 8x8 Hermitian matrices squaring to the identity."""
    mats = [_offdiag(Q) for Q in _clifford_generators()]
    mats.append(np.diag([1.0] * 4 + [-1.0] * 4).astype(complex))
    return HermitianPencil(tuple(mats))


def r1r2_7() -> HermitianPencil:
    R1 = np.eye(3, 4)
    R2 = np.eye(3, 4, k=1)
    H3 = np.diag([1.0] * 3 + [-1.0] * 4)
    return HermitianPencil((_offdiag(R1), _offdiag(R2), H3))


def adams_m8() -> Quadric:
    """The m = 8, p = 2 quadric w^i = z*B_i z + 1/2 z*C_i conj(z)."""
    B1 = np.zeros((8, 8))
    B1[:4, 4:] = np.eye(4)
    C1 = np.zeros((8, 8))
    C1[4:, :4] = np.eye(4)
    # z*C conj(z) only sees the symmetric part of C
    C1 = 0.5 * (C1 + C1.T)
    B2 = np.zeros((8, 8))
    B2[1, 7] = B2[2, 6] = B2[3, 5] = 1.0
    return Quadric(8, 0, 2, (), (B1, B2), (C1, np.zeros((8, 8))), (np.zeros((8, 0)),) * 2, name="adams_m8")


def mlambda(lam: complex) -> Quadric:
    """w + conj(w) = 0, t = z conj(z) + conj(z)^2 / 2 + lam w conj(z)."""
    lam = complex(lam)
    return Quadric(1, 1, 1, (np.zeros((1, 1)),), (np.ones((1, 1)),), (np.ones((1, 1)),),
                   (np.array([[1j * lam]]),), name=f"mlambda({lam})")


def mprime() -> Quadric:
    """w + conj(w) = 0, t = w conj(z)."""
    return Quadric(1, 1, 1, (np.zeros((1, 1)),), (np.zeros((1, 1)),), (np.zeros((1, 1)),),
                   (np.array([[1j]]),), name="mprime")


def rigid_split(n: int) -> Quadric:
    """Rigid quadric in C^{2n+2}: u^1 = |z|^2 - |w|^2 and u^2 = 2 Re(w* z), as H-data on (z, w)."""
    if n < 1:
        raise InputError("n must be positive")
    I = np.eye(n)
    Z = np.zeros((n, n))
    H1 = np.block([[I, Z], [Z, -I]])
    H2 = np.block([[Z, I], [I, Z]])
    return Quadric(2 * n, 2, 0, (H1, H2), name=f"rigid_split({n})")


def mk(n: int, k: float) -> Quadric:
    """The slice of rigid_split(n) by k u^1 = i u^2, written in the coordinates (z, w, u^1).

    Its equations are Re u^1 = (|z|^2 - |w|^2)/2 and Im u^1 = Re(w* z)/k.
    """
    if n < 1 or not k > 0:
        raise InputError("need n >= 1 and k > 0")
    I = np.eye(n)
    Z = np.zeros((n, n))
    B = 0.5 * np.block([[I, Z], [Z, -I]]) + (0.5j / k) * np.block([[Z, I], [I, Z]])
    return Quadric(2 * n, 0, 1, (), (B,), (np.zeros((2 * n, 2 * n)),), (np.zeros((2 * n, 0)),),
                   name=f"mk({n},{k})")


CATALOG = {
    "mk": mk,
    "mlambda": mlambda,
    "mprime": mprime,
    "clifford8": clifford8,
    "r1r2_7": r1r2_7,
    "adams_m8": adams_m8,
    "rigid_split": rigid_split,
}


def example_catalog(name: str, *args):
    """Quadric or pencil of a named example; parameters are positional."""
    try:
        factory = CATALOG[name.lower()]
    except KeyError:
        raise InputError(f"unknown example {name!r}; known: {sorted(CATALOG)}") from None
    try:
        return factory(*args)
    except TypeError as exc:
        raise InputError(f"bad parameters for {name}: {exc}") from None


def sample_quadric(q: Quadric, count: int, radius: float = 1.0, seed: int = 0) -> np.ndarray:
    """Exact points of the quadric over random parameters.

    z is drawn with a uniformly random direction and a radius uniform in
    [0, radius] (so small radii are not starved in high dimension); v is
    uniform in [-radius, radius]^h.  Returns a (count, n) complex array.
    """
    if count < 1 or not radius > 0:
        raise InputError("need count >= 1 and radius > 0")
    rng = np.random.default_rng(seed)
    g = rng.normal(size=(count, 2 * q.m))
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    g *= rng.uniform(0.0, radius, size=(count, 1))
    v = rng.uniform(-radius, radius, size=(count, q.h))
    out = np.empty((count, q.n), dtype=complex)
    for i in range(count):
        z, vv = q.params_from_real(np.concatenate([g[i], v[i]]))
        out[i] = q.point(z, vv)
    return out
