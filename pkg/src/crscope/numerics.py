"""Tolerance-aware dense linear algebra used throughout crscope.

Coordinates on R^{2n} are ordered (x_1..x_n, y_1..y_n) everywhere, so the
realification of a complex matrix M = X + iY is the block matrix
[[X, -Y], [Y, X]].
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError

HERMITIAN_RTOL = 1e-10


@dataclass(frozen=True)
class Tolerance:
    """Relative cutoffs for rank and eigenvalue-sign decisions.

    Parameters
    ----------
    rank_tol : float
        Singular values at or below ``rank_tol * s_max`` are treated as zero.
    eig_tol : float
        Eigenvalues within ``eig_tol * ||H||`` of zero are treated as zero.
    """

    rank_tol: float = 1e-9
    eig_tol: float = 1e-8

    def __post_init__(self):
        for name in ("rank_tol", "eig_tol"):
            v = getattr(self, name)
            if not (0.0 < v < 1.0):
                raise InputError(f"{name} must lie in (0, 1), got {v!r}")

    def as_dict(self) -> dict:
        return {"rank_tol": self.rank_tol, "eig_tol": self.eig_tol}


DEFAULT_TOL = Tolerance()


def as_matrix(M, dtype=None) -> np.ndarray:
    """Coerce to a finite 2-d array, raising InputError otherwise."""
    A = np.asarray(M, dtype=dtype)
    if A.ndim != 2:
        raise InputError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    return A


def realify(M) -> np.ndarray:
    """Real 2p x 2q matrix of the R-linear map of a complex p x q matrix."""
    A = as_matrix(M, dtype=complex)
    X, Y = A.real, A.imag
    return np.block([[X, -Y], [Y, X]])


def singular_values(M) -> np.ndarray:
    A = as_matrix(M)
    if A.size == 0:
        return np.zeros(0)
    return np.linalg.svd(A, compute_uv=False)


def rank_tol(M, tol: Tolerance = DEFAULT_TOL) -> int:
    """Number of singular values above ``tol.rank_tol`` times the largest one."""
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_tol * s[0]))


def rank_gap(M, tol: Tolerance = DEFAULT_TOL) -> float:
    """Distance of the relative singular spectrum from the cutoff, in log10 units.

    Large values mean the rank decision is insensitive to the tolerance.
    Returns ``inf`` when every singular value is on one side by construction
    (exact zero, or full rank with no small values).
    """
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return float("inf")
    rel = s / s[0]
    with np.errstate(divide="ignore"):
        logs = np.abs(np.log10(rel) - np.log10(tol.rank_tol))
    return float(np.min(logs))


def null_space(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the kernel of M."""
    A = as_matrix(M)
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=A.dtype)
    _, s, vh = np.linalg.svd(A)
    r = 0 if s.size == 0 or s[0] == 0.0 else int(np.count_nonzero(s > tol.rank_tol * s[0]))
    return vh[r:].conj().T


def check_hermitian(H) -> np.ndarray:
    A = as_matrix(H, dtype=complex)
    if A.shape[0] != A.shape[1]:
        raise InputError(f"Hermitian matrix must be square, got {A.shape}")
    scale = max(1.0, float(np.abs(A).max(initial=0.0)))
    if np.abs(A - A.conj().T).max(initial=0.0) > HERMITIAN_RTOL * scale:
        raise InputError("matrix is not Hermitian within tolerance")
    return 0.5 * (A + A.conj().T)


def eigs_hermitian(H) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (symmetrized first)."""
    return np.linalg.eigvalsh(check_hermitian(H))


def signature_from_eigs(eigs: np.ndarray, eig_tol: float) -> tuple[int, int, int]:
    eigs = np.asarray(eigs, dtype=float)
    if eigs.size == 0:
        return (0, 0, 0)
    band = eig_tol * float(np.abs(eigs).max())
    pos = int(np.count_nonzero(eigs > band))
    neg = int(np.count_nonzero(eigs < -band))
    return (pos, eigs.size - pos - neg, neg)


def signature(H, tol: Tolerance = DEFAULT_TOL) -> tuple[int, int, int]:
    """(positive, zero, negative) eigenvalue counts with a relative zero band."""
    return signature_from_eigs(eigs_hermitian(H), tol.eig_tol)


def standard_complex_structure(n_z: int, n_w: int = 0, n_t: int = 0) -> np.ndarray:
    """Complex structure J on R^{2N} in grouped coordinates (x, y, u, v, r, s).

    Each group of complex variables contributes its real parts followed by its
    imaginary parts, giving blockdiag([[0,-I],[I,0]]) per group.  Use
    :func:`grouped_permutation` to move to the global (x_1..x_N, y_1..y_N)
    ordering, where J becomes ``realify(1j * I_N)``.
    """
    counts = (n_z, n_w, n_t)
    if any(c < 0 for c in counts) or sum(counts) == 0:
        raise InputError(f"invalid group sizes {counts}")
    N = sum(counts)
    J = np.zeros((2 * N, 2 * N))
    off = 0
    for c in counts:
        if c == 0:
            continue
        I = np.eye(c)
        J[off:off + c, off + c:off + 2 * c] = -I
        J[off + c:off + 2 * c, off:off + c] = I
        off += 2 * c
    return J


def grouped_permutation(n_z: int, n_w: int = 0, n_t: int = 0) -> np.ndarray:
    """Permutation matrix P with ``P @ v_grouped = v_global``.

    The grouped order lists (Re z, Im z, Re w, Im w, Re t, Im t); the global
    order lists all real parts of (z, w, t) and then all imaginary parts.
    """
    N = n_z + n_w + n_t
    P = np.zeros((2 * N, 2 * N))
    g = 0  # grouped index
    base = 0  # complex index of group start
    for c in (n_z, n_w, n_t):
        for j in range(c):
            P[base + j, g + j] = 1.0
            P[N + base + j, g + c + j] = 1.0
        g += 2 * c
        base += c
    return P
