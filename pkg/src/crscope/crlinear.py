"""CR type of real linear subspaces of C^n and Grassmannian stratum dimensions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError, NumericalDegeneracyError
from .numerics import DEFAULT_TOL, Tolerance, as_matrix, rank_tol, realify


@dataclass(frozen=True)
class CRType:
    """CR dimension ``m`` and CR codimension ``h``; real dimension is 2m + h."""

    m: int
    h: int

    @property
    def real_dim(self) -> int:
        return 2 * self.m + self.h

    def as_tuple(self) -> tuple[int, int]:
        return (self.m, self.h)


@dataclass(frozen=True, eq=False)
class RealSubspace:
    """A real d-plane of C^n given by a 2n x d spanning matrix.

    Rows of ``basis`` follow the global (x_1..x_n, y_1..y_n) ordering.
    """

    ambient_n: int
    basis: np.ndarray

    def __post_init__(self):
        T = as_matrix(self.basis, dtype=float)
        if T.shape[0] != 2 * self.ambient_n:
            raise InputError(f"basis must have {2 * self.ambient_n} rows, got {T.shape[0]}")
        d = T.shape[1]
        if not 0 < d <= 2 * self.ambient_n:
            raise InputError(f"subspace dimension {d} out of range")
        if rank_tol(T) != d:
            raise InputError("basis columns are not linearly independent")
        object.__setattr__(self, "basis", T)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def from_complex_vectors(cls, vectors, real_span=True) -> "RealSubspace":
        """Real span of complex column vectors; with ``real_span=False`` the complex span."""
        V = np.atleast_2d(np.asarray(vectors, dtype=complex))
        n = V.shape[0]
        cols = [np.concatenate([V.real, V.imag])]
        if not real_span:
            iV = 1j * V
            cols.append(np.concatenate([iV.real, iV.imag]))
        return cls(n, np.hstack(cols))


def complex_structure(n: int) -> np.ndarray:
    """J on R^{2n} in the global ordering."""
    return realify(1j * np.eye(n))


def cr_type_of_subspace(S: RealSubspace, tol: Tolerance = DEFAULT_TOL) -> CRType:
    """CR type (m, h) from the rank of [T | JT]."""
    T = S.basis
    r = rank_tol(np.hstack([T, complex_structure(S.ambient_n) @ T]), tol)
    if r % 2:
        raise NumericalDegeneracyError(f"rank of [T | JT] is odd ({r}); tolerance too tight or loose")
    d = S.dim
    return CRType(m=d - r // 2, h=r - d)


def stratum_dim(n: int, m: int, h: int) -> int:
    """Real dimension of Gr_(m,h)(C^n)."""
    if min(n, m, h) < 0 or m + h > n:
        raise InputError(f"stratum (m={m}, h={h}) is empty in C^{n}")
    return 2 * m * (n - m) + h * (2 * n - 2 * m - h)


def stratum_codim(n: int, k: int, h: int) -> int:
    """Codimension of Gr_(n-h, 2h-k) inside Gr^R_{2n-k}(C^n)."""
    if not (0 <= k <= n and (k + 1) // 2 <= h <= k):
        raise InputError(f"need ceil(k/2) <= h <= k <= n, got n={n}, k={k}, h={h}")
    return 2 * (n - h) * (k - h)


def grassmannian_dim(n: int, d: int) -> int:
    """Real dimension of the Grassmannian of real d-planes in C^n = R^{2n}."""
    if not 0 <= d <= 2 * n:
        raise InputError(f"d={d} out of range for n={n}")
    return d * (2 * n - d)


def type_at_transversal_stratum(n: int, k: int) -> int:
    """Dimension k - 2 of the stratum of type (n-k+1, k-2) under transversality."""
    if not 2 <= k <= n:
        raise InputError(f"need 2 <= k <= n, got k={k}, n={n}")
    return (2 * n - k) - 2 * (n - k + 1)


def transversal_complex_dim_cr(m: int, k: int) -> int:
    """Transversal complex dimension of a CR submanifold of type (m, k)."""
    if m < 0 or k < 0:
        raise InputError("m and k must be nonnegative")
    return m + (k + 1) // 2
