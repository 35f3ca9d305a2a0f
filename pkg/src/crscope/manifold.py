"""Real submanifolds of C^n cut out by polynomial defining functions.

A patch is {rho_1 = ... = rho_k = 0} inside a coordinate box.  Real coordinates
are ordered (x_1..x_n, y_1..y_n); for a real function f the real gradient is
(2 Re df/dz, -2 Im df/dz).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .crlinear import CRType
from .errors import DegeneratePatchError, InputError
from .numerics import DEFAULT_TOL, Tolerance, null_space, rank_tol
from .pencil import HermitianPencil, SphereOptions, weak_pseudoconcavity_order
from .polynomial import ZPolynomial, complex_hessian, gradients

ON_MANIFOLD_TOL = 1e-8
SAMPLE_TOL = 1e-10
GENERIC_RANK_SAMPLES = 32


@dataclass(frozen=True)
class PatchDefinition:
    """Defining polynomials and a sampling box of 2n real intervals."""

    n: int
    rho: tuple
    box: tuple

    def __post_init__(self):
        if len(self.rho) < 1:
            raise InputError("a patch needs at least one defining function")
        for f in self.rho:
            if not isinstance(f, ZPolynomial) or f.n != self.n:
                raise InputError("defining functions must be ZPolynomials on C^n")
            if not f.is_real():
                raise InputError("defining functions must be real-valued")
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        if len(box) != 2 * self.n or any(not (lo <= hi) for lo, hi in box):
            raise InputError(f"box must list {2 * self.n} intervals (lo <= hi)")
        object.__setattr__(self, "rho", tuple(self.rho))
        object.__setattr__(self, "box", box)

    @property
    def k(self) -> int:
        return len(self.rho)

    @property
    def dim(self) -> int:
        return 2 * self.n - self.k


def cube(n: int, r: float = 1.0) -> tuple:
    return ((-r, r),) * (2 * n)


def residuals(P: PatchDefinition, Z) -> np.ndarray:
    """(N, k) values of the defining functions at the rows of Z."""
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    return np.stack([f.eval_real(Z) for f in P.rho], axis=-1)


def dbar_matrix(P: PatchDefinition, z) -> np.ndarray:
    """k x n complex matrix whose rows are the holomorphic differentials of the rho_j at z."""
    return np.array([gradients(f, z)[0] for f in P.rho])


def _batched_holo_grad(P: PatchDefinition, Z) -> np.ndarray:
    """(N, k, n) holomorphic gradients at many points."""
    return np.stack([np.stack([f.dz(i).evaluate(Z) for i in range(P.n)], axis=-1) for f in P.rho], axis=1)


def _to_complex(X, n):
    return X[..., :n] + 1j * X[..., n:]


def _to_real(Z):
    return np.concatenate([Z.real, Z.imag], axis=-1)


def project(P: PatchDefinition, Z0, max_iter: int = 50, tol: float = SAMPLE_TOL):
    """Pseudo-inverse Newton projection of the rows of Z0 onto the patch.

    Returns the projected points and a boolean mask of converged rows.
    """
    Z = np.atleast_2d(np.asarray(Z0, dtype=complex)).copy()
    done = np.zeros(len(Z), dtype=bool)
    for _ in range(max_iter):
        active = ~done
        if not active.any():
            break
        Za = Z[active]
        with np.errstate(all="ignore"):
            r = residuals(P, Za)
            res = np.abs(r).max(axis=1)
            conv = res < tol
            idx = np.flatnonzero(active)
            done[idx[conv]] = True
            if conv.all():
                break
            g = _batched_holo_grad(P, Za[~conv])
            J = np.concatenate([2 * g.real, -2 * g.imag], axis=-1)  # (N, k, 2n)
            step = np.einsum("nij,nj->ni", np.linalg.pinv(J, rcond=1e-12), r[~conv])
            X = _to_real(Za[~conv]) - step
        Z[idx[~conv]] = _to_complex(X, P.n)
        bad = ~np.all(np.isfinite(Z), axis=1)
        Z[bad] = 0.0
        done[bad] = False
    with np.errstate(all="ignore"):
        ok = np.all(np.isfinite(Z), axis=1)
        ok[ok] = np.abs(residuals(P, Z[ok])).max(axis=1) < tol
    return Z, ok


def sample_points(P: PatchDefinition, count: int, seed: int = 0, batch: int | None = None) -> np.ndarray:
    """``count`` on-manifold points from uniform box samples projected by Newton's method."""
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in P.box])
    hi = np.array([b[1] for b in P.box])
    batch = batch or max(64, count)
    got = []
    attempts = successes = 0
    while successes < count:
        X = rng.uniform(lo, hi, size=(batch, 2 * P.n))
        Z, ok = project(P, _to_complex(X, P.n))
        attempts += batch
        successes += int(ok.sum())
        got.append(Z[ok])
        if successes < 0.1 * attempts:
            raise DegeneratePatchError(
                f"only {successes} of {attempts} projections converged; the real locus looks empty"
            )
    return np.concatenate(got)[:count]


@lru_cache(maxsize=128)
def generic_rank(P: PatchDefinition, seed: int = 0, tol: Tolerance = DEFAULT_TOL) -> int:
    """Maximal rank of the holomorphic differentials over random on-manifold samples."""
    pts = sample_points(P, GENERIC_RANK_SAMPLES, seed)
    return max(rank_tol(dbar_matrix(P, z), tol) for z in pts)


@dataclass
class PointReport:
    point: np.ndarray
    on_manifold: float
    dbar_rank: int
    cr_type: CRType
    regular: bool
    generic_rank: int
    weak_order: int | None = None
    pseudoconvex_witness: np.ndarray | None = None
    notes: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "point": [[float(c.real), float(c.imag)] for c in self.point],
            "on_manifold": float(self.on_manifold),
            "dbar_rank": self.dbar_rank,
            "cr_type": list(self.cr_type.as_tuple()),
            "regular": self.regular,
            "generic_rank": self.generic_rank,
            "weak_order": self.weak_order,
            "pseudoconvex_witness": None if self.pseudoconvex_witness is None
            else [float(x) for x in self.pseudoconvex_witness],
            "notes": list(self.notes),
        }


def classify_point(P: PatchDefinition, z, tol: Tolerance = DEFAULT_TOL,
                   on_tol: float = ON_MANIFOLD_TOL, seed: int = 0) -> PointReport:
    """CR dimension at z and whether it equals the generic value of the patch."""
    z = np.asarray(z, dtype=complex).reshape(P.n)
    res = float(np.abs(residuals(P, z)).max())
    if not res < on_tol:
        raise InputError(f"point is off the manifold (residual {res:.3e})")
    r = rank_tol(dbar_matrix(P, z), tol)
    m = P.n - r
    gr = generic_rank(P, seed, tol)
    report = PointReport(point=z, on_manifold=res, dbar_rank=r,
                         cr_type=CRType(m=m, h=P.dim - 2 * m), regular=(r == gr), generic_rank=gr)
    if not report.regular:
        report.notes.append("CR-singular: CR dimension jumps above its generic value")
    return report


def holomorphic_tangent(P: PatchDefinition, z, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of the common kernel of the holomorphic differentials."""
    return null_space(dbar_matrix(P, z), tol)


def levi_pencil_at(P: PatchDefinition, z, tol: Tolerance = DEFAULT_TOL, seed: int = 0) -> HermitianPencil:
    """Complex Hessians of the rho_j restricted to the holomorphic tangent at z."""
    rep = classify_point(P, z, tol, seed=seed)
    if not rep.regular:
        raise InputError("the Levi pencil is undefined at a CR-singular point")
    W = holomorphic_tangent(P, rep.point, tol)
    if W.shape[1] == 0:
        return HermitianPencil(tuple(np.zeros((0, 0)) for _ in P.rho))
    return HermitianPencil(tuple(W.conj().T @ complex_hessian(f, rep.point) @ W for f in P.rho))


def pseudoconcavity_order_at(P: PatchDefinition, z, opts: SphereOptions | None = None, seed: int = 0) -> int:
    """Largest q for which the patch is weakly q-pseudoconcave at z (sampled)."""
    opts = opts or SphereOptions()
    pencil = levi_pencil_at(P, z, opts.tol, seed=seed)
    if pencil.dim == 0:
        return 0
    q, _ = weak_pseudoconcavity_order(pencil, opts)
    return int(q)


def slice_patch(P: PatchDefinition, M, b=None, box=None) -> PatchDefinition:
    """Pull the patch back along the affine map zeta -> M zeta + b."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != P.n:
        raise InputError(f"linear part must have {P.n} rows")
    if rank_tol(M) != M.shape[1]:
        raise InputError("linear part of the slice map must have full column rank")
    m = M.shape[1]
    if box is None:
        r = max(max(abs(lo), abs(hi)) for lo, hi in P.box)
        box = cube(m, r)
    rho = tuple(f.compose_affine(M, b).real_part() for f in P.rho)
    return PatchDefinition(m, rho, box)


def patch_from_quadric(q, box=None) -> PatchDefinition:
    """Defining polynomials of a quadric on C^{m+h+p}, coordinates (z, w, t).

    Order: Re w_j - 1/2 z*H_j z, then Re and Im of
    t_i - z*B_i z - 1/2 z*C_i conj(z) - z*D_i v.
    """
    n, m, h = q.n, q.m, q.h
    Z = lambda i: ZPolynomial.z(n, i)  # noqa: E731
    Zb = lambda i: ZPolynomial.zbar(n, i)  # noqa: E731

    def herm(M):
        return sum((M[a, b] * Zb(a) * Z(b) for a in range(m) for b in range(m) if M[a, b] != 0), ZPolynomial(n))

    rho = []
    for j, Hj in enumerate(q.H):
        rho.append(((Z(m + j) + Zb(m + j)) * 0.5 - herm(Hj) * 0.5).real_part())
    for i in range(q.p):
        B, C, D = q.B[i], q.C[i], q.D[i]
        phi = Z(m + h + i) - herm(B)
        phi = phi - 0.5 * sum((C[a, b] * Zb(a) * Zb(b) for a in range(m) for b in range(m) if C[a, b] != 0),
                              ZPolynomial(n))
        for a in range(m):
            for al in range(h):
                if D[a, al] != 0:
                    v = (Z(m + al) - Zb(m + al)) * (-0.5j)
                    phi = phi - D[a, al] * Zb(a) * v
        rho.append(phi.real_part())
        rho.append(phi.imag_part())
    return PatchDefinition(n, tuple(rho), box if box is not None else cube(n))


def sphere_patch(n: int, r: float = 1.0) -> PatchDefinition:
    return PatchDefinition(n, (ZPolynomial.abs2(n) - r * r,), cube(n, 1.5 * r))


def ak_patch(k: int) -> PatchDefinition:
    """x_3 = (|z_1|^2 + |z_2|^2)^k, y_3 = 0 in C^3."""
    n = 3
    s = ZPolynomial.abs2(n, [0, 1])
    return PatchDefinition(n, (ZPolynomial.x(n, 2) - s ** k, ZPolynomial.y(n, 2)), cube(n))
