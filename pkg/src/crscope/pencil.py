"""Signature analysis of real-linear pencils of Hermitian matrices.

Every "for all c" statement is checked by low-discrepancy sampling of the unit
sphere followed by Nelder-Mead refinement.  Sampling can only overestimate the
minimum of an integer count over the sphere, so a reported ``q_min`` is an upper
bound for the true minimum; it is never a proof.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm, qmc

from .errors import InputError
from .numerics import DEFAULT_TOL, Tolerance, check_hermitian, rank_tol

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HermitianPencil:
    """The family H_c = sum_j c_j H_j, c real."""

    mats: tuple

    def __post_init__(self):
        if len(self.mats) < 1:
            raise InputError("a pencil needs at least one matrix")
        mats = tuple(check_hermitian(np.asarray(M, dtype=complex)) for M in self.mats)
        shapes = {M.shape for M in mats}
        if len(shapes) != 1:
            raise InputError(f"pencil matrices have different shapes {sorted(shapes)}")
        object.__setattr__(self, "mats", mats)

    @property
    def dim(self) -> int:
        return self.mats[0].shape[0]

    @property
    def k(self) -> int:
        return len(self.mats)

    @property
    def stack(self) -> np.ndarray:
        return np.stack(self.mats)

    def append(self, M) -> "HermitianPencil":
        return HermitianPencil(self.mats + (M,))


@dataclass
class SphereOptions:
    """Sampling and refinement settings for sphere searches."""

    samples: int = 4096
    restarts: int = 8
    iterations: int = 50
    seed: int = 0
    threads: int = 1
    tol: Tolerance = field(default_factory=lambda: DEFAULT_TOL)

    def __post_init__(self):
        if self.samples < 100:
            raise InputError("at least 100 sphere samples are required")
        if self.restarts < 1:
            raise InputError("at least one refinement restart is required")

    def as_dict(self) -> dict:
        # threads change speed only, so they stay out of reports
        return {
            "samples": self.samples,
            "restarts": self.restarts,
            "iterations": self.iterations,
            "seed": self.seed,
            **self.tol.as_dict(),
        }


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get("CR_SCOPE_THREADS", "1")))
    except ValueError:
        return 1


@dataclass
class SignatureCertificate:
    """Worst coefficient vector found, with the counts it achieves."""

    c: np.ndarray
    pos: int
    zero: int
    neg: int
    objective: int
    samples_used: int
    near_band: bool = False
    options: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "c": [float(x) for x in self.c],
            "pos": self.pos,
            "zero": self.zero,
            "neg": self.neg,
            "objective": self.objective,
            "samples_used": self.samples_used,
            "near_band": self.near_band,
            "options": dict(self.options),
        }


def combine(P: HermitianPencil, c) -> np.ndarray:
    """H_c = sum_j c_j H_j."""
    c = np.asarray(c, dtype=float)
    if c.shape != (P.k,):
        raise InputError(f"coefficient vector must have length {P.k}, got shape {c.shape}")
    H = np.tensordot(c, P.stack, axes=1)
    return 0.5 * (H + H.conj().T)


def sphere_samples(k: int, n: int, seed: int) -> np.ndarray:
    """n unit vectors in R^k from a scrambled Sobol sequence pushed through the normal CDF."""
    if k == 1:
        return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)[:, None]
    sob = qmc.Sobol(d=k, scramble=True, seed=seed)
    m = int(np.ceil(np.log2(n)))
    u = sob.random_base2(m)[:n]
    u = np.clip(u, 1e-12, 1 - 1e-12)
    g = norm.ppf(u)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def _batch_eigs(P: HermitianPencil, C: np.ndarray, threads: int) -> np.ndarray:
    stack = P.stack

    def work(chunk):
        Hs = np.tensordot(chunk, stack, axes=1)
        Hs = 0.5 * (Hs + np.conj(np.swapaxes(Hs, -1, -2)))
        return np.linalg.eigvalsh(Hs)

    if threads <= 1 or len(C) < 256:
        return work(C)
    chunks = np.array_split(C, threads)
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return np.concatenate(list(ex.map(work, chunks)))


def _counts(eigs: np.ndarray, eig_tol: float):
    """Vectorized (pos, zero, neg) for rows of ascending eigenvalues."""
    if eigs.shape[-1] == 0:
        z = np.zeros(eigs.shape[:-1], dtype=int)
        return z, z, z
    band = eig_tol * np.abs(eigs).max(axis=-1, keepdims=True)
    pos = np.count_nonzero(eigs > band, axis=-1)
    neg = np.count_nonzero(eigs < -band, axis=-1)
    return pos, eigs.shape[-1] - pos - neg, neg


def signatures_at(P: HermitianPencil, C, tol: Tolerance = DEFAULT_TOL, threads: int = 1):
    """(pos, zero, neg) count arrays of H_c for every row c of C."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    if C.shape[1] != P.k:
        raise InputError(f"coefficient rows must have length {P.k}")
    return _counts(_batch_eigs(P, C, threads), tol.eig_tol)


def _near_band(eigs: np.ndarray, eig_tol: float) -> bool:
    if eigs.size == 0:
        return False
    scale = float(np.abs(eigs).max())
    a = np.abs(eigs)
    return bool(np.any((a > eig_tol * scale) & (a < 100 * eig_tol * scale)))


def _unit(x):
    nrm = np.linalg.norm(x)
    return x / nrm if nrm > 0 else x


def _eig_at(P, c):
    c = _unit(np.asarray(c, dtype=float))
    return np.linalg.eigvalsh(combine(P, c)), c


def _refine(P, starts, surrogate, opts: SphereOptions):
    """Nelder-Mead on a continuous surrogate, evaluated on normalized c."""
    found = []
    for c0 in starts:
        res = minimize(
            lambda x: surrogate(_eig_at(P, x)[0]),
            c0,
            method="Nelder-Mead",
            options={"maxiter": opts.iterations, "xatol": 1e-10, "fatol": 1e-14},
        )
        found.append(_unit(res.x))
    return found


def _sphere_minimize(P: HermitianPencil, count_fn, surrogate_fn, opts: SphereOptions):
    """Minimize an integer count over the unit sphere.

    ``count_fn(pos, zero, neg)`` gives the integer objective (vectorized);
    ``surrogate_fn(q)`` returns a continuous function of the ascending
    eigenvalues whose decrease past zero lowers the count below ``q``.
    """
    C = sphere_samples(P.k, opts.samples, opts.seed)
    eigs = _batch_eigs(P, C, opts.threads)
    pos, zero, neg = _counts(eigs, opts.tol.eig_tol)
    obj = count_fn(pos, zero, neg)
    best_i = int(np.argmin(obj))
    best_c, best = C[best_i], int(obj[best_i])
    used = len(C)
    if P.dim > 0 and P.k > 1:
        sur = surrogate_fn(best)
        scores = np.array([sur(e) for e in eigs])
        order = np.lexsort((scores, obj))[: opts.restarts]
        for c in _refine(P, C[order], sur, opts):
            e, c = _eig_at(P, c)
            p_, z_, n_ = _counts(e[None, :], opts.tol.eig_tol)
            o = int(count_fn(p_, z_, n_)[0])
            used += 1
            if o < best:
                best, best_c = o, c
    e, best_c = _eig_at(P, best_c)
    p_, z_, n_ = _counts(e[None, :], opts.tol.eig_tol)
    cert = SignatureCertificate(
        c=best_c, pos=int(p_[0]), zero=int(z_[0]), neg=int(n_[0]), objective=best,
        samples_used=used, near_band=_near_band(e, opts.tol.eig_tol), options=opts.as_dict(),
    )
    if cert.near_band:
        log.warning("certificate eigenvalues lie close to the zero band; counts may be fragile")
    return best, cert


def _kth_desc(e, q):
    # q-th largest eigenvalue, normalized by the spectral radius
    s = max(float(np.abs(e).max()), 1e-300)
    return e[len(e) - q] / s if 1 <= q <= len(e) else 0.0


def _kth_asc(e, q):
    s = max(float(np.abs(e).max()), 1e-300)
    return e[q - 1] / s if 1 <= q <= len(e) else 0.0


def min_two_sided_signature(P: HermitianPencil, opts: SphereOptions | None = None):
    """Smallest min(pos, neg) of H_c over sampled and refined unit c."""
    opts = opts or SphereOptions()

    def surrogate(q):
        # pushing either the q-th largest below zero or the q-th smallest above zero lowers the count
        return lambda e: min(_kth_desc(e, q), -_kth_asc(e, q))

    return _sphere_minimize(P, lambda p, z, n: np.minimum(p, n), surrogate, opts)


def weak_pseudoconcavity_order(P: HermitianPencil, opts: SphereOptions | None = None):
    """Smallest number of nonpositive eigenvalues of H_c over the sphere."""
    opts = opts or SphereOptions()

    def surrogate(q):
        return lambda e: -_kth_asc(e, q)

    return _sphere_minimize(P, lambda p, z, n: z + n, surrogate, opts)


def pseudoconvex_witness(P: HermitianPencil, opts: SphereOptions | None = None, order: int = 1):
    """Search for c making H_c have at least dim - order + 1 positive eigenvalues.

    With ``order=1`` this asks for a positive definite H_c.  Returns
    ``(c, eigenvalue)`` where the eigenvalue is the ``order``-th smallest of
    H_c, or ``None`` when the search fails; failure is not a proof that no
    witness exists.
    """
    opts = opts or SphereOptions()
    if order < 1:
        raise InputError("order must be at least 1")
    if P.dim - order + 1 <= 0:
        c = np.zeros(P.k)
        c[0] = 1.0
        return c, float("inf")
    C = sphere_samples(P.k, opts.samples, opts.seed)
    eigs = _batch_eigs(P, C, opts.threads)
    scale = np.maximum(np.abs(eigs).max(axis=1), 1e-300)
    score = eigs[:, order - 1] / scale
    starts = C[np.argsort(-score)[: opts.restarts]]
    cands = list(starts)
    if P.k > 1:
        cands += _refine(P, starts, lambda e: -_kth_asc(e, order), opts)
    best = None
    for c in cands:
        e, c = _eig_at(P, c)
        s = float(np.abs(e).max())
        val = e[order - 1]
        if s > 0 and val > opts.tol.eig_tol * s and (best is None or val / s > best[1] / best[2]):
            best = (c, float(val), s)
    if best is None:
        return None
    return best[0], best[1]


def rho_complex(n: int) -> int:
    """2 * v_2(n) + 2, the bound on the dimension of split-signature spans."""
    if n < 1:
        raise InputError("n must be positive")
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return 2 * e + 2


def span_dim(P: HermitianPencil, tol: Tolerance = DEFAULT_TOL) -> int:
    """Real dimension of the linear span of the pencil matrices."""
    V = np.array([np.concatenate([M.real.ravel(), M.imag.ravel()]) for M in P.mats])
    return rank_tol(V, tol)


def span_dim_bound_check(P: HermitianPencil, q_min: int | None = None,
                         opts: SphereOptions | None = None) -> dict:
    """Compare the span dimension with rho_C(q) + 1 for a split-signature pencil.

    ``q_min`` is the certified two-sided signature; when omitted it is
    computed.  The bound applies only when ``q_min >= dim / 2``; a span larger
    than the bound then means the certificate is wrong.
    """
    if P.dim % 2:
        raise InputError(f"pencil dimension must be even, got {P.dim}")
    q = P.dim // 2
    if q_min is None:
        q_min, _ = min_two_sided_signature(P, opts)
    sd = span_dim(P, (opts or SphereOptions()).tol)
    bound = rho_complex(q) + 1 if q >= 1 else 1
    applicable = q_min >= q and q >= 1
    consistent = (sd <= bound) if applicable else True
    return {
        "dim": P.dim,
        "q": q,
        "q_min": int(q_min),
        "span_dim": sd,
        "bound": bound,
        "applicable": applicable,
        "consistent": consistent,
    }
