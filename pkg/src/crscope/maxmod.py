"""Sampled checks of maximum modulus statements on real submanifolds of C^n.

Everything here is evidence from finite point clouds, not proof.  A report
records sample counts next to the maxima so the strength of the evidence is
visible.

The global exhaustion hypothesis of the underlying principles (a C^2 function
with enough positive Levi eigenvalues) always holds for patches of C^n, with
||z||^2 as the exhaustion, so it is not computed.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InputError
from .manifold import PatchDefinition, classify_point, levi_pencil_at, residuals
from .pencil import SphereOptions, pseudoconvex_witness

log = logging.getLogger(__name__)

ON_MANIFOLD_TOL = 1e-10


class HoloPolynomial:
    """Holomorphic polynomial sum_alpha c_alpha z^alpha on C^n.

    Parameters
    ----------
    n : int
        Number of complex variables.
    terms : mapping
        Multi-index tuple of length ``n`` to complex coefficient.
    name : str, optional
        Human readable description carried into reports.
    """

    __slots__ = ("n", "terms", "name", "_A", "_c")

    def __init__(self, n: int, terms: Mapping, name: str = ""):
        if n < 1:
            raise InputError("a polynomial needs at least one variable")
        acc: dict = {}
        for alpha, c in dict(terms).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != n or min(alpha, default=0) < 0:
                raise InputError(f"bad multi-index {alpha} for n={n}")
            acc[alpha] = acc.get(alpha, 0) + complex(c)
        self.n = n
        self.terms = {a: c for a, c in acc.items() if c != 0}
        self.name = name or f"polynomial with {len(self.terms)} terms"
        keys = sorted(self.terms)
        self._A = np.array(keys, dtype=int).reshape(-1, n)
        self._c = np.array([self.terms[a] for a in keys], dtype=complex)

    @property
    def degree(self) -> int:
        return int(self._A.sum(axis=1).max()) if len(self._A) else 0

    def __call__(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        if Z.shape[-1] != self.n:
            raise InputError(f"points must have {self.n} coordinates")
        if not len(self._c):
            return np.zeros(len(Z), dtype=complex)
        return np.prod(Z[:, None, :] ** self._A[None], axis=-1) @ self._c

    def scale(self, s: complex) -> "HoloPolynomial":
        return HoloPolynomial(self.n, {a: s * c for a, c in self.terms.items()}, f"{s} * ({self.name})")

    @classmethod
    def constant(cls, n: int, c: complex = 1.0) -> "HoloPolynomial":
        return cls(n, {(0,) * n: c}, name=f"constant {c}")

    @classmethod
    def random(cls, n: int, degree: int = 3, seed: int = 0) -> "HoloPolynomial":
        """All monomials up to ``degree`` with complex standard normal coefficients."""
        if degree < 0:
            raise InputError("degree must be nonnegative")
        rng = np.random.default_rng(seed)
        alphas = [a for a in np.ndindex(*(degree + 1,) * n) if sum(a) <= degree]
        coeffs = (rng.normal(size=len(alphas)) + 1j * rng.normal(size=len(alphas))) / math.sqrt(2)
        return cls(n, dict(zip(alphas, coeffs)), name=f"random degree-{degree} polynomial (seed {seed})")

    @classmethod
    def exp_neg_square_taylor(cls, n: int = 1, var: int = 0, degree: int = 12) -> "HoloPolynomial":
        """Taylor polynomial of exp(-z_var^2) through (z_var^2)^degree.

        The degree counts powers of u = z^2, so the z-degree is ``2 * degree``.
        On |z| <= 1 the truncation error is below 1 / (degree + 1)!.
        """
        if not 0 <= var < n:
            raise InputError(f"variable index {var} out of range")
        terms = {}
        for j in range(degree + 1):
            alpha = [0] * n
            alpha[var] = 2 * j
            terms[tuple(alpha)] = (-1) ** j / math.factorial(j)
        return cls(n, terms, name=f"Taylor polynomial of exp(-z{var + 1}^2) to order {degree} in z^2")

    def to_json(self) -> list:
        return [{"alpha": list(a), "coeff": [float(c.real), float(c.imag)]} for a, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, n: int, data, name: str = "") -> "HoloPolynomial":
        try:
            terms = {tuple(t["alpha"]): complex(*t["coeff"]) if isinstance(t["coeff"], (list, tuple))
                     else complex(t["coeff"]) for t in data}
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed holomorphic polynomial: {exc}") from None
        return cls(n, terms, name)


def _eval_abs(f: HoloPolynomial, Z: np.ndarray, threads: int = 1) -> np.ndarray:
    if threads <= 1 or len(Z) < 1024:
        return np.abs(f(Z))
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return np.concatenate(list(ex.map(lambda c: np.abs(f(c)), np.array_split(Z, threads))))


@dataclass
class SampledDomain:
    """Interior and boundary point clouds of a domain on a patch."""

    patch: PatchDefinition
    interior: np.ndarray
    boundary: np.ndarray
    boundary_rule: str = ""

    def __post_init__(self):
        self.interior = np.atleast_2d(np.asarray(self.interior, dtype=complex))
        self.boundary = np.atleast_2d(np.asarray(self.boundary, dtype=complex))
        for name, pts in (("interior", self.interior), ("boundary", self.boundary)):
            if pts.shape[-1] != self.patch.n or len(pts) == 0:
                raise InputError(f"{name} must be a nonempty list of points in C^{self.patch.n}")
            res = np.abs(residuals(self.patch, pts)).max()
            if not res <= ON_MANIFOLD_TOL:
                raise InputError(f"{name} points are off the manifold (residual {res:.2e})")


def partition_domain(patch: PatchDefinition, points, predicate: Callable, band: float,
                     rule: str = "") -> SampledDomain:
    """Split on-manifold points by the sign of a real predicate.

    Points with |predicate| <= band form the boundary, points with
    predicate < -band the interior; the rest are dropped.
    """
    if not band >= 0:
        raise InputError("band must be nonnegative")
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    vals = np.asarray(predicate(pts), dtype=float).reshape(len(pts))
    bnd = np.abs(vals) <= band
    inner = vals < -band
    if not bnd.any():
        raise InputError("no sampled point lies in the boundary band")
    if not inner.any():
        raise InputError("no sampled point lies in the interior")
    return SampledDomain(patch, pts[inner], pts[bnd], rule or f"|predicate| <= {band}")


@dataclass
class VerificationReport:
    function: str
    max_interior: float
    max_boundary: float
    argmax_interior: np.ndarray
    argmax_boundary: np.ndarray
    satisfied: bool
    tol: float
    samples: dict
    warnings: list = field(default_factory=list)

    def as_dict(self) -> dict:
        pt = lambda z: None if z is None else [[float(c.real), float(c.imag)] for c in z]  # noqa: E731
        return {
            "function": self.function,
            "max_interior": float(self.max_interior),
            "max_boundary": float(self.max_boundary),
            "argmax_interior": pt(self.argmax_interior),
            "argmax_boundary": pt(self.argmax_boundary),
            "satisfied": bool(self.satisfied),
            "tol": self.tol,
            "samples": dict(self.samples),
            "warnings": list(self.warnings),
        }


def verify_max_modulus(d: SampledDomain, f: HoloPolynomial, tol: float = 1e-6,
                       threads: int = 1) -> VerificationReport:
    """Compare max |f| over the interior sample with max |f| over the boundary sample."""
    if f.n != d.patch.n:
        raise InputError(f"function has {f.n} variables, patch lives in C^{d.patch.n}")
    ai = _eval_abs(f, d.interior, threads)
    ab = _eval_abs(f, d.boundary, threads)
    i, b = int(np.argmax(ai)), int(np.argmax(ab))
    return VerificationReport(
        function=f.name, max_interior=float(ai[i]), max_boundary=float(ab[b]),
        argmax_interior=d.interior[i], argmax_boundary=d.boundary[b],
        satisfied=bool(ai[i] <= ab[b] * (1 + tol)), tol=tol,
        samples={"interior": len(d.interior), "boundary": len(d.boundary), "rule": d.boundary_rule},
    )


@dataclass
class PsiRegion:
    psi: np.ndarray
    complement: np.ndarray
    unclassified: np.ndarray
    p: int

    def as_dict(self) -> dict:
        return {"p": self.p, "psi": len(self.psi), "complement": len(self.complement),
                "unclassified": len(self.unclassified)}


def psi_region(patch: PatchDefinition, points, p: int = 1, opts: SphereOptions | None = None) -> PsiRegion:
    """Split regular points by whether some Levi form has at least m - p + 1 positive eigenvalues.

    CR-singular points are listed as unclassified.
    """
    if p < 1:
        raise InputError("p must be at least 1")
    opts = opts or SphereOptions()
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    groups: dict = {"psi": [], "complement": [], "unclassified": []}
    for z in pts:
        if not classify_point(patch, z, opts.tol, seed=opts.seed).regular:
            groups["unclassified"].append(z)
            continue
        pencil = levi_pencil_at(patch, z, opts.tol, seed=opts.seed)
        hit = pseudoconvex_witness(pencil, opts, order=p) is not None
        groups["psi" if hit else "complement"].append(z)
    as_arr = lambda L: np.array(L, dtype=complex).reshape(-1, patch.n)  # noqa: E731
    return PsiRegion(as_arr(groups["psi"]), as_arr(groups["complement"]), as_arr(groups["unclassified"]), p)


def verify_psi_bound(patch: PatchDefinition, points, f: HoloPolynomial, p: int = 1, tol: float = 1e-6,
                     opts: SphereOptions | None = None, region: PsiRegion | None = None) -> VerificationReport:
    """Check that max |f| over the sample is attained (up to tol) on the Psi_p estimate."""
    pts = np.atleast_2d(np.asarray(points, dtype=complex))
    region = region or psi_region(patch, pts, p, opts)
    a = np.abs(f(pts))
    i = int(np.argmax(a))
    samples = {"points": len(pts), **{k: v for k, v in region.as_dict().items() if k != "p"}}
    if len(region.psi) == 0:
        msg = "Psi estimate is empty: the sample is too sparse or the patch is not compact"
        log.warning(msg)
        return VerificationReport(f.name, float(a[i]), float("nan"), pts[i], None, False, tol, samples, [msg])
    ap = np.abs(f(region.psi))
    j = int(np.argmax(ap))
    return VerificationReport(f.name, float(a[i]), float(ap[j]), pts[i], region.psi[j],
                              bool(a[i] <= ap[j] * (1 + tol)), tol, samples)
