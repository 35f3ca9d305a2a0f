"""JSON encoding of problem payloads.

Complex scalars are ``[re, im]`` pairs; plain numbers are accepted for real
values.  Matrices are row-major nested lists.
"""
from __future__ import annotations

import numpy as np

from .crlinear import RealSubspace
from .errors import InputError
from .manifold import PatchDefinition, ak_patch, cube, patch_from_quadric, sphere_patch
from .maxmod import HoloPolynomial
from .pencil import HermitianPencil
from .polynomial import ZPolynomial
from .quadric import CATALOG, Quadric, example_catalog


def enc_complex(c) -> list:
    c = complex(c)
    return [float(c.real), float(c.imag)]


def enc_cmatrix(M) -> list:
    M = np.asarray(M, dtype=complex)
    if M.ndim == 1:
        return [enc_complex(c) for c in M]
    return [enc_cmatrix(row) for row in M]


def enc_rmatrix(M) -> list:
    return np.asarray(M, dtype=float).tolist()


def dec_complex(x) -> complex:
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError(f"complex scalar must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"expected a number, got {x!r}")
    return complex(x)


def dec_array(obj, ndim: int, name: str = "matrix") -> np.ndarray:
    """Nested list with ``ndim`` axes of scalars, each real or ``[re, im]``."""
    try:
        A = np.asarray(obj, dtype=float)
    except (TypeError, ValueError):
        raise InputError(f"{name} is not a rectangular numeric array") from None
    if A.ndim == ndim:
        out = A.astype(complex)
    elif A.ndim == ndim + 1 and A.shape[-1] == 2:
        out = A[..., 0] + 1j * A[..., 1]
    else:
        raise InputError(f"{name} must have {ndim} axes (entries real or [re, im]), got shape {A.shape}")
    if not np.all(np.isfinite(out)):
        raise InputError(f"{name} has non-finite entries")
    return out


def dec_param(x):
    """Example parameters keep int and float types; pairs become complex."""
    if isinstance(x, (list, tuple)):
        return dec_complex(x)
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise InputError(f"bad example parameter {x!r}")
    return x


def _require(payload: dict, key: str, kind: str):
    if not isinstance(payload, dict) or key not in payload:
        raise InputError(f"{kind} payload is missing {key!r}")
    return payload[key]


# subspaces

def decode_subspace(payload: dict) -> RealSubspace:
    if "vectors" in payload:
        V = dec_array(payload["vectors"], 2, "vectors")
        return RealSubspace.from_complex_vectors(V, real_span=bool(payload.get("real_span", True)))
    n = int(_require(payload, "n", "subspace"))
    T = dec_array(_require(payload, "basis", "subspace"), 2, "basis")
    if np.abs(T.imag).max(initial=0) > 0:
        raise InputError("a real basis must have real entries")
    return RealSubspace(n, T.real)


# quadrics and pencils

def encode_quadric(q: Quadric) -> dict:
    return {
        "m": q.m, "h": q.h, "p": q.p, "name": q.name,
        "H": [enc_cmatrix(M) for M in q.H],
        "B": [enc_cmatrix(M) for M in q.B],
        "C": [enc_cmatrix(M) for M in q.C],
        "D": [enc_cmatrix(M) for M in q.D],
    }


def _example(payload: dict):
    params = [dec_param(x) for x in payload.get("params", [])]
    return example_catalog(str(payload["example"]), *params)


def decode_quadric(payload: dict) -> Quadric:
    if isinstance(payload, dict) and "example" in payload:
        q = _example(payload)
        if not isinstance(q, Quadric):
            raise InputError(f"example {payload['example']!r} is not a quadric")
        return q
    m, h, p = (int(_require(payload, k, "quadric")) for k in ("m", "h", "p"))

    def mats(key, count, cols):
        # C and D may be omitted; they then default to zero
        if key not in payload and key in ("C", "D"):
            return (np.zeros((m, cols)),) * count
        raw = _require(payload, key, "quadric") if count else payload.get(key, [])
        return tuple(np.zeros((m, 0)) if cols == 0 else dec_array(M, 2, f"{key} matrix") for M in raw)

    return Quadric(m, h, p, mats("H", h, m), mats("B", p, m), mats("C", p, m), mats("D", p, h),
                   name=str(payload.get("name", "")))


def encode_pencil(P: HermitianPencil) -> dict:
    return {"matrices": [enc_cmatrix(M) for M in P.mats]}


def decode_pencil(payload: dict) -> HermitianPencil:
    if isinstance(payload, dict) and "example" in payload:
        P = _example(payload)
        if not isinstance(P, HermitianPencil):
            raise InputError(f"example {payload['example']!r} is not a pencil")
        return P
    raw = _require(payload, "matrices", "pencil")
    return HermitianPencil(tuple(dec_array(M, 2, "pencil matrix") for M in raw))


# patches

PATCH_EXAMPLES = {"sphere": sphere_patch, "ak": ak_patch}


def decode_box(raw, n: int):
    if raw is None:
        return cube(n)
    try:
        return tuple((float(lo), float(hi)) for lo, hi in raw)
    except (TypeError, ValueError):
        raise InputError("box must be a list of [lo, hi] pairs") from None


def encode_patch(P: PatchDefinition) -> dict:
    return {"n": P.n, "rho": [f.to_json() for f in P.rho], "box": [list(b) for b in P.box]}


def decode_patch(payload: dict) -> PatchDefinition:
    if not isinstance(payload, dict):
        raise InputError("patch payload must be an object")
    if "quadric" in payload:
        q = decode_quadric(payload["quadric"])
        return patch_from_quadric(q, decode_box(payload.get("box"), q.n))
    if "example" in payload:
        name = str(payload["example"])
        if name not in PATCH_EXAMPLES:
            raise InputError(f"unknown patch example {name!r}; known: {sorted(PATCH_EXAMPLES)}")
        params = [dec_param(x) for x in payload.get("params", [])]
        try:
            P = PATCH_EXAMPLES[name](*params)
        except TypeError as exc:
            raise InputError(f"bad parameters for {name}: {exc}") from None
        if "box" in payload:
            P = PatchDefinition(P.n, P.rho, decode_box(payload["box"], P.n))
        return P
    n = int(_require(payload, "n", "patch"))
    rho = tuple(ZPolynomial.from_json(n, f) for f in _require(payload, "rho", "patch"))
    return PatchDefinition(n, rho, decode_box(payload.get("box"), n))


def decode_quadric_of_patch(payload: dict) -> Quadric | None:
    return decode_quadric(payload["quadric"]) if isinstance(payload, dict) and "quadric" in payload else None


# holomorphic functions

def decode_function(payload: dict, n: int) -> HoloPolynomial:
    kind = payload.get("kind", "polynomial") if isinstance(payload, dict) else None
    if kind == "constant":
        return HoloPolynomial.constant(n, dec_complex(payload.get("value", 1.0)))
    if kind == "exp_neg_square_taylor":
        return HoloPolynomial.exp_neg_square_taylor(n, int(payload.get("var", 0)), int(payload.get("degree", 12)))
    if kind == "random":
        return HoloPolynomial.random(n, int(payload.get("degree", 3)), int(payload.get("seed", 0)))
    if kind == "polynomial":
        return HoloPolynomial.from_json(n, _require(payload, "terms", "function"), str(payload.get("name", "")))
    raise InputError(f"unknown function kind {kind!r}")


KNOWN_EXAMPLES = sorted(set(CATALOG) | set(PATCH_EXAMPLES))
