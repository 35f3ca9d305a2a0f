"""Polynomials in z and conj(z) with exact Wirtinger differentiation."""
from __future__ import annotations

from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError, InternalConsistencyError

MAX_DEGREE = 8
REALITY_RTOL = 1e-10

Key = tuple  # (alpha, beta), each a tuple of n ints


def _clean(terms: Mapping, drop=0.0) -> dict:
    return {k: complex(c) for k, c in terms.items() if abs(c) > drop}


class ZPolynomial:
    """Finite sum of c * z^alpha * conj(z)^beta on C^n.

    Instances are immutable and hashable.  Arithmetic does not enforce
    reality; use :meth:`real_part` or :meth:`is_real` where a real-valued
    defining function is required.
    """

    __slots__ = ("n", "_terms", "_hash", "_arrays", "_dcache")

    def __init__(self, n: int, terms: Mapping[Key, complex] | Iterable = ()):
        if n < 1:
            raise InputError("a polynomial needs at least one variable")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for (alpha, beta), c in items:
            alpha, beta = tuple(int(a) for a in alpha), tuple(int(b) for b in beta)
            if len(alpha) != n or len(beta) != n:
                raise InputError(f"multi-index length must be {n}")
            if min(alpha + beta, default=0) < 0:
                raise InputError("negative exponent")
            acc[(alpha, beta)] = acc.get((alpha, beta), 0) + complex(c)
        self.n = n
        self._terms = _clean(acc)
        self._hash = None
        self._arrays = None
        self._dcache = {}

    # construction helpers
    @classmethod
    def const(cls, n, c=1.0):
        z = (0,) * n
        return cls(n, {(z, z): c})

    @classmethod
    def z(cls, n, i):
        e = tuple(int(j == i) for j in range(n))
        return cls(n, {(e, (0,) * n): 1.0})

    @classmethod
    def zbar(cls, n, i):
        e = tuple(int(j == i) for j in range(n))
        return cls(n, {((0,) * n, e): 1.0})

    @classmethod
    def x(cls, n, i):
        return 0.5 * (cls.z(n, i) + cls.zbar(n, i))

    @classmethod
    def y(cls, n, i):
        return (cls.z(n, i) - cls.zbar(n, i)) * (-0.5j)

    @classmethod
    def abs2(cls, n, idx=None):
        idx = range(n) if idx is None else idx
        return reduce(lambda a, b: a + b, (cls.z(n, i) * cls.zbar(n, i) for i in idx), cls(n))

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return max((sum(a) + sum(b) for a, b in self._terms), default=0)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, tuple(sorted(self._terms.items(), key=lambda kv: kv[0]))))
        return self._hash

    def __eq__(self, other):
        return isinstance(other, ZPolynomial) and self.n == other.n and self._terms == other._terms

    def __repr__(self):
        return f"ZPolynomial(n={self.n}, terms={len(self._terms)})"

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, ZPolynomial):
            if other.n != self.n:
                raise InputError("variable count mismatch")
            return other
        return ZPolynomial.const(self.n, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self._terms)
        for k, c in other._terms.items():
            t[k] = t.get(k, 0) + c
        return ZPolynomial(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return ZPolynomial(self.n, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ZPolynomial):
            c0 = complex(other)
            return ZPolynomial(self.n, {k: c * c0 for k, c in self._terms.items()})
        other = self._coerce(other)
        t: dict = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                k = (tuple(x + y for x, y in zip(a1, a2)), tuple(x + y for x, y in zip(b1, b2)))
                t[k] = t.get(k, 0) + c1 * c2
        return ZPolynomial(self.n, t)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise InputError("negative power")
        out = ZPolynomial.const(self.n, 1.0)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def conj(self):
        return ZPolynomial(self.n, {(b, a): np.conj(c) for (a, b), c in self._terms.items()})

    def real_part(self):
        return (self + self.conj()) * 0.5

    def imag_part(self):
        return (self - self.conj()) * (-0.5j)

    def is_real(self, rtol=REALITY_RTOL) -> bool:
        scale = max((abs(c) for c in self._terms.values()), default=0.0)
        for (a, b), c in self._terms.items():
            if abs(self._terms.get((b, a), 0) - np.conj(c)) > rtol * max(scale, 1.0):
                return False
        return True

    def closure(self):
        """Add the conjugate partner of every term that lacks one; verify the rest."""
        t = dict(self._terms)
        scale = max((abs(c) for c in t.values()), default=1.0)
        for (a, b), c in self._terms.items():
            partner = (b, a)
            if partner not in self._terms:
                t[partner] = np.conj(c)
            elif abs(self._terms[partner] - np.conj(c)) > REALITY_RTOL * max(scale, 1.0):
                raise InputError(f"term {(a, b)} and its conjugate partner disagree")
        return ZPolynomial(self.n, t)

    # evaluation and calculus
    def _compiled(self):
        if self._arrays is None:
            keys = list(self._terms)
            A = np.array([k[0] for k in keys], dtype=int).reshape(-1, self.n)
            B = np.array([k[1] for k in keys], dtype=int).reshape(-1, self.n)
            c = np.array([self._terms[k] for k in keys], dtype=complex)
            self._arrays = (A, B, c)
        return self._arrays

    def monomials(self, Z) -> np.ndarray:
        """(N, T) array of z^alpha conj(z)^beta for the rows of Z."""
        A, B, _ = self._compiled()
        Z = np.atleast_2d(np.asarray(Z, dtype=complex))
        if Z.shape[-1] != self.n:
            raise InputError(f"points must have {self.n} coordinates")
        if len(A) == 0:
            return np.zeros((len(Z), 0), dtype=complex)
        zp = Z[:, None, :] ** A[None]
        zb = np.conj(Z)[:, None, :] ** B[None]
        return np.prod(zp * zb, axis=-1)

    def evaluate(self, Z) -> np.ndarray:
        """Complex values at the rows of Z (no reality check)."""
        _, _, c = self._compiled()
        return self.monomials(Z) @ c if len(c) else np.zeros(len(np.atleast_2d(Z)), dtype=complex)

    def eval_real(self, Z) -> np.ndarray:
        """Real values at the rows of Z; raises if the imaginary part is not round-off."""
        _, _, c = self._compiled()
        mon = self.monomials(Z)
        vals = mon @ c if len(c) else np.zeros(len(mon), dtype=complex)
        mag = np.abs(mon) @ np.abs(c) if len(c) else np.zeros(len(mon))
        if np.any(np.abs(vals.imag) > REALITY_RTOL * mag):
            raise InternalConsistencyError("polynomial is not real-valued at the given point")
        return vals.real

    def dz(self, i: int):
        """Wirtinger derivative d/dz_i."""
        if ("z", i) in self._dcache:
            return self._dcache[("z", i)]
        t = {}
        for (a, b), c in self._terms.items():
            if a[i]:
                a2 = a[:i] + (a[i] - 1,) + a[i + 1:]
                t[(a2, b)] = t.get((a2, b), 0) + a[i] * c
        self._dcache[("z", i)] = ZPolynomial(self.n, t)
        return self._dcache[("z", i)]

    def dzbar(self, i: int):
        """Wirtinger derivative d/dconj(z_i)."""
        if ("zb", i) in self._dcache:
            return self._dcache[("zb", i)]
        t = {}
        for (a, b), c in self._terms.items():
            if b[i]:
                b2 = b[:i] + (b[i] - 1,) + b[i + 1:]
                t[(a, b2)] = t.get((a, b2), 0) + b[i] * c
        self._dcache[("zb", i)] = ZPolynomial(self.n, t)
        return self._dcache[("zb", i)]

    def compose_affine(self, M, b=None):
        """The polynomial zeta -> f(M zeta + b) on C^{n'}, M of shape (n, n')."""
        M = np.asarray(M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != self.n:
            raise InputError(f"affine map must have {self.n} rows")
        m = M.shape[1]
        b = np.zeros(self.n, dtype=complex) if b is None else np.asarray(b, dtype=complex)
        zs = [reduce(lambda p, q: p + q, (M[i, j] * ZPolynomial.z(m, j) for j in range(m))) + b[i]
              for i in range(self.n)]
        zbs = [zi.conj() for zi in zs]
        cache: dict = {}

        def power(lst, i, e, tag):
            key = (tag, i, e)
            if key not in cache:
                cache[key] = lst[i] ** e
            return cache[key]

        out = ZPolynomial(m)
        for (a, bb), c in self._terms.items():
            term = ZPolynomial.const(m, c)
            for i in range(self.n):
                if a[i]:
                    term = term * power(zs, i, a[i], "z")
                if bb[i]:
                    term = term * power(zbs, i, bb[i], "zb")
            out = out + term
        return ZPolynomial(m, _clean(out.terms, drop=1e-15 * max(1.0, max(map(abs, out.terms.values()),
                                                                           default=1.0))))

    # serialization
    def to_json(self) -> list:
        return [
            {"alpha": list(a), "beta": list(b), "coeff": [float(c.real), float(c.imag)]}
            for (a, b), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, n: int, data: list, max_degree: int = MAX_DEGREE) -> "ZPolynomial":
        terms = []
        for item in data:
            try:
                coeff = item["coeff"]
                c = complex(coeff[0], coeff[1]) if isinstance(coeff, (list, tuple)) else complex(coeff)
                terms.append(((item["alpha"], item["beta"]), c))
            except (KeyError, TypeError, IndexError) as exc:
                raise InputError(f"malformed polynomial term {item!r}") from exc
        f = cls(n, terms).closure()
        if f.degree > max_degree:
            raise InputError(f"degree {f.degree} exceeds the maximum {max_degree}")
        return f


def gradients(f: ZPolynomial, z) -> tuple[np.ndarray, np.ndarray]:
    """Holomorphic and antiholomorphic gradients (df/dz_i, df/dconj(z_i)) at z."""
    z = np.asarray(z, dtype=complex)[None, :]
    d = np.array([f.dz(i).evaluate(z)[0] for i in range(f.n)])
    db = np.array([f.dzbar(i).evaluate(z)[0] for i in range(f.n)])
    return d, db


def complex_hessian(f: ZPolynomial, z) -> np.ndarray:
    """Hermitian matrix H[a, b] = d^2 f / dconj(z_a) dz_b, so that the Levi form is xi* H xi."""
    z = np.asarray(z, dtype=complex)[None, :]
    n = f.n
    H = np.empty((n, n), dtype=complex)
    for a in range(n):
        fa = f.dzbar(a)
        for b in range(n):
            H[a, b] = fa.dz(b).evaluate(z)[0]
    return 0.5 * (H + H.conj().T)
