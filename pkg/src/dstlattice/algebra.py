"""Laurent polynomials in one spectral variable and small matrices of them.

Coefficients are complex doubles.  After every operation coefficients
smaller than ``PRUNE * max|c|`` are dropped, so a stored coefficient is
never exactly zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateEvaluation, ShapeError

PRUNE = 1e-15


def _trim(lo: int, c: np.ndarray) -> tuple[int, np.ndarray]:
    """Prune tiny coefficients and strip empty degrees from both ends.

    ``c`` has the degree on its last axis.
    """
    c = np.array(c, dtype=complex)
    if c.size == 0:
        return 0, np.zeros(c.shape[:-1] + (0,), dtype=complex)
    mag = np.abs(c)
    top = mag.max()
    if top == 0.0 or not np.isfinite(top):
        if not np.isfinite(top):
            raise ValueError("non-finite coefficient")
        return 0, np.zeros(c.shape[:-1] + (0,), dtype=complex)
    c[mag < PRUNE * top] = 0.0
    alive = np.flatnonzero(np.any(c.reshape(-1, c.shape[-1]) != 0, axis=0))
    first, last = alive[0], alive[-1]
    return lo + int(first), c[..., first:last + 1]


class LaurentPoly:
    """Immutable Laurent polynomial ``sum_k c_k t^k``."""

    __slots__ = ("_lo", "_c")

    def __init__(self, coeffs: Mapping[int, complex] | Number | None = None):
        if coeffs is None:
            coeffs = {}
        elif isinstance(coeffs, Number):
            coeffs = {0: coeffs}
        if coeffs:
            lo, hi = min(coeffs), max(coeffs)
            c = np.zeros(hi - lo + 1, dtype=complex)
            for k, v in coeffs.items():
                c[k - lo] += v
        else:
            lo, c = 0, np.zeros(0, dtype=complex)
        self._lo, self._c = _trim(lo, c)
        self._c.flags.writeable = False

    @classmethod
    def _raw(cls, lo: int, c: np.ndarray) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj._lo, obj._c = _trim(lo, c)
        obj._c.flags.writeable = False
        return obj

    @classmethod
    def monomial(cls, k: int, c: complex = 1.0) -> "LaurentPoly":
        return cls({k: c})

    # -- read access ---------------------------------------------------
    @property
    def coeffs(self) -> dict[int, complex]:
        return {self._lo + i: complex(v) for i, v in enumerate(self._c) if v != 0}

    @property
    def low(self) -> int:
        return self._lo

    @property
    def high(self) -> int:
        return self._lo + len(self._c) - 1

    def is_zero(self) -> bool:
        return self._c.size == 0

    def coeff(self, k: int) -> complex:
        i = k - self._lo
        return complex(self._c[i]) if 0 <= i < len(self._c) else 0j

    def max_abs(self) -> float:
        return float(np.abs(self._c).max()) if self._c.size else 0.0

    # -- arithmetic ----------------------------------------------------
    @staticmethod
    def _coerce(x) -> "LaurentPoly":
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, Number):
            return LaurentPoly(x)
        return NotImplemented

    def _addsub(self, other, sign):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero():
            return LaurentPoly._raw(other._lo, sign * other._c)
        if other.is_zero():
            return self
        lo = min(self._lo, other._lo)
        hi = max(self.high, other.high)
        c = np.zeros(hi - lo + 1, dtype=complex)
        c[self._lo - lo:self._lo - lo + len(self._c)] += self._c
        c[other._lo - lo:other._lo - lo + len(other._c)] += sign * other._c
        return LaurentPoly._raw(lo, c)

    def __add__(self, other):
        return self._addsub(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return LaurentPoly._raw(self._lo, -self._c)

    def __mul__(self, other):
        if isinstance(other, Number):
            return LaurentPoly._raw(self._lo, self._c * other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        return LaurentPoly._raw(self._lo + other._lo, np.convolve(self._c, other._c))

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._lo == other._lo and np.array_equal(self._c, other._c) or (
            self.is_zero() and other.is_zero())

    def __hash__(self):
        return hash((self._lo, self._c.tobytes()))

    def eval(self, t: complex) -> complex:
        if self.is_zero():
            return 0j
        if t == 0:
            if self._lo < 0:
                raise DegenerateEvaluation("negative power evaluated at 0")
            return complex(self.coeff(0))
        # Horner on the positive part, then shift
        acc = 0j
        for v in self._c[::-1]:
            acc = acc * t + v
        return complex(acc * t ** self._lo)

    __call__ = eval

    def __repr__(self):
        if self.is_zero():
            return "LaurentPoly(0)"
        terms = [f"({v:.6g})t^{k}" for k, v in self.coeffs.items()]
        return "LaurentPoly(" + " + ".join(terms) + ")"


class LaurentMat:
    """Square matrix of Laurent polynomials, stored as a (d, d, K) array."""

    __slots__ = ("_lo", "_c")

    def __init__(self, lo: int, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1]:
            raise ShapeError(f"expected (d, d, K) coefficients, got {coeffs.shape}")
        d = coeffs.shape[0]
        self._lo, c = _trim(lo, coeffs)
        if c.shape[:2] != (d, d):
            c = np.zeros((d, d, 0), dtype=complex)
        self._c = c
        self._c.flags.writeable = False

    # -- constructors --------------------------------------------------
    @classmethod
    def from_entries(cls, rows: Sequence[Sequence]) -> "LaurentMat":
        d = len(rows)
        if any(len(r) != d for r in rows):
            raise ShapeError("matrix must be square")
        polys = [[e if isinstance(e, LaurentPoly) else LaurentPoly(e) for e in r] for r in rows]
        nz = [p for r in polys for p in r if not p.is_zero()]
        if not nz:
            return cls(0, np.zeros((d, d, 0)))
        lo = min(p.low for p in nz)
        hi = max(p.high for p in nz)
        c = np.zeros((d, d, hi - lo + 1), dtype=complex)
        for i, r in enumerate(polys):
            for j, p in enumerate(r):
                if not p.is_zero():
                    c[i, j, p.low - lo:p.high - lo + 1] = p._c
        return cls(lo, c)

    @classmethod
    def constant(cls, m) -> "LaurentMat":
        m = np.asarray(m, dtype=complex)
        return cls(0, m[:, :, None])

    @classmethod
    def identity(cls, d: int) -> "LaurentMat":
        return cls.constant(np.eye(d))

    @classmethod
    def from_coeffs(cls, mats: Mapping[int, np.ndarray]) -> "LaurentMat":
        """Build from ``{degree: d x d array}``."""
        lo, hi = min(mats), max(mats)
        d = np.asarray(next(iter(mats.values()))).shape[0]
        c = np.zeros((d, d, hi - lo + 1), dtype=complex)
        for k, m in mats.items():
            c[:, :, k - lo] += m
        return cls(lo, c)

    # -- read access ---------------------------------------------------
    @property
    def dim(self) -> int:
        return self._c.shape[0]

    @property
    def low(self) -> int:
        return self._lo

    @property
    def high(self) -> int:
        return self._lo + self._c.shape[2] - 1

    def coeff(self, k: int) -> np.ndarray:
        i = k - self._lo
        if 0 <= i < self._c.shape[2]:
            return self._c[:, :, i].copy()
        return np.zeros((self.dim, self.dim), dtype=complex)

    def entry(self, i: int, j: int) -> LaurentPoly:
        return LaurentPoly._raw(self._lo, self._c[i, j])

    __getitem__ = lambda self, ij: self.entry(*ij)

    def is_zero(self) -> bool:
        return self._c.shape[2] == 0

    def max_abs(self) -> float:
        return float(np.abs(self._c).max()) if self._c.size else 0.0

    # -- arithmetic ----------------------------------------------------
    def _check(self, other: "LaurentMat"):
        if not isinstance(other, LaurentMat):
            raise ShapeError("operand is not a LaurentMat")
        if other.dim != self.dim:
            raise ShapeError(f"dimension mismatch {self.dim} vs {other.dim}")

    def _addsub(self, other, sign):
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return LaurentMat(other._lo, sign * other._c)
        lo = min(self._lo, other._lo)
        hi = max(self.high, other.high)
        c = np.zeros((self.dim, self.dim, hi - lo + 1), dtype=complex)
        c[:, :, self._lo - lo:self.high - lo + 1] += self._c
        c[:, :, other._lo - lo:other.high - lo + 1] += sign * other._c
        return LaurentMat(lo, c)

    def __add__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __neg__(self):
        return LaurentMat(self._lo, -self._c)

    def __mul__(self, s):
        if isinstance(s, Number):
            return LaurentMat(self._lo, self._c * s)
        return NotImplemented

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        d = self.dim
        if self.is_zero() or other.is_zero():
            return LaurentMat(0, np.zeros((d, d, 0)))
        ka, kb = self._c.shape[2], other._c.shape[2]
        c = np.zeros((d, d, ka + kb - 1), dtype=complex)
        for i in range(ka):
            a = self._c[:, :, i]
            for j in range(kb):
                c[:, :, i + j] += a @ other._c[:, :, j]
        return LaurentMat(self._lo + other._lo, c)

    def kron(self, other: "LaurentMat") -> "LaurentMat":
        if not isinstance(other, LaurentMat):
            raise ShapeError("operand is not a LaurentMat")
        da, db = self.dim, other.dim
        if self.is_zero() or other.is_zero():
            return LaurentMat(0, np.zeros((da * db, da * db, 0)))
        ka, kb = self._c.shape[2], other._c.shape[2]
        c = np.zeros((da * db, da * db, ka + kb - 1), dtype=complex)
        for i in range(ka):
            for j in range(kb):
                c[:, :, i + j] += np.kron(self._c[:, :, i], other._c[:, :, j])
        return LaurentMat(self._lo + other._lo, c)

    def det2(self) -> LaurentPoly:
        if self.dim != 2:
            raise ShapeError("det2 needs a 2x2 matrix")
        e = self.entry
        return e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0)

    def trace(self) -> LaurentPoly:
        return LaurentPoly._raw(self._lo, np.trace(self._c, axis1=0, axis2=1))

    def eval(self, t: complex) -> np.ndarray:
        if self.is_zero():
            return np.zeros((self.dim, self.dim), dtype=complex)
        if t == 0 and self._lo < 0:
            raise DegenerateEvaluation("negative power evaluated at 0")
        acc = np.zeros((self.dim, self.dim), dtype=complex)
        for k in range(self._c.shape[2] - 1, -1, -1):
            acc = acc * t + self._c[:, :, k]
        return acc * (t ** self._lo if self._lo else 1)

    def __eq__(self, other):
        if not isinstance(other, LaurentMat):
            return NotImplemented
        if self.is_zero() and other.is_zero():
            return self.dim == other.dim
        return self._lo == other._lo and np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash((self._lo, self._c.tobytes()))

    def __repr__(self):
        return f"LaurentMat(dim={self.dim}, degrees={self.low}..{self.high})"


@dataclass(frozen=True)
class ZeroCheck:
    passed: bool
    max_residual: float

    def __bool__(self):
        return self.passed


def approx_zero(A: LaurentMat | LaurentPoly, tol: float, scale: float = 1.0) -> ZeroCheck:
    """Largest coefficient magnitude of ``A`` against ``tol * max(scale, 1)``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = A.max_abs()
    return ZeroCheck(res <= tol * max(scale, 1.0), res)


def lp_arith(a: LaurentPoly, b: LaurentPoly | None, op: str, at: complex | None = None):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "eval":
        return a.eval(at)
    raise ValueError(f"unknown op {op!r}")


def mat_arith(A: LaurentMat, B: LaurentMat | None, op: str):
    if op == "mul":
        return A @ B
    if op == "add":
        return A + B
    if op == "sub":
        return A - B
    if op == "kron":
        return A.kron(B)
    if op == "det2":
        return A.det2()
    raise ValueError(f"unknown op {op!r}")


LAMBDA = LaurentPoly.monomial(1)
