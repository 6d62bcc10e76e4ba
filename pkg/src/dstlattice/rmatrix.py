"""Classical r-matrices, quantum R-matrices and Yang-Baxter residuals.

Tensor convention: e_ij (x) e_kl sits at row 2i+k, column 2j+l (0-based),
which is exactly ``np.kron``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateEvaluation, InvalidParam

KINDS = ("rational_classical", "trig_classical_AL", "yangian_quantum",
         "trig_quantum_AL", "xxz_quantum")
CLASSICAL = ("rational_classical", "trig_classical_AL")
QUANTUM = ("yangian_quantum", "trig_quantum_AL", "xxz_quantum")
_TRIG = ("trig_classical_AL", "trig_quantum_AL", "xxz_quantum")

_POLE_EPS = 1e-12


def unit(i: int, j: int, d: int = 2) -> np.ndarray:
    m = np.zeros((d, d), dtype=complex)
    m[i, j] = 1.0
    return m


def permutation(d: int = 2) -> np.ndarray:
    return sum(np.kron(unit(i, j, d), unit(j, i, d)) for i in range(d) for j in range(d))


P = permutation()
I4 = np.eye(4, dtype=complex)


@dataclass(frozen=True)
class RMatrixKind:
    tag: str
    mu: complex = 0.0
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.tag not in KINDS:
            raise InvalidParam(f"unknown r-matrix kind {self.tag!r}")
        if self.tag in _TRIG and self.mu == 0:
            raise InvalidParam("trigonometric kinds need mu != 0")


def _diag_sum():
    return np.kron(unit(0, 0), unit(0, 0)) + np.kron(unit(1, 1), unit(1, 1))


def _offdiag_swap():
    return np.kron(unit(0, 1), unit(1, 0)) + np.kron(unit(1, 0), unit(0, 1))


def al_classical(lam: complex) -> np.ndarray:
    """Trigonometric classical r-matrix of the Ablowitz-Ladik hierarchy.

    The sinh term carries sign(j - i); with the alternating sign (-1)^(j-i)
    the classical Yang-Baxter equation fails.
    """
    s = np.sinh(lam)
    if abs(s) < _POLE_EPS:
        raise DegenerateEvaluation("sinh(lambda) = 0")
    cross = np.kron(unit(0, 0), unit(1, 1)) - np.kron(unit(1, 1), unit(0, 0))
    return (np.cosh(lam) * _diag_sum() + _offdiag_swap() + s * cross) / (2 * s)


def al_classical_alternating(lam: complex) -> np.ndarray:
    """Variant with a symmetric (-1)^(j-i) sign; kept as a negative control."""
    s = np.sinh(lam)
    if abs(s) < _POLE_EPS:
        raise DegenerateEvaluation("sinh(lambda) = 0")
    cross = -(np.kron(unit(0, 0), unit(1, 1)) + np.kron(unit(1, 1), unit(0, 0)))
    return (np.cosh(lam) * _diag_sum() + _offdiag_swap() + s * cross) / (2 * s)


def trig_quantum(lam: complex, mu: complex, twisted: bool = True) -> np.ndarray:
    """sinh(lam+mu) on the diagonal, sinh(mu) on the swaps, sinh(lam) on the rest.

    ``twisted`` multiplies the e11 (x) e22 / e22 (x) e11 terms by q / q^-1.
    """
    q = np.exp(mu)
    a, b, c = np.sinh(lam + mu), np.sinh(lam), np.sinh(mu)
    t1, t2 = (q, 1 / q) if twisted else (1.0, 1.0)
    return (a * _diag_sum() + c * _offdiag_swap()
            + b * (t1 * np.kron(unit(0, 0), unit(1, 1)) + t2 * np.kron(unit(1, 1), unit(0, 0))))


def make_r(kind: RMatrixKind | str, lam: complex) -> np.ndarray:
    if isinstance(kind, str):
        kind = RMatrixKind(kind)
    tag = kind.tag
    if tag == "rational_classical":
        if abs(lam) < _POLE_EPS:
            raise DegenerateEvaluation("rational r has a pole at 0")
        return P / lam
    if tag == "trig_classical_AL":
        return al_classical(lam)
    if tag == "yangian_quantum":
        return lam * I4 + P
    if tag == "trig_quantum_AL":
        return trig_quantum(lam, kind.mu, twisted=True)
    return trig_quantum(lam, kind.mu, twisted=False)


def embed(r: np.ndarray, slots: tuple[int, int]) -> np.ndarray:
    """Place a 4x4 operator on two of three 2-dim tensor factors."""
    eye = np.eye(2)
    if slots == (0, 1):
        return np.kron(r, eye)
    if slots == (1, 2):
        return np.kron(eye, r)
    if slots == (0, 2):
        r4 = r.reshape(2, 2, 2, 2)
        return np.einsum("ikjm,ln->ilkjnm", r4, eye).reshape(8, 8)
    raise InvalidParam(f"unsupported slots {slots}")


def _comm(a, b):
    return a @ b - b @ a


def cybe_residual_of(rfun, l1: complex, l2: complex) -> float:
    r12 = embed(rfun(l1 - l2), (0, 1))
    r13 = embed(rfun(l1), (0, 2))
    r23 = embed(rfun(l2), (1, 2))
    res = _comm(r12, r13) + _comm(r12, r23) + _comm(r13, r23)
    return float(np.abs(res).max())


def qybe_residual_of(Rfun, l1: complex, l2: complex) -> float:
    r12 = embed(Rfun(l1 - l2), (0, 1))
    r13 = embed(Rfun(l1), (0, 2))
    r23 = embed(Rfun(l2), (1, 2))
    res = r12 @ r13 @ r23 - r23 @ r13 @ r12
    scale = max(1.0, float(np.abs(r12 @ r13 @ r23).max()))
    return float(np.abs(res).max()) / scale


def check_cybe(kind: RMatrixKind | str, l1: complex, l2: complex) -> float:
    if isinstance(kind, str):
        kind = RMatrixKind(kind)
    if kind.tag not in CLASSICAL:
        raise InvalidParam(f"{kind.tag} is not a classical r-matrix")
    return cybe_residual_of(lambda x: make_r(kind, x), l1, l2)


def check_qybe(kind: RMatrixKind | str, l1: complex, l2: complex) -> float:
    if isinstance(kind, str):
        kind = RMatrixKind(kind)
    if kind.tag not in QUANTUM:
        raise InvalidParam(f"{kind.tag} is not a quantum R-matrix")
    return qybe_residual_of(lambda x: make_r(kind, x), l1, l2)


def default_kind(tag: str) -> RMatrixKind:
    mu = {"trig_classical_AL": 0.7, "trig_quantum_AL": 1j * np.pi / 5, "xxz_quantum": 0.4 + 0.3j}
    return RMatrixKind(tag, mu.get(tag, 0.0))


def ybe_sweep(kind: RMatrixKind | str, samples: int = 100, seed: int = 0) -> tuple[float, int]:
    """Max Yang-Baxter residual over random complex spectral pairs.

    Returns (max residual, index of the worst sample).
    """
    if isinstance(kind, str):
        kind = default_kind(kind)
    rng = np.random.default_rng(seed)
    check = check_cybe if kind.tag in CLASSICAL else check_qybe
    worst, arg = 0.0, -1
    done = 0
    while done < samples:
        l1, l2 = rng.uniform(-1.5, 1.5, 2) + 1j * rng.uniform(-1.5, 1.5, 2)
        if min(abs(l1), abs(l2), abs(l1 - l2)) < 0.1:
            continue
        r = check(kind, l1, l2)
        if r > worst:
            worst, arg = r, done
        done += 1
    return worst, arg
