"""Cyclic matrix representation of the q-boson algebra behind the quantum AL model.

Quantum-space operators are p x p complex matrices.  A quantum Lax operator is
a function z -> 2x2 nested list of such matrices; it is lifted to the two
auxiliary spaces as a 4p x 4p matrix with the quantum factor last.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegenerateEvaluation, InvalidParam, NonInvertible
from .rmatrix import trig_quantum, unit

LAXES = ("L", "Lplus", "Lminus")
COPRODUCTS = ("Lminus", "Lplus", "hatLminus", "hatLplus")

QLaxFn = Callable[[complex], list]


def _cyclic_shift(p: int) -> np.ndarray:
    Y = np.zeros((p, p), dtype=complex)
    Y[np.arange(p - 1), np.arange(1, p)] = 1
    Y[p - 1, 0] = 1
    return Y


def exchange_residual(p: int, q: complex) -> float:
    """max |XY - q^2 YX| for the cyclic pair at this q (zero iff q^{2p} = 1)."""
    X = np.diag(q ** (-2.0 * np.arange(1, p + 1)))
    Y = _cyclic_shift(p)
    return float(np.abs(X @ Y - q * q * Y @ X).max())


@dataclass(frozen=True)
class CyclicRep:
    p: int
    q: complex
    X: np.ndarray
    Y: np.ndarray
    xi: complex
    zeta: complex
    bh: np.ndarray
    b: np.ndarray

    @property
    def mu(self) -> complex:
        return complex(np.log(self.q))

    @property
    def eye(self) -> np.ndarray:
        return np.eye(self.p, dtype=complex)

    def A(self, order: str = "bh_b") -> np.ndarray:
        """-1 + bh b (the fixed order) or -1 + b bh."""
        prod = self.bh @ self.b if order == "bh_b" else self.b @ self.bh
        return prod - self.eye


def cyclic_rep(p: int, xi: complex = 1.0, zeta: complex = 1.0, q: complex | None = None) -> CyclicRep:
    """Cyclic pair X = sum q^-2k e_kk, Y = cyclic shift, with bh, b built on top.

    q defaults to e^{i pi/p}.  Any q with q^{2p} = 1 is accepted.
    """
    if not isinstance(p, (int, np.integer)) or p < 3:
        raise InvalidParam(f"p must be an integer >= 3, got {p!r}")
    if xi == 0 or zeta == 0:
        raise InvalidParam("xi and zeta must be nonzero")
    q = np.exp(1j * np.pi / p) if q is None else complex(q)
    wrap = exchange_residual(p, q)
    if wrap > 1e-12:
        raise InvalidParam(f"XY = q^2 YX fails on the wrap entry ({wrap:.2e}); need q^(2p) = 1")
    X = np.diag(q ** (-2.0 * np.arange(1, p + 1)))
    Y = _cyclic_shift(p)
    I = np.eye(p, dtype=complex)
    bh = (q * xi * X + I) @ Y * zeta
    b = Y.T / zeta  # Y is a permutation, so Y^-1 = Y^T
    return CyclicRep(p, q, X, Y, complex(xi), complex(zeta), bh, b)


def check_qboson_algebra(rep: CyclicRep, q: complex | None = None) -> dict[str, float]:
    """Residuals of q bh b - q^-1 b bh = q - q^-1, bh A = q^-2 A bh, b A = q^2 A b.

    Passing a different ``q`` evaluates the relations at that value (negative control).
    """
    q = rep.q if q is None else q
    bh, b, I = rep.bh, rep.b, rep.eye
    A = rep.A()
    return {
        "q_commutator": float(np.abs(q * bh @ b - b @ bh / q - (q - 1 / q) * I).max()),
        "bh_A_exchange": float(np.abs(bh @ A - A @ bh / q**2).max()),
        "b_A_exchange": float(np.abs(b @ A - q**2 * A @ b).max()),
    }


# ---------------------------------------------------------------------------
# Lax operators
# ---------------------------------------------------------------------------
def lax_operator(rep: CyclicRep, which: str, A_order: str = "bh_b", A_sign: float = -1.0) -> QLaxFn:
    """L, L+ or L- as z -> [[., .], [., .]].

    ``A_order``/``A_sign`` exist for negative controls (A = A_sign + product).
    """
    I, bh, b = rep.eye, rep.bh, rep.b
    prod = bh @ b if A_order == "bh_b" else b @ bh
    A = prod + A_sign * I
    if which == "L":
        return lambda z: [[z * I, bh], [b, I / z]]
    if which == "Lminus":
        return lambda z: [[z * I, bh], [b, -z * A + I / z]]
    if which == "Lplus":
        return lambda z: [[z * I - A / z, bh], [b, I / z]]
    raise InvalidParam(f"unknown Lax {which!r}; choose from {LAXES}")


def lift(lax_z: list, slot: int) -> np.ndarray:
    """Place a 2x2 operator-valued matrix into auxiliary slot 0 or 1 (quantum last)."""
    p = lax_z[0][0].shape[0]
    out = np.zeros((4 * p, 4 * p), dtype=complex)
    eye2 = np.eye(2)
    for i in range(2):
        for j in range(2):
            aux = np.kron(unit(i, j), eye2) if slot == 0 else np.kron(eye2, unit(i, j))
            out += np.kron(aux, lax_z[i][j])
    return out


def rtt_residual(lax: QLaxFn, R: np.ndarray, z1: complex, z2: complex) -> float:
    """max |R L1 L2 - L2 L1 R| computed block-wise over the auxiliary indices."""
    A = np.array(lax(z1))            # (2, 2, d, d)
    B = np.array(lax(z2))
    # (L1 L2)[(i,k),(j,l)] = A_ij B_kl ; (L2 L1)[(i,k),(j,l)] = B_kl A_ij
    Ai = A[:, None, :, None]         # axes (i, k, j, l, a, c)
    Bk = B[None, :, None, :]
    T12 = Ai @ Bk
    T21 = Bk @ Ai
    R4 = R.reshape(2, 2, 2, 2)
    lhs = np.tensordot(R4, T12, axes=([2, 3], [0, 1]))
    rhs = np.moveaxis(np.tensordot(T21, R4, axes=([2, 3], [0, 1])), (-2, -1), (2, 3))
    return float(np.abs(lhs - rhs).max())


def _check_spectral(l1: complex, l2: complex, mu: complex):
    for v in (l1 - l2, l1 - l2 + mu, mu):
        if abs(np.sinh(v)) < 1e-10:
            raise DegenerateEvaluation(f"sinh({v}) vanishes")


def check_rtt_rep(lax: str | QLaxFn, rep: CyclicRep, z1: complex, z2: complex) -> float:
    """RTT with the twisted trigonometric R at lambda = ln z1 - ln z2."""
    fn = lax_operator(rep, lax) if isinstance(lax, str) else lax
    l1, l2 = np.log(z1), np.log(z2)
    _check_spectral(l1, l2, rep.mu)
    return rtt_residual(fn, trig_quantum(l1 - l2, rep.mu, twisted=True), z1, z2)


# ---------------------------------------------------------------------------
# gauge to the untwisted R
# ---------------------------------------------------------------------------
def gauge_V(rep: CyclicRep) -> np.ndarray:
    """Diagonal V with V^-2 = A = q xi X and V_{k+1} = q V_k.

    V = (q xi)^{-1/2} diag(q^k) with the principal root of q xi.  The relations
    with bh and b need q^p = 1 so that the ratio also holds across the wrap.
    """
    d = np.diag(rep.A())
    if np.min(np.abs(d)) < 1e-12:
        raise NonInvertible("A has a vanishing diagonal entry")
    s = (rep.q * rep.xi) ** -0.5
    return np.diag(s * rep.q ** np.arange(1, rep.p + 1))


def hat_lax(rep: CyclicRep, which: str) -> QLaxFn:
    """L^-hat / L^+hat with C = q^-1/2 V b, Ch = q^1/2 V bh."""
    V = gauge_V(rep)
    Vi = np.linalg.inv(V)
    C = rep.q ** -0.5 * V @ rep.b
    Ch = rep.q ** 0.5 * V @ rep.bh
    if which == "hatLminus":
        return lambda z: [[z * V, Ch], [C, -z * Vi + V / z]]
    if which == "hatLplus":
        return lambda z: [[z * V - Vi / z, Ch], [C, V / z]]
    raise InvalidParam(f"unknown hat Lax {which!r}")


def gauge_check(rep: CyclicRep, z1: complex, z2: complex) -> dict[str, float]:
    """Residuals of the gauge relations between the twisted and XXZ pictures.

    rtt_hat_*      : RTT of L^-hat / L^+hat with the untwisted R
    intertwine_*   : (G^-1 x V^-1) Lh (G x 1) - (G x 1) Lh (G^-1 x V^-1)
    V_A, bh_V, b_V : V^-2 = A, bh V = q V bh, b V = q^-1 V b
    R_conj         : R - (G x G^-1) Rhat (G x G^-1)
    """
    q = rep.q
    l1, l2 = np.log(z1), np.log(z2)
    _check_spectral(l1, l2, rep.mu)
    V = gauge_V(rep)
    Vi = np.linalg.inv(V)
    A = rep.A()
    out = {
        "V_A": float(np.abs(Vi @ Vi - A).max()),
        "bh_V": float(np.abs(rep.bh @ V - q * V @ rep.bh).max()),
        "b_V": float(np.abs(rep.b @ V - V @ rep.b / q).max()),
    }
    Rhat = trig_quantum(l1 - l2, rep.mu, twisted=False)
    G = np.diag([q ** 0.25, q ** -0.25])
    Gi = np.linalg.inv(G)
    GG = np.kron(G, Gi)
    out["R_conj"] = float(np.abs(trig_quantum(l1 - l2, rep.mu, twisted=True) - GG @ Rhat @ GG).max())
    I = rep.eye
    for which in ("hatLminus", "hatLplus"):
        fn = hat_lax(rep, which)
        tag = which[3:].lower()
        out[f"rtt_hat_{tag}"] = rtt_residual(fn, Rhat, z1, z2)
        Lh = _as_block(fn(z1))
        left = np.kron(Gi, Vi) @ Lh @ np.kron(G, I)
        right = np.kron(G, I) @ Lh @ np.kron(Gi, Vi)
        out[f"intertwine_{tag}"] = float(np.abs(left - right).max())
    return out


def _as_block(m: list) -> np.ndarray:
    """2x2 operator matrix as a (2p x 2p) block matrix, auxiliary index first."""
    return np.block([[m[0][0], m[0][1]], [m[1][0], m[1][1]]])


# ---------------------------------------------------------------------------
# coproducts
# ---------------------------------------------------------------------------
def coproduct_lax(fn: QLaxFn, p: int, sigma_z: bool = True) -> Callable[[complex], list]:
    """z -> L(2, z) L(1, z) on C^p (x) C^p, optionally with sigma^z L in each factor."""
    I = np.eye(p, dtype=complex)

    def delta(z):
        m = fn(z)
        if sigma_z:
            m = [m[0], [-m[1][0], -m[1][1]]]
        L1 = [[np.kron(m[i][j], I) for j in range(2)] for i in range(2)]
        L2 = [[np.kron(I, m[i][j]) for j in range(2)] for i in range(2)]
        return [[L2[i][0] @ L1[0][j] + L2[i][1] @ L1[1][j] for j in range(2)] for i in range(2)]

    return delta


_ZS = (1.0, -1.0, 2.0, -2.0, 0.5)
_POWERS = (-2, -1, 0, 1, 2)
_VINV = np.linalg.inv(np.array([[z ** e for e in _POWERS] for z in _ZS]))


def z_coefficients(fn: Callable, i: int, j: int, samples: list | None = None) -> dict[int, np.ndarray]:
    """Coefficients z^-2..z^2 of entry (i, j) by exact polynomial interpolation."""
    samples = samples if samples is not None else [fn(z) for z in _ZS]
    vals = np.stack([s[i][j] for s in samples])
    coef = np.tensordot(_VINV, vals, axes=1)
    return dict(zip(_POWERS, coef))


def coproduct_check(rep: CyclicRep, which: str, z1: complex = 1.3 + 0.2j,
                    z2: complex = 0.7 - 0.4j) -> dict[str, float]:
    """Compare coefficients of Delta(L) = L(2) L(1) with the two-site formulas.

    Each factor is multiplied by sigma^z first.  Delta(B) is read off the z^-1
    coefficient of the (2,1) entry, Delta(Bh) off the z coefficient of (1,2).
    Also reports the RTT residual of Delta(L) on the doubled quantum space.
    """
    if which not in COPRODUCTS:
        raise InvalidParam(f"unknown coproduct {which!r}; choose from {COPRODUCTS}")
    p = rep.p
    I = rep.eye
    kr = np.kron
    if which.startswith("hat"):
        fn = hat_lax(rep, which)
        V = gauge_V(rep)
        Vi = np.linalg.inv(V)
        lo = rep.q ** -0.5 * V @ rep.b       # C
        hi = rep.q ** 0.5 * V @ rep.bh       # Ch
        if which == "hatLminus":
            expect = {"C": kr(lo, V), "Ch": kr(hi, V) + kr(Vi, hi)}
        else:
            expect = {"C": kr(lo, V) + kr(Vi, lo), "Ch": kr(hi, V)}
        names = ("C", "Ch")
        twisted = False
    else:
        fn = lax_operator(rep, which)
        A = rep.A()
        if which == "Lminus":
            expect = {"B": kr(rep.b, I), "Bh": kr(rep.bh, I) + kr(A, rep.bh)}
        else:
            expect = {"B": kr(rep.b, I) + kr(A, rep.b), "Bh": kr(rep.bh, I)}
        names = ("B", "Bh")
        twisted = True
    delta = coproduct_lax(fn, p)
    samples = [delta(z) for z in _ZS]
    got = {names[0]: z_coefficients(delta, 1, 0, samples)[-1],
           names[1]: z_coefficients(delta, 0, 1, samples)[1]}
    out = {f"Delta({n})": float(np.abs(got[n] - expect[n]).max()) for n in names}
    l1, l2 = np.log(z1), np.log(z2)
    _check_spectral(l1, l2, rep.mu)
    R = trig_quantum(l1 - l2, rep.mu, twisted=twisted)
    out["rtt_doubled"] = rtt_residual(delta, R, z1, z2)
    return out


def random_draw(rng: np.random.Generator, radius: float = 0.6) -> tuple[complex, complex, complex, complex]:
    """(xi, zeta, z1, z2) with moduli bounded away from 0 and infinity."""
    def c(lo, hi):
        return rng.uniform(lo, hi) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    return c(0.5, 1.5), c(0.5, 1.5), c(1 - radius, 1 + radius), c(1 - radius, 1 + radius)


def qboson_suite(p: int, draws: int = 20, seed: int = 0) -> dict[str, float]:
    """Max residual per check family over seeded draws.

    The algebra and twisted RTT use q = e^{i pi/p}; the gauge and coproduct
    families need q^p = 1 and use q = e^{2 pi i/p}.
    """
    rng = np.random.default_rng(seed)
    worst: dict[str, float] = {}

    def keep(key, v):
        worst[key] = max(worst.get(key, 0.0), v)

    q_gauge = np.exp(2j * np.pi / p)
    for _ in range(draws):
        xi, zeta, z1, z2 = random_draw(rng)
        rep = cyclic_rep(p, xi, zeta)
        for k, v in check_qboson_algebra(rep).items():
            keep("algebra", v)
        for lax in LAXES:
            keep("rtt", check_rtt_rep(lax, rep, z1, z2))
        grep = cyclic_rep(p, xi, zeta, q=q_gauge)
        keep("algebra", max(check_qboson_algebra(grep).values()))
        keep("gauge", max(gauge_check(grep, z1, z2).values()))
        for which in COPRODUCTS:
            res = coproduct_check(grep, which, z1, z2)
            keep("coproduct_rtt", res.pop("rtt_doubled"))
            keep("coproduct", max(res.values()))
    return worst
