"""Semi-discrete-time NLS: continuous x, discrete time a.

Lax pair: U(a) = [[lam, uh_a], [u_{a-1}, 0]] and
V2(a) = [[lam^2 + lam N2 + A, lam uh + B], [lam u + C, D]] with
N2 = (u B + uh C)/(1 + uh u), A = (1 + B C)/(1 + uh u), D = 1 + uh u,
B = (uh' - uh^2 u')/(1 - u uh), C = (u^2 uh' - u')/(1 - u uh).
Zero curvature: d/dx V(a) = U(a+1) V(a) - V(a) U(a).

Solutions come from the Toda-type Darboux map applied to a seed
w(x, a) = sum c e^{-k x + Lam a}:  u_{a-1} = g / w_a and
uh_a = -(w_a w_a'' - w_a'^2) / (g w_a).

x-derivatives are carried as truncated Taylor jets, so every identity is
checked with exact closed-form derivatives rather than finite differences.
"""
from __future__ import annotations

import cmath
from math import factorial
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidDispersion, InvalidParam, Singularity

EPS_SING = 1e-8
JET_ORDER = 6
FLOWS = ("nls", "transport")
NLS_CHECKS = ("B_value", "B_flow", "C_value", "C_flow", "D_flow", "N2_flow", "A_flow")


# ---------------------------------------------------------------------------
# Taylor jets in x
# ---------------------------------------------------------------------------
class Jet:
    """Truncated Taylor series: ``t[j] = f^(j)(x0) / j!``."""

    __slots__ = ("t",)

    def __init__(self, t):
        self.t = np.asarray(t, dtype=complex)

    @classmethod
    def const(cls, c: complex, order: int = JET_ORDER) -> "Jet":
        t = np.zeros(order + 1, dtype=complex)
        t[0] = c
        return cls(t)

    @property
    def order(self) -> int:
        return len(self.t) - 1

    @property
    def value(self) -> complex:
        return complex(self.t[0])

    def deriv(self, k: int = 1) -> complex:
        """k-th derivative at the expansion point."""
        if k > self.order:
            raise InvalidParam(f"jet of order {self.order} has no derivative {k}")
        return complex(self.t[k] * factorial(k))

    def dx(self) -> "Jet":
        """Jet of the derivative (one order shorter)."""
        j = np.arange(1, len(self.t))
        return Jet(self.t[1:] * j)

    def _lift(self, o):
        if isinstance(o, Jet):
            m = min(len(self.t), len(o.t))
            return self.t[:m], o.t[:m]
        return self.t, np.concatenate([[complex(o)], np.zeros(len(self.t) - 1)])

    def __add__(self, o):
        a, b = self._lift(o)
        return Jet(a + b)

    __radd__ = __add__

    def __sub__(self, o):
        a, b = self._lift(o)
        return Jet(a - b)

    def __rsub__(self, o):
        a, b = self._lift(o)
        return Jet(b - a)

    def __neg__(self):
        return Jet(-self.t)

    def __mul__(self, o):
        if not isinstance(o, Jet):
            return Jet(self.t * complex(o))
        a, b = self._lift(o)
        return Jet(np.convolve(a, b)[:len(a)])

    __rmul__ = __mul__

    def recip(self) -> "Jet":
        a = self.t
        if abs(a[0]) < EPS_SING:
            raise Singularity("division by a jet with vanishing value")
        r = np.zeros_like(a)
        r[0] = 1 / a[0]
        for j in range(1, len(a)):
            r[j] = -np.dot(a[1:j + 1], r[j - 1::-1][:j]) / a[0]
        return Jet(r)

    def __truediv__(self, o):
        if isinstance(o, Jet):
            return self * o.recip()
        return Jet(self.t / complex(o))

    def __rtruediv__(self, o):
        return self.recip() * o

    def __pow__(self, k: int):
        out = Jet.const(1.0, self.order)
        for _ in range(k):
            out = out * self
        return out


# ---------------------------------------------------------------------------
# seed modes and solutions
# ---------------------------------------------------------------------------
def dispersion(k: complex, flow: str = "nls") -> complex:
    """Lam(k) for the given time flow: ln(k^2 + 1) (nls) or ln(1 - k) (transport)."""
    arg = k * k + 1 if flow == "nls" else 1 - k
    if flow not in FLOWS:
        raise InvalidParam(f"flow must be one of {FLOWS}")
    if abs(arg) < EPS_SING:
        raise InvalidDispersion(f"dispersion argument vanishes at k={k}")
    return cmath.log(arg)


@dataclass(frozen=True)
class Mode:
    c: complex
    k: complex
    Lam: complex


@dataclass(frozen=True)
class ModeFunction:
    """w(x, a) = sum_s c_s exp(-k_s x + Lam_s a).

    ``modes`` are (c, k) or (c, k, Lam).  Missing Lam is filled from the
    flow's dispersion law; a given Lam is validated unless ``check=False``
    (used for negative controls).
    """

    modes: tuple
    flow: str = "nls"
    check: bool = True

    def __post_init__(self):
        if self.flow not in FLOWS:
            raise InvalidParam(f"flow must be one of {FLOWS}")
        out = []
        for m in self.modes:
            if isinstance(m, Mode):
                c, k, lam = m.c, m.k, m.Lam
            elif len(m) == 2:
                (c, k), lam = m, None
            else:
                c, k, lam = m
            want = dispersion(complex(k), self.flow)
            if lam is None:
                lam = want
            elif self.check and abs(cmath.exp(lam) - cmath.exp(want)) > 1e-12 * max(1.0, abs(cmath.exp(want))):
                raise InvalidDispersion(f"mode k={k}: Lam={lam} violates the {self.flow} dispersion law")
            out.append(Mode(complex(c), complex(k), complex(lam)))
        if not out:
            raise InvalidParam("at least one mode is required")
        object.__setattr__(self, "modes", tuple(out))

    def jet(self, x: float, a: int, order: int = JET_ORDER) -> Jet:
        t = np.zeros(order + 1, dtype=complex)
        for m in self.modes:
            base = m.c * cmath.exp(-m.k * x + m.Lam * a)
            t += base * np.array([(-m.k) ** j / factorial(j) for j in range(order + 1)])
        return Jet(t)

    def __call__(self, x: float, a: int) -> complex:
        return sum(m.c * cmath.exp(-m.k * x + m.Lam * a) for m in self.modes)

    def heat_residual(self, x: float, a: int) -> float:
        """|w(a+1) - w(a) - w''(a)| for the nls flow, |w(a+1) - w(a) - w'(a)| for transport."""
        j = self.jet(x, a, 2)
        d = j.deriv(2) if self.flow == "nls" else j.deriv(1)
        return abs(self(x, a + 1) - j.value - d)


class FieldSource:
    """Anything providing jets of u_a(x) and uh_a(x)."""

    def u(self, x: float, a: int) -> Jet:  # pragma: no cover - interface
        raise NotImplementedError

    def uh(self, x: float, a: int) -> Jet:  # pragma: no cover - interface
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantFields(FieldSource):
    """x- and a-independent fields (trivial configurations)."""

    u0: complex = 0.0
    uh0: complex = 0.0

    def u(self, x, a):
        return Jet.const(self.u0, JET_ORDER - 2)

    def uh(self, x, a):
        return Jet.const(self.uh0, JET_ORDER - 2)


@dataclass(frozen=True)
class SemiSolution(FieldSource):
    """Toda-Darboux dressing of a seed mode function."""

    seed: ModeFunction
    g: complex = 1.0

    def __post_init__(self):
        if self.g == 0:
            raise InvalidParam("g must be nonzero")

    def _w(self, x, a):
        w = self.seed.jet(x, a, JET_ORDER)
        if abs(w.value) < EPS_SING:
            raise Singularity(f"seed vanishes at x={x}, a={a}")
        return w

    def u(self, x: float, a: int) -> Jet:
        return self.g / self._w(x, a + 1)

    def uh(self, x: float, a: int) -> Jet:
        w = self._w(x, a)
        w1, w2 = w.dx(), w.dx().dx()
        return -(w * w2 - w1 * w1) / (w * self.g)


def eval_with_derivatives(src: FieldSource, which: str, x: float, a: int, order: int = 3) -> list[complex]:
    """[f, f', ..., f^(order)] for ``which`` in {u, uh} at (x, a)."""
    if which not in ("u", "uh"):
        raise InvalidParam("which must be 'u' or 'uh'")
    j = getattr(src, which)(x, a)
    if order > j.order:
        raise InvalidParam(f"order {order} exceeds available jet order {j.order}")
    return [j.deriv(k) for k in range(order + 1)]


# ---------------------------------------------------------------------------
# composite fields and residuals
# ---------------------------------------------------------------------------
def composite_fields(src: FieldSource, x: float, a: int) -> dict[str, Jet]:
    u, uh = src.u(x, a), src.uh(x, a)
    den = 1 - u * uh
    D = 1 + uh * u
    if abs(den.value) < EPS_SING:
        raise Singularity(f"1 - u uh vanishes at x={x}, a={a}")
    if abs(D.value) < EPS_SING:
        raise Singularity(f"1 + u uh vanishes at x={x}, a={a}")
    B = (uh.dx() - uh * uh * u.dx()) / den
    C = (u * u * uh.dx() - u.dx()) / den
    N2 = (u * B + uh * C) / D
    A = (1 + B * C) / D
    return {"u": u, "uh": uh, "B": B, "C": C, "D": D, "N2": N2, "A": A}


def _nls_residuals(src: FieldSource, x: float, a: int) -> dict[str, float]:
    f = composite_fields(src, x, a)
    u, uh, B, C, D, N2, A = (f[k] for k in ("u", "uh", "B", "C", "D", "N2", "A"))
    u_prev = src.u(x, a - 1).value
    uh_next = src.uh(x, a + 1).value
    v = lambda j: j.value
    return {
        "B_value": abs(v(B) - (uh.deriv(1) + v(N2) * v(uh))),
        "B_flow": abs(B.deriv(1) - (uh_next * v(D) - v(A) * v(uh))),
        "C_value": abs(v(C) - (-u.deriv(1) + v(u) * v(N2))),
        "C_flow": abs(C.deriv(1) - (v(u) * v(A) - v(D) * u_prev)),
        "D_flow": abs(D.deriv(1) - (v(u) * v(B) - v(C) * v(uh))),
        "N2_flow": abs(N2.deriv(1) - (uh_next * v(u) - v(uh) * u_prev)),
        "A_flow": abs(A.deriv(1) - (uh_next * v(C) - v(B) * u_prev)),
    }


def transport_residual(src: FieldSource, x: float, a: int) -> float:
    """|uh_{a+1} - uh_a - uh_a^2 u_a - uh_a'|."""
    uh, u = src.uh(x, a), src.u(x, a)
    return abs(src.uh(x, a + 1).value - uh.value - uh.value ** 2 * u.value - uh.deriv(1))


def v_matrix(src: FieldSource, x: float, a: int, order: int = 2) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """(coefficients, x-derivatives of coefficients) of V in powers of lam, lowest first."""
    if order == 1:
        u, uh = src.u(x, a), src.uh(x, a)
        ents = [[1 + uh * u, uh], [u, Jet.const(1.0, u.order)]]
        lead = np.array([[1, 0], [0, 0]], dtype=complex)
        c0 = np.array([[e.value for e in r] for r in ents])
        d0 = np.array([[e.deriv(1) for e in r] for r in ents])
        return [c0, lead], [d0, np.zeros((2, 2), complex)]
    if order != 2:
        raise InvalidParam("order must be 1 or 2")
    f = composite_fields(src, x, a)
    c0 = [[f["A"], f["B"]], [f["C"], f["D"]]]
    c1 = [[f["N2"], f["uh"]], [f["u"], None]]
    val = lambda m: np.array([[0 if e is None else e.value for e in r] for r in m])
    der = lambda m: np.array([[0 if e is None else e.deriv(1) for e in r] for r in m])
    lead = np.array([[1, 0], [0, 0]], dtype=complex)
    return [val(c0), val(c1), lead], [der(c0), der(c1), np.zeros((2, 2), complex)]


def u_matrix(src: FieldSource, x: float, a: int) -> list[np.ndarray]:
    """U(a) = [[lam, uh_a], [u_{a-1}, 0]] as [U0, U1]."""
    U0 = np.array([[0, src.uh(x, a).value], [src.u(x, a - 1).value, 0]], dtype=complex)
    U1 = np.array([[1, 0], [0, 0]], dtype=complex)
    return [U0, U1]


def _pmul(P, Q):
    out = [np.zeros((2, 2), complex) for _ in range(len(P) + len(Q) - 1)]
    for i, p in enumerate(P):
        for j, q in enumerate(Q):
            out[i + j] = out[i + j] + p @ q
    return out


def zero_curvature_residual(src: FieldSource, x: float, a: int, order: int = 2) -> float:
    V, dV = v_matrix(src, x, a, order)
    rhs = [r - s for r, s in zip(_pmul(u_matrix(src, x, a + 1), V), _pmul(V, u_matrix(src, x, a)))]
    dV = dV + [np.zeros((2, 2), complex)] * (len(rhs) - len(dV))
    return max(float(np.abs(d - r).max()) for d, r in zip(dV, rhs))


def v_determinant(src: FieldSource, x: float, a: int, lam: complex) -> complex:
    V, _ = v_matrix(src, x, a, 2)
    return complex(np.linalg.det(sum(c * lam ** i for i, c in enumerate(V))))


def residual_semidiscrete(src: FieldSource, x: float, a: int, which: str = "nls") -> dict[str, float]:
    """Named residuals at (x, a).

    which: "transport", "nls" (B/C values and flows, D/N2/A flows) or "zero_curvature"
    (keys zc1, zc2 for the order-1 and order-2 V).
    """
    if which == "transport":
        return {"transport": transport_residual(src, x, a)}
    if which == "nls":
        return _nls_residuals(src, x, a)
    if which == "zero_curvature":
        return {"zc1": zero_curvature_residual(src, x, a, 1),
                "zc2": zero_curvature_residual(src, x, a, 2)}
    raise InvalidParam(f"unknown residual family {which!r}")


@dataclass(frozen=True)
class SemiSweep:
    max_residual: float
    site_argmax: tuple[float, int]
    per_check: dict = field(default_factory=dict)


def sweep(src: FieldSource, xs: Iterable[float], As: Iterable[int],
          families: Sequence[str] = ("nls", "zero_curvature")) -> SemiSweep:
    per: dict[str, float] = {}
    worst, arg = 0.0, (0.0, 0)
    xs, As = list(xs), list(As)
    for x in xs:
        for a in As:
            for fam in families:
                for k, r in residual_semidiscrete(src, x, a, fam).items():
                    per[k] = max(per.get(k, 0.0), r)
                    if r > worst:
                        worst, arg = r, (float(x), int(a))
    return SemiSweep(worst, arg, per)


def hamiltonians(src: FieldSource, x: float, a_range: Iterable[int]) -> tuple[complex, complex]:
    """(H1, H2) summed over ``a_range`` at fixed x."""
    h1 = h2 = 0j
    for a in a_range:
        f = composite_fields(src, x, a)
        n2 = f["N2"].value
        h1 += n2
        h2 += f["uh"].value * src.u(x, a - 1).value + f["A"].value - 0.5 * n2 * n2
    return h1, h2


def periodic_modes(M: int, ms: Sequence[int], cs: Sequence[complex]) -> ModeFunction:
    """Modes with e^{Lam M} = 1: Lam = 2 pi i m / M and k = sqrt(e^Lam - 1)."""
    modes = []
    for m, c in zip(ms, cs):
        lam = 2j * np.pi * m / M
        k = cmath.sqrt(cmath.exp(lam) - 1)
        modes.append((c, k, lam))
    return ModeFunction(tuple(modes), "nls")
