"""Pointwise checks of the classical Poisson structures.

A function of the generators (an ``Expr``) is any Python callable taking a
mapping name -> value and using only + - * / and integer powers.  Evaluated on
dual numbers that carry a full gradient it yields every partial derivative in
one pass; brackets then follow from the Leibniz rule

    {F, G} = sum_ij {g_i, g_j} dF/dg_i dG/dg_j.

Sklyanin identities {M(l) (x), M(m)} = [r(l - m), M(l) (x) M(m)] are tested at
random points with the r-matrix pole cleared.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import InvalidParam, Singularity
from .rmatrix import P, al_classical

EPS_DENOM = 0.1
Expr = Callable[[Mapping[str, object]], object]


# ---------------------------------------------------------------------------
# forward-mode AD
# ---------------------------------------------------------------------------
class Dual:
    """Value plus gradient vector; enough arithmetic for rational functions."""

    __slots__ = ("v", "g")

    def __init__(self, v, g):
        self.v = complex(v)
        self.g = g

    def __add__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v + o.v, self.g + o.g)
        return Dual(self.v + o, self.g)

    __radd__ = __add__

    def __sub__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v - o.v, self.g - o.g)
        return Dual(self.v - o, self.g)

    def __rsub__(self, o):
        return Dual(o - self.v, -self.g)

    def __neg__(self):
        return Dual(-self.v, -self.g)

    def __mul__(self, o):
        if isinstance(o, Dual):
            return Dual(self.v * o.v, self.g * o.v + o.g * self.v)
        return Dual(self.v * o, self.g * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Dual):
            if abs(o.v) < EPS_DENOM:
                raise Singularity(f"denominator {o.v:.3g} below {EPS_DENOM}")
            return Dual(self.v / o.v, (self.g * o.v - o.g * self.v) / (o.v * o.v))
        return Dual(self.v / o, self.g / o)

    def __rtruediv__(self, o):
        if abs(self.v) < EPS_DENOM:
            raise Singularity(f"denominator {self.v:.3g} below {EPS_DENOM}")
        return Dual(o / self.v, -o * self.g / (self.v * self.v))

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)):
            raise InvalidParam("only integer powers are supported")
        if n < 0:
            return 1 / (self ** (-n))
        out = Dual(1, np.zeros_like(self.g))
        for _ in range(n):
            out = out * self
        return out


def seed_point(names: Sequence[str], point: Mapping[str, complex]) -> dict[str, Dual]:
    n = len(names)
    return {k: Dual(point[k], np.eye(n, dtype=complex)[i]) for i, k in enumerate(names)}


def gradient(F: Expr, names: Sequence[str], point: Mapping[str, complex]) -> tuple[complex, np.ndarray]:
    out = F(seed_point(names, point))
    if not isinstance(out, Dual):  # constant expression
        return complex(out), np.zeros(len(names), dtype=complex)
    return out.v, out.g


# ---------------------------------------------------------------------------
# bracket tables
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BracketTable:
    """Antisymmetric generator brackets; undeclared pairs Poisson-commute."""

    name: str
    names: tuple[str, ...]
    brackets: Mapping[tuple[str, str], Expr]

    def omega(self, point: Mapping[str, complex]) -> np.ndarray:
        n = len(self.names)
        idx = {k: i for i, k in enumerate(self.names)}
        W = np.zeros((n, n), dtype=complex)
        for (a, b), f in self.brackets.items():
            v = complex(f(point))
            W[idx[a], idx[b]] += v
            W[idx[b], idx[a]] -= v
        return W

    def copies(self, count: int) -> "BracketTable":
        """Independent per-site copies g -> g@k with vanishing cross brackets."""
        names = tuple(f"{g}@{k}" for k in range(count) for g in self.names)
        br = {}
        for k in range(count):
            for (a, b), f in self.brackets.items():
                br[(f"{a}@{k}", f"{b}@{k}")] = _relabel(f, self.names, k)
        return BracketTable(f"{self.name}x{count}", names, br)

    def bracket_expr(self, a: str, b: str) -> Expr:
        """{a, b} as an Expr (for the Jacobi identity)."""
        if (a, b) in self.brackets:
            return self.brackets[(a, b)]
        if (b, a) in self.brackets:
            f = self.brackets[(b, a)]
            return lambda e: -f(e)
        return lambda e: 0.0


def _relabel(f: Expr, names, k) -> Expr:
    return lambda e: f({g: e[f"{g}@{k}"] for g in names})


def poisson_bracket(F: Expr, G: Expr, table: BracketTable, point: Mapping[str, complex]) -> complex:
    _, dF = gradient(F, table.names, point)
    _, dG = gradient(G, table.names, point)
    return complex(dF @ table.omega(point) @ dG)


def _dnls_time_brackets(x, y):
    """dnls_V2 with X, Y renamed (also used for the semi-discrete u-hat, u)."""
    return {
        (y, "B"): lambda e: 1 + e[x] * e[y],
        (x, "C"): lambda e: -(1 + e[x] * e[y]),
        ("B", "C"): lambda e: -(e[y] * e["B"] + e[x] * e["C"]),
    }


TABLES: dict[str, BracketTable] = {
    # space-like DNLS: {X_n, Y_{n,a-1}} = -1
    "dnls_L": BracketTable("dnls_L", ("X", "Y"), {("X", "Y"): lambda e: -1.0}),
    # time-like transport / semi-discrete: {u, uh} = 1 with uh playing X, u playing Y
    "dnls_V1": BracketTable("dnls_V1", ("X", "Y"), {("Y", "X"): lambda e: 1.0}),
    "dnls_V2": BracketTable("dnls_V2", ("X", "Y", "B", "C"), _dnls_time_brackets("X", "Y")),
    "semi_V2": BracketTable("semi_V2", ("uh", "u", "B", "C"), _dnls_time_brackets("uh", "u")),
    "al_L": BracketTable("al_L", ("b", "bh"), {("b", "bh"): lambda e: 1 - e["b"] * e["bh"]}),
    "al_V": BracketTable("al_V", ("B", "Bh"), {("B", "Bh"): lambda e: 1 - e["B"] * e["Bh"]}),
}


# ---------------------------------------------------------------------------
# Lax matrices as functions of the generators
# ---------------------------------------------------------------------------
LaxExpr = Callable[[Mapping[str, object], complex], list]


def _lax_dnls_L(theta: complex = 0.7) -> LaxExpr:
    return lambda e, lam: [[lam + theta + e["X"] * e["Y"], e["X"]], [e["Y"], 1.0]]


def _lax_v1(x, y) -> LaxExpr:
    return lambda e, lam: [[lam + 1 + e[x] * e[y], e[x]], [e[y], 1.0]]


def _lax_v2(x, y) -> LaxExpr:
    def f(e, lam):
        X, Y, B, C = e[x], e[y], e["B"], e["C"]
        D = 1 + X * Y
        N2 = (Y * B + X * C) / D
        A = (1 + B * C) / D
        return [[lam * lam + lam * N2 + A, lam * X + B], [lam * Y + C, D]]
    return f


def _lax_al_L(e, z):
    return [[z, e["bh"]], [e["b"], 1 / z]]


def _al_A(e):
    return -1 + e["Bh"] * e["B"]


def _lax_al_vminus(e, z):
    return [[z, e["Bh"]], [e["B"], -z * _al_A(e) + 1 / z]]


def _lax_al_vplus(e, z):
    return [[z - _al_A(e) / z, e["Bh"]], [e["B"], 1 / z]]


@dataclass(frozen=True)
class MatrixCase:
    lax: LaxExpr
    table: str
    trig: bool


CASES: dict[str, MatrixCase] = {
    "L_dnls": MatrixCase(_lax_dnls_L(), "dnls_L", False),
    "V1_dnls": MatrixCase(_lax_v1("X", "Y"), "dnls_V1", False),
    "V2_dnls": MatrixCase(_lax_v2("X", "Y"), "dnls_V2", False),
    "L_al": MatrixCase(_lax_al_L, "al_L", True),
    "Vminus_al": MatrixCase(_lax_al_vminus, "al_V", True),
    "Vplus_al": MatrixCase(_lax_al_vplus, "al_V", True),
    "V1_semi": MatrixCase(_lax_v1("X", "Y"), "dnls_V1", False),
    "V2_semi": MatrixCase(_lax_v2("uh", "u"), "semi_V2", False),
}


def r_cleared(lam: complex, mu: complex, trig: bool) -> tuple[np.ndarray, complex]:
    """(numerator matrix, scalar denominator) of r(lam - mu)."""
    d = lam - mu
    if not trig:
        return P.astype(complex), d
    den = 2 * np.sinh(d)
    return al_classical(d) * den, den


def _entry_grads(lax: LaxExpr, names, point, spectral):
    env = seed_point(names, point)
    M = lax(env, spectral)
    vals = np.zeros((2, 2), dtype=complex)
    grads = np.zeros((2, 2, len(names)), dtype=complex)
    for i in range(2):
        for j in range(2):
            m = M[i][j]
            if isinstance(m, Dual):
                vals[i, j], grads[i, j] = m.v, m.g
            else:
                vals[i, j] = m
    return vals, grads


def sklyanin_residual(lax: LaxExpr, table: BracketTable, point, lam, mu, trig: bool) -> float:
    """max | den * {M(lam) (x), M(mu)} - [num, M(lam) (x) M(mu)] | over the 16 entries."""
    lam_arg = np.exp(lam) if trig else lam
    mu_arg = np.exp(mu) if trig else mu
    Ml, Gl = _entry_grads(lax, table.names, point, lam_arg)
    Mm, Gm = _entry_grads(lax, table.names, point, mu_arg)
    W = table.omega(point)
    # {M_ij(lam), M_kl(mu)} sits at row (i,k), column (j,l)
    br = np.einsum("ija,ab,klb->ikjl", Gl, W, Gm).reshape(4, 4)
    num, den = r_cleared(lam, mu, trig)
    MM = np.kron(Ml, Mm)
    return float(np.abs(den * br - (num @ MM - MM @ num)).max())


def random_point(names: Sequence[str], rng: np.random.Generator, scale: float = 0.6) -> dict[str, complex]:
    return {k: complex(rng.normal(0, scale), rng.normal(0, scale)) for k in names}


def _spectral_pair(rng, trig: bool):
    while True:
        lam = complex(rng.normal(0, 0.7), rng.normal(0, 0.7))
        mu = complex(rng.normal(0, 0.7), rng.normal(0, 0.7))
        if abs(lam - mu) > 0.2:
            return lam, mu


def _admissible(case: MatrixCase, table: BracketTable, rng, tries: int = 100):
    for _ in range(tries):
        pt = random_point(table.names, rng)
        try:
            case.lax(seed_point(table.names, pt), 1.0)
        except Singularity:
            continue
        return pt
    raise Singularity("no admissible point found")


def check_matrix_bracket(which: str, samples: int = 50, seed: int = 0) -> tuple[float, int]:
    """Max Sklyanin residual over seeded random points, and the worst sample index."""
    if which not in CASES:
        raise InvalidParam(f"unknown matrix bracket {which!r}; choose from {sorted(CASES)}")
    case = CASES[which]
    table = TABLES[case.table]
    rng = np.random.default_rng(seed)
    worst, arg = 0.0, -1
    for s in range(samples):
        pt = _admissible(case, table, rng)
        lam, mu = _spectral_pair(rng, case.trig)
        r = sklyanin_residual(case.lax, table, pt, lam, mu, case.trig)
        if which == "V2_semi":
            r = max(r, *basic_v2_residuals(table, pt).values())
        if r > worst:
            worst, arg = r, s
    return worst, arg


def basic_v2_residuals(table: BracketTable, point) -> dict[str, float]:
    """Brackets of the lambda-coefficients Y1, Y0 of V2 against their matrix forms.

    {Y1 (x) Y1} = P(D (x) Y1 - Y1 (x) D), {Y1 (x) Y0} = P(D (x) Y0 - Y0 (x) D),
    {Y0 (x) Y0} = P(Y1 (x) Y0 - Y0 (x) Y1), with D = diag(1, 0).
    """
    lax = CASES["V2_semi"].lax
    names = table.names

    def coeffs(env):
        # V2 is quadratic in lambda: sample at 0, 1, -1
        m0, m1, mm = lax(env, 0.0), lax(env, 1.0), lax(env, -1.0)
        Y0 = m0
        Y1 = [[(m1[i][j] - mm[i][j]) * 0.5 for j in range(2)] for i in range(2)]
        return Y1, Y0

    env = seed_point(names, point)
    Y1d, Y0d = coeffs(env)
    W = table.omega(point)

    def split(M):
        v = np.array([[m.v if isinstance(m, Dual) else m for m in row] for row in M], dtype=complex)
        g = np.array([[m.g if isinstance(m, Dual) else np.zeros(len(names)) for m in row] for row in M])
        return v, g

    Y1, G1 = split(Y1d)
    Y0, G0 = split(Y0d)
    D = np.diag([1.0, 0.0]).astype(complex)

    def br(Ga, Gb):
        return np.einsum("ija,ab,klb->ikjl", Ga, W, Gb).reshape(4, 4)

    kr = np.kron
    return {
        "v2_lead_lead": float(np.abs(br(G1, G1) - P @ (kr(D, Y1) - kr(Y1, D))).max()),
        "v2_lead_const": float(np.abs(br(G1, G0) - P @ (kr(D, Y0) - kr(Y0, D))).max()),
        "v2_const_const": float(np.abs(br(G0, G0) - P @ (kr(Y1, Y0) - kr(Y0, Y1))).max()),
    }


# ---------------------------------------------------------------------------
# Jacobi and involution
# ---------------------------------------------------------------------------
def jacobi_residual(table: BracketTable, samples: int = 20, seed: int = 0) -> float:
    """max over generator triples of |{a,{b,c}} + {b,{c,a}} + {c,{a,b}}|."""
    rng = np.random.default_rng(seed)
    names = table.names
    worst = 0.0
    for _ in range(samples):
        pt = random_point(names, rng)
        for i, a in enumerate(names):
            for j, b in enumerate(names):
                for c in names[j + 1:]:
                    tot = 0j
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        tot += poisson_bracket(lambda e, x=x: e[x], table.bracket_expr(y, z), table, pt)
                    worst = max(worst, abs(tot))
    return worst


INVOLUTION = {"L_dnls": "L_dnls", "V2_dnls": "V2_dnls", "L_al": "L_al",
              "Vminus_al": "Vminus_al", "Vplus_al": "Vplus_al", "V1_dnls": "V1_dnls"}


def transfer_involution(which: str, sites: int, lam: complex, mu: complex, samples: int = 10,
                        seed: int = 0, flip_last_site: bool = False) -> float:
    """max |{tr T(lam), tr T(mu)}| for T = M_sites ... M_1 on independent site copies.

    ``flip_last_site`` reverses the bracket sign on the last site only, which
    breaks the Sklyanin structure of the product (negative control).
    """
    if which not in INVOLUTION:
        raise InvalidParam(f"unknown chain {which!r}")
    if sites not in (2, 3):
        raise InvalidParam("sites must be 2 or 3")
    case = CASES[which]
    base = TABLES[case.table]
    table = base.copies(sites)
    if flip_last_site:
        last = f"@{sites - 1}"
        table = BracketTable(table.name, table.names, {
            k: ((lambda f: (lambda e: -f(e)))(f) if k[0].endswith(last) else f)
            for k, f in table.brackets.items()})
    rng = np.random.default_rng(seed)
    la = np.exp(lam) if case.trig else lam
    ma = np.exp(mu) if case.trig else mu

    def trace(spectral):
        def f(env):
            T = None
            for k in range(sites):
                M = case.lax({g: env[f"{g}@{k}"] for g in base.names}, spectral)
                T = M if T is None else [[M[i][0] * T[0][j] + M[i][1] * T[1][j] for j in range(2)]
                                         for i in range(2)]
            return T[0][0] + T[1][1]
        return f

    worst = 0.0
    for _ in range(samples):
        pt = None
        for _ in range(100):
            cand = random_point(table.names, rng)
            try:
                trace(1.0)(seed_point(table.names, cand))
            except Singularity:
                continue
            pt = cand
            break
        if pt is None:
            raise Singularity("no admissible point found")
        worst = max(worst, abs(poisson_bracket(trace(la), trace(ma), table, pt)))
    return worst


def semiclassical_point(F, point: Mapping[str, complex]) -> dict[str, complex]:
    """Values of the DNLS time fields (uh, u, B, C) for a diffrep point (f, g, x, dx, y, dy)."""
    vals = {k: F.as_dict()[k].evaluate(point) for k in ("X", "Y", "B", "C")}
    return {"uh": vals["X"], "u": vals["Y"], "B": vals["B"], "C": vals["C"]}
