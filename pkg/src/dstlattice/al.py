"""Fully discrete Ablowitz-Ladik lattice: Lax pairs A/B/C, steppers, charges.

Field placement per case (z is the multiplicative spectral parameter):

    case A   L  = [[z, bh(n,a-1)], [b(n,a), 1/z]]
             V- = [[z, bh(n-1,a)], [b(n,a), -z Am + 1/z]],  Am = -1 + b(n,a) bh(n-1,a)
    case B   L  as in A
             V+ = [[z - Ap/z, bh(n,a-1)], [b(n-1,a+1), 1/z]],  Ap = -1 + bh(n,a-1) b(n-1,a+1)
    case C   L+ = [[z - Ah/z, bh(n,a)], [b(n,a-1), 1/z]],  Ah = -1 + bh(n,a) b(n,a-1)
             V- as in A

Zero curvature is V(n+1,a) L(n,a) = L(n,a+1) V(n,a).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from . import _backend
from .algebra import LaurentMat, LaurentPoly
from .errors import InvalidParam, ShapeError, Singularity

EPS_SING = 1e-8
CASES = ("A", "B", "C")
CHARGES = ("HS+", "HS-", "HT+", "HT-")

# (A) first equation and (B) first equation combine into the mKdV-type
# equation as  AB = MKDV_COEFFS[0] * A1 + MKDV_COEFFS[1] * B1  once b is
# replaced by the time-shifted bh.  Fit by mkdv_oracle() and frozen here.
MKDV_COEFFS = (-0.5, 0.5)

_Z = LaurentPoly.monomial(1)
_ZI = LaurentPoly.monomial(-1)


def _case(case: str) -> str:
    c = str(case).upper()
    if c not in CASES:
        raise InvalidParam(f"case must be one of A, B, C (got {case!r})")
    return c


class ShiftedView:
    """Read-only index view ``view(n, a) = grid[n, a + shift]`` (periodic).

    Case B renames b(n,a+1) as gamma(n,a-1); this keeps that renaming an
    index shift rather than a second array.
    """

    __slots__ = ("_grid", "shift")

    def __init__(self, grid: np.ndarray, shift: int):
        self._grid = grid
        self.shift = shift

    def __call__(self, n: int, a: int) -> complex:
        N, M = self._grid.shape
        return complex(self._grid[n % N, (a + self.shift) % M])


@dataclass(frozen=True, eq=False)
class AlLattice:
    """Periodic N x M configuration of the AL fields b (beta) and bh (beta-hat)."""

    beta: np.ndarray
    beta_hat: np.ndarray

    def __post_init__(self):
        b = np.array(self.beta, dtype=complex)
        bh = np.array(self.beta_hat, dtype=complex)
        if b.ndim != 2 or b.shape != bh.shape:
            raise ShapeError("beta and beta_hat must be equal-shape 2-d grids")
        if b.shape[0] < 3 or b.shape[1] < 3:
            raise ShapeError("AL lattice needs N >= 3 and M >= 3")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(bh))):
            raise InvalidParam("non-finite field values")
        b.flags.writeable = False
        bh.flags.writeable = False
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "beta_hat", bh)

    @property
    def N(self) -> int:
        return self.beta.shape[0]

    @property
    def M(self) -> int:
        return self.beta.shape[1]

    def b(self, n: int, a: int) -> complex:
        return complex(self.beta[n % self.N, a % self.M])

    def bh(self, n: int, a: int) -> complex:
        return complex(self.beta_hat[n % self.N, a % self.M])

    @property
    def gamma(self) -> ShiftedView:
        """gamma(n, a) = b(n, a + 2)."""
        return ShiftedView(self.beta, 2)

    @classmethod
    def zeros(cls, N: int, M: int) -> "AlLattice":
        return cls(np.zeros((N, M)), np.zeros((N, M)))


# ---------------------------------------------------------------------------
# Lax pairs
# ---------------------------------------------------------------------------
def _L_plain(bh_up, b_dn) -> LaurentMat:
    return LaurentMat.from_entries([[_Z, bh_up], [b_dn, _ZI]])


def _L_plus(bh_up, b_dn) -> LaurentMat:
    A = -1 + bh_up * b_dn
    return LaurentMat.from_entries([[_Z - _ZI * A, bh_up], [b_dn, _ZI]])


def _V_minus(bh_up, b_dn) -> LaurentMat:
    A = -1 + b_dn * bh_up
    return LaurentMat.from_entries([[_Z, bh_up], [b_dn, _ZI - _Z * A]])


def _V_plus(bh_up, b_dn) -> LaurentMat:
    A = -1 + bh_up * b_dn
    return LaurentMat.from_entries([[_Z - _ZI * A, bh_up], [b_dn, _ZI]])


def build_L(lat: AlLattice, n: int, a: int, case: str = "A") -> LaurentMat:
    if _case(case) == "C":
        return _L_plus(lat.bh(n, a), lat.b(n, a - 1))
    return _L_plain(lat.bh(n, a - 1), lat.b(n, a))


def build_V(lat: AlLattice, n: int, a: int, case: str = "A") -> LaurentMat:
    if _case(case) == "B":
        g = lat.gamma
        return _V_plus(lat.bh(n, a - 1), g(n - 1, a - 1))
    return _V_minus(lat.bh(n - 1, a), lat.b(n, a))


def build_al_laxpair(lat: AlLattice, n: int, a: int, case: str = "A") -> tuple[LaurentMat, LaurentMat]:
    return build_L(lat, n, a, case), build_V(lat, n, a, case)


def zero_curvature(lat: AlLattice, n: int, a: int, case: str = "A") -> LaurentMat:
    return (build_V(lat, n + 1, a, case) @ build_L(lat, n, a, case)
            - build_L(lat, n, a + 1, case) @ build_V(lat, n, a, case))


# ---------------------------------------------------------------------------
# residuals
# ---------------------------------------------------------------------------
def _site_equations(lat: AlLattice, n: int, a: int, case: str) -> tuple[complex, complex]:
    b, bh = lat.b, lat.bh
    if case == "A":
        rh = bh(n, a - 1) - bh(n - 1, a) - bh(n, a) + bh(n, a) * b(n, a) * bh(n - 1, a)
        rb = b(n, a + 1) - b(n + 1, a) - b(n, a) + b(n + 1, a) * bh(n, a) * b(n, a)
    elif case == "B":
        g = lat.gamma
        rh = bh(n, a) - bh(n + 1, a - 1) - bh(n, a - 1) + bh(n + 1, a - 1) * g(n, a - 1) * bh(n, a - 1)
        rb = g(n, a - 2) - g(n - 1, a - 1) - g(n, a - 1) + g(n, a - 1) * bh(n, a - 1) * g(n - 1, a - 1)
    else:
        rh = bh(n, a + 1) + bh(n - 1, a) - bh(n, a) - bh(n - 1, a) * b(n, a) * bh(n, a + 1)
        rb = b(n + 1, a) + b(n, a - 1) - b(n, a) - b(n + 1, a) * bh(n, a) * b(n, a - 1)
    return rh, rb


def residual_al(lat: AlLattice, n: int, a: int, case: str = "A") -> tuple[float, float, float]:
    """(r_bh, r_b, r_full): the two scalar equations and the full 2x2 residual."""
    case = _case(case)
    rh, rb = _site_equations(lat, n, a, case)
    return abs(rh), abs(rb), zero_curvature(lat, n, a, case).max_abs()


def _sh(F, dn=0, da=0):
    return np.roll(F, (-dn, -da), axis=(0, 1))


def equation_grids(lat: AlLattice, case: str = "A") -> tuple[np.ndarray, np.ndarray]:
    """Absolute residual grids of both scalar equations at every (n, a)."""
    case = _case(case)
    b, bh = lat.beta, lat.beta_hat
    if case == "A":
        rh = _sh(bh, 0, -1) - _sh(bh, -1, 0) - bh + bh * b * _sh(bh, -1, 0)
        rb = _sh(b, 0, 1) - _sh(b, 1, 0) - b + _sh(b, 1, 0) * bh * b
    elif case == "B":
        bh1, bhm = _sh(bh, 1, -1), _sh(bh, 0, -1)
        b1, bs = _sh(b, 0, 1), _sh(b, -1, 1)
        rh = bh - bh1 - bhm + bh1 * b1 * bhm
        rb = b - bs - b1 + b1 * bhm * bs
    else:
        bha, bhs = _sh(bh, 0, 1), _sh(bh, -1, 0)
        bn, bt = _sh(b, 1, 0), _sh(b, 0, -1)
        rh = bha + bhs - bh - bhs * b * bha
        rb = bn + bt - b - bn * bh * bt
    return np.abs(rh), np.abs(rb)


def valid_rows(M: int, case: str, time_periodic: bool = False) -> range:
    """Time indices a at which every field a residual touches lies in 0..M-1."""
    if time_periodic:
        return range(M)
    _case(case)
    return range(1, M - 1)


@dataclass(frozen=True)
class AlSweep:
    check: str
    max_residual: float
    site_argmax: tuple[int, int]
    per_check: dict


def sweep(lat: AlLattice, case: str = "A", time_periodic: bool = False, full: bool = True,
          skip_wrap: bool = False) -> AlSweep:
    """Worst residual over admissible sites.

    ``skip_wrap`` drops n = N-1, the one site whose equations close the
    spatial period; use it for lattices marched from a non-periodic seed.
    """
    case = _case(case)
    rh, rb = equation_grids(lat, case)
    rows = list(valid_rows(lat.M, case, time_periodic))
    cols = range(lat.N - 1) if skip_wrap else range(lat.N)
    grids = {"r_bh": rh, "r_b": rb}
    if full:
        rf = np.zeros_like(rh)
        for n in cols:
            for a in rows:
                rf[n, a] = zero_curvature(lat, n, a, case).max_abs()
        grids["r_full"] = rf
    mask = np.zeros(rh.shape, dtype=bool)
    mask[:, rows] = True
    if skip_wrap:
        mask[-1, :] = False
    per, worst, arg = {}, -1.0, (0, 0)
    for k, g in grids.items():
        gm = np.where(mask, g, 0.0)
        idx = np.unravel_index(int(np.argmax(gm)), gm.shape)
        per[k] = float(gm[idx])
        if per[k] > worst:
            worst, arg = per[k], (int(idx[0]), int(idx[1]))
    return AlSweep(f"al_{case}", max(worst, 0.0), arg, per)


# ---------------------------------------------------------------------------
# case C stepper
# ---------------------------------------------------------------------------
def step_bh(bh_now: np.ndarray, b_now: np.ndarray) -> np.ndarray:
    """bh(n,a+1) = (bh(n,a) - bh(n-1,a)) / (1 - bh(n-1,a) b(n,a))."""
    bh_prev = np.roll(bh_now, 1)
    den = 1 - bh_prev * b_now
    bad = np.abs(den) < EPS_SING
    if np.any(bad):
        raise Singularity(f"1 - bh(n-1,a) b(n,a) vanishes at n={int(np.argmax(bad))}")
    return (bh_now - bh_prev) / den


def periodic_seed(b_prev: np.ndarray, bh_now: np.ndarray) -> complex:
    """Seed b(0,a) making the spatial march close up after N sites.

    The march is affine, b(N) = P b(0) + Q, so the fixed point is Q/(1-P).
    """
    q = _march(b_prev, bh_now, 0.0)[-1]
    p = _march(b_prev, bh_now, 1.0)[-1] - q
    if abs(1 - p) < EPS_SING:
        raise Singularity("spatial march has no periodic seed (multiplier 1)")
    return complex(q / (1 - p))


def _march(b_prev, bh_now, seed):
    try:
        return _backend.march_beta(b_prev, bh_now, complex(seed), EPS_SING)
    except ZeroDivisionError as exc:
        raise Singularity(f"1 - bh(n,a) b(n,a-1) vanishes at n={exc.args[0]}") from None


@dataclass(frozen=True)
class CaseCStep:
    beta_hat_next: np.ndarray   # bh(., a+1)
    beta_next: np.ndarray       # b(., a+1)
    closure: float              # |b(N, a+1) - b(0, a+1)| from the march


def step_case_c(bh_now, b_now, seed: complex | None = None) -> CaseCStep:
    """Advance one time slice: (bh(.,a), b(.,a)) -> (bh(.,a+1), b(.,a+1)).

    bh is explicit; b(., a+1) is marched in n from ``seed`` = b(0, a+1),
    or from the periodic fixed point when ``seed`` is None.
    """
    bh_now = np.asarray(bh_now, dtype=complex)
    b_now = np.asarray(b_now, dtype=complex)
    bh_next = step_bh(bh_now, b_now)
    if seed is None:
        seed = periodic_seed(b_now, bh_next)
    col = _march(b_now, bh_next, seed)
    return CaseCStep(bh_next, col[:-1].copy(), float(abs(col[-1] - col[0])))


def evolve_case_c(bh0, b0, M: int, seeds: Iterable[complex] | None = None) -> tuple[AlLattice, float]:
    """Case-C evolution over M time slices from (bh(.,0), b(.,0)).

    Returns the lattice and the worst closure residual of the spatial march.
    """
    bh0 = np.asarray(bh0, dtype=complex)
    b0 = np.asarray(b0, dtype=complex)
    if bh0.shape != b0.shape or bh0.ndim != 1:
        raise ShapeError("initial slices must be equal-length vectors")
    N = len(bh0)
    seeds = list(seeds) if seeds is not None else [None] * (M - 1)
    if len(seeds) < M - 1:
        raise InvalidParam(f"need {M - 1} seeds, got {len(seeds)}")
    BH = np.zeros((N, M), dtype=complex)
    B = np.zeros((N, M), dtype=complex)
    BH[:, 0], B[:, 0] = bh0, b0
    closure = 0.0
    for a in range(M - 1):
        st = step_case_c(BH[:, a], B[:, a], seeds[a])
        BH[:, a + 1], B[:, a + 1] = st.beta_hat_next, st.beta_next
        closure = max(closure, st.closure)
    return AlLattice(B, BH), closure


def random_case_c(N: int, M: int, seed: int = 0, radius: float = 0.5,
                  bound: float = 20.0, tries: int = 200) -> AlLattice:
    """Spatially periodic case-C solution from random initial slices.

    The periodic march acts like a discrete antiderivative in n, so fields
    can grow quickly in a; draws whose fields exceed ``bound`` are rejected
    to keep absolute residual checks meaningful.
    """
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        bh0, b0 = (radius * (rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N)) for _ in range(2))
        try:
            lat, _ = evolve_case_c(bh0, b0, M)
        except Singularity:
            continue
        if max(np.abs(lat.beta).max(), np.abs(lat.beta_hat).max()) <= bound:
            return lat
    raise Singularity(f"no bounded case-C evolution found in {tries} draws")


# ---------------------------------------------------------------------------
# mKdV-type reduction
# ---------------------------------------------------------------------------
def _mkdv_parts(u, v, w, s):
    """u=bh(n,a), v=bh(n,a-1), w=bh(n+1,a-1), s=bh(n-1,a).

    Returns (AB, A1, B1) with b replaced by time-shifted bh.
    """
    ab = u - v - 0.5 * (1 - u * v) * (w - s)
    a1 = v - s - u + u * v * s
    b1 = u - w - v + w * u * v
    return ab, a1, b1


def mkdv_oracle(samples: int = 64, seed: int = 0) -> np.ndarray:
    """Least-squares fit of AB as a combination of (A1, B1) on random points."""
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(samples, 4)) + 1j * rng.normal(size=(samples, 4))
    rows = np.array([_mkdv_parts(*p) for p in pts])
    coef, *_ = np.linalg.lstsq(rows[:, 1:], rows[:, 0], rcond=None)
    return coef


def mkdv_check(fields: AlLattice, n: int, a: int) -> tuple[float, float]:
    """(r_AB, r_identity) at a site; r_identity uses the frozen coefficients."""
    bh = fields.bh
    ab, a1, b1 = _mkdv_parts(bh(n, a), bh(n, a - 1), bh(n + 1, a - 1), bh(n - 1, a))
    ca, cb = MKDV_COEFFS
    return abs(ab), abs(ab - (ca * a1 + cb * b1))


# ---------------------------------------------------------------------------
# conserved quantities
# ---------------------------------------------------------------------------
def _space_pairs(lat: AlLattice, a: int, case: str):
    """(bh_n, b_n) as they sit in the case's L at time a."""
    n = np.arange(lat.N)
    if case == "C":
        return lat.beta_hat[n, a % lat.M], lat.beta[n, (a - 1) % lat.M]
    return lat.beta_hat[n, (a - 1) % lat.M], lat.beta[n, a % lat.M]


def _time_pairs(lat: AlLattice, n: int, case: str):
    """(Bh_a, B_a) as they sit in the case's V at space index n."""
    a = np.arange(lat.M)
    if case == "B":
        return lat.beta_hat[n % lat.N, (a - 1) % lat.M], lat.beta[(n - 1) % lat.N, (a + 1) % lat.M]
    return lat.beta_hat[(n - 1) % lat.N, a], lat.beta[n % lat.N, a]


def conserved_charges(lat: AlLattice, kind: str, index: int, case: str = "A") -> complex:
    """HS+/HS- at time ``index`` or HT+/HT- at space ``index``.

    HS+ = sum bh_{n+1} b_n,  HS- = sum b_{n+1} bh_n,
    HT+ = sum (Bh_{a+1} B_a - Bh_a B_a),  HT- = sum (Bh_a B_{a+1} - Bh_a B_a),
    with the fields placed as in the case's L (space) or V (time).
    For case C the z^(N-2) trace coefficient also carries -sum bh_n b_n; it is
    included so that HS+ is the conserved combination (constant N dropped).
    The z^(2-N) coefficient of the case-C trace has no short closed form, so
    case-C HS- is read off the exact transfer matrix.
    """
    case = _case(case)
    if kind in ("HS+", "HS-"):
        bh, b = _space_pairs(lat, index, case)
        if kind == "HS+":
            val = np.sum(np.roll(bh, -1) * b)
            if case == "C":
                val -= np.sum(bh * b)
        elif case == "C":
            val = transfer_matrix(lat, index, case).trace().coeff(2 - lat.N)
        else:
            val = np.sum(np.roll(b, -1) * bh)
        return complex(val)
    if kind in ("HT+", "HT-"):
        Bh, B = _time_pairs(lat, index, case)
        if kind == "HT+":
            return complex(np.sum(np.roll(Bh, -1) * B - Bh * B))
        return complex(np.sum(Bh * np.roll(B, -1) - Bh * B))
    raise InvalidParam(f"unknown charge {kind!r}; expected one of {CHARGES}")


def transfer_matrix(lat: AlLattice, a: int, case: str = "A") -> LaurentMat:
    """Exact L(N-1,a) ... L(0,a) as a Laurent matrix in z."""
    T = LaurentMat.identity(2)
    for n in range(lat.N):
        T = build_L(lat, n, a, case) @ T
    return T


def al_transfer_trace(lat: AlLattice, a: int, z: complex, case: str = "A") -> complex:
    case = _case(case)
    if z == 0:
        raise InvalidParam("z must be nonzero")
    T = np.eye(2, dtype=complex)
    zi = 1 / z
    for n in range(lat.N):
        if case == "C":
            bh, b = lat.bh(n, a), lat.b(n, a - 1)
            L = np.array([[z - zi * (-1 + bh * b), bh], [b, zi]])
        else:
            L = np.array([[z, lat.bh(n, a - 1)], [lat.b(n, a), zi]])
        T = L @ T
    return complex(np.trace(T))


def trace_drift(lat: AlLattice, zs: Iterable[complex], case: str = "C") -> float:
    """max |tr T(a+1) - tr T(a)| over z and the time rows where L is defined."""
    _case(case)
    rows = range(1, lat.M)  # L(n, a) reads the fields at a-1
    worst = 0.0
    for z in zs:
        tr = [al_transfer_trace(lat, a, z, case) for a in rows]
        worst = max(worst, max(abs(t1 - t0) for t0, t1 in zip(tr, tr[1:])))
    return worst


def charge_drift(lat: AlLattice, kind: str = "HS+", case: str = "C") -> float:
    _case(case)
    rows = range(1, lat.M)
    vals = [conserved_charges(lat, kind, a, case) for a in rows]
    return max(abs(v1 - v0) for v0, v1 in zip(vals, vals[1:]))
