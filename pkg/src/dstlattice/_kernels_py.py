"""Pure-Python/numpy versions of the hot kernels.

Used when the compiled ``_ckernels`` extension is unavailable; the two
implementations are interchangeable and are cross-checked in the tests.
"""
from __future__ import annotations

import numpy as np

BACKEND = "python"


def march_beta(b_prev, bh, seed: complex, eps: float = 1e-8):
    """b[n+1] = (b[n] - b_prev[n]) / (1 - bh[n] b_prev[n]) for n = 0..N-1.

    Returns N+1 values; the last one is the wrapped value used for closure.
    Raises ZeroDivisionError on a guarded denominator, with the site index.
    """
    N = len(b_prev)
    out = np.empty(N + 1, dtype=complex)
    out[0] = seed
    cur = complex(seed)
    for n in range(N):
        bp = complex(b_prev[n])
        den = 1.0 - complex(bh[n]) * bp
        if abs(den) < eps:
            raise ZeroDivisionError(n)
        cur = (cur - bp) / den
        out[n + 1] = cur
    return out


def dnls_sweep(X, Y, theta: complex, a_lo: int, a_hi: int, eps: float = 1e-8):
    """Per-site max residual of the eight site equations and of V2 zero curvature.

    Returns (eq, zc): arrays of shape (N, M) with zeros outside [a_lo, a_hi).
    Periodic in n, and in a through modular indexing.
    """
    from .dnls import DnlsLattice, equation_residuals, lattice_fields, zero_curvature_residuals, GATED

    lat = DnlsLattice(X, Y, theta, time_periodic=True)
    mask = np.zeros(X.shape, dtype=bool)
    mask[:, a_lo:a_hi] = True
    f = lattice_fields(lat, mask)
    res = equation_residuals(lat, f)
    eq = np.max(np.stack([res[k] for k in GATED]), axis=0)
    zc = zero_curvature_residuals(lat, 2, f)
    eq[~mask] = 0.0
    zc[~mask] = 0.0
    return eq, zc
