"""Constructive case A / case B lattices for residual tests.

Both cases admit a marching scheme once one field is solved for; the
library keeps case C as its only public stepper.
"""
import numpy as np

from dstlattice.al import AlLattice


def _march(prev, other, seed=None):
    # x[n] = (prev[n] - x[n-1]) / (1 - other[n] x[n-1]), x[-1] = seed;
    # seed None picks the fixed point of the Moebius map x[-1] -> x[N-1]
    def run(s):
        out = np.empty(len(prev), dtype=complex)
        cur = s
        for n in range(len(prev)):
            cur = (prev[n] - cur) / (1 - other[n] * cur)
            out[n] = cur
        return out
    if seed is None:
        # compose the 2x2 Moebius matrices [[-1, p], [-o, 1]]
        T = np.eye(2, dtype=complex)
        for p, o in zip(prev, other):
            T = np.array([[-1, p], [-o, 1]]) @ T
        (a, b), (c, d) = T
        # c s^2 + (d - a) s - b = 0
        roots = np.roots([c, d - a, -b]) if abs(c) > 1e-14 else np.array([b / (d - a)])
        seed = roots[np.argmin(np.abs(roots))]
    return run(seed)


def build_case_a(N, M, rng, radius=0.3):
    # state (bh(., a-1), b(., a)) -> bh(., a) by march, b(., a+1) explicit
    BH = np.zeros((N, M), complex)
    B = np.zeros((N, M), complex)
    r = lambda: radius * (rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N))
    BH[:, 0], B[:, 1] = r(), r()
    for a in range(1, M):
        # bh(n,a) = (bh(n,a-1) - bh(n-1,a)) / (1 - b(n,a) bh(n-1,a))
        BH[:, a] = _march(BH[:, a - 1], B[:, a])
        if a + 1 < M:
            Bn1 = np.roll(B[:, a], -1)
            B[:, a + 1] = Bn1 + B[:, a] - Bn1 * BH[:, a] * B[:, a]
    B[:, 0] = r()
    return AlLattice(B, BH)


def build_case_b(N, M, rng, radius=0.3):
    # state (bh(., a-1), b(., a)) -> b(., a+1) by march, bh(., a) explicit
    BH = np.zeros((N, M), complex)
    B = np.zeros((N, M), complex)
    r = lambda: radius * (rng.uniform(-1, 1, N) + 1j * rng.uniform(-1, 1, N))
    BH[:, 0], B[:, 1] = r(), r()
    for a in range(1, M - 1):
        # b(n,a+1) = (b(n,a) - b(n-1,a+1)) / (1 - bh(n,a-1) b(n-1,a+1))
        B[:, a + 1] = _march(B[:, a], BH[:, a - 1])
        bh1 = np.roll(BH[:, a - 1], -1)
        BH[:, a] = bh1 + BH[:, a - 1] - bh1 * B[:, a + 1] * BH[:, a - 1]
    B[:, 0] = r()
    BH[:, M - 1] = r()
    return AlLattice(B, BH)
