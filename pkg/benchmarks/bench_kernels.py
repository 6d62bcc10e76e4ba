"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--sizes 16,64,256] [--repeat 5]

Both backends are imported directly, so the extension must be built.
"""
import argparse
import timeit

import numpy as np

from dstlattice import _kernels_py as py
from dstlattice import dnls

try:
    from dstlattice import _ckernels as c
except ImportError:  # pragma: no cover
    c = None


def _lattice(n, rng):
    return dnls.soliton("I", n, n, c2=0.5) if n <= 32 else dnls.DnlsLattice(
        0.3 * rng.normal(size=(n, n)) + 0.3j * rng.normal(size=(n, n)),
        0.3 * rng.normal(size=(n, n)) + 0.3j * rng.normal(size=(n, n)))


def bench(sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        lat = _lattice(n, rng)
        b = 0.3 * rng.normal(size=n * n) + 0j
        bh = 0.3 * rng.normal(size=n * n) + 0j
        for name, mod in (("python", py), ("cython", c)):
            if mod is None:
                continue
            t_sweep = min(timeit.repeat(lambda: mod.dnls_sweep(lat.X, lat.Y, 1.0, 1, n - 1),
                                        number=1, repeat=repeat))
            t_march = min(timeit.repeat(lambda: mod.march_beta(b, bh, 0.1), number=1, repeat=repeat))
            rows.append((n, name, t_sweep, t_march))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="16,64,256")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    rows = bench(sizes, args.repeat)
    print(f"{'N':>5} {'backend':>8} {'dnls_sweep [ms]':>16} {'march_beta(N^2) [ms]':>21}")
    for n, name, ts, tm in rows:
        print(f"{n:>5} {name:>8} {1e3 * ts:>16.3f} {1e3 * tm:>21.3f}")
    if c is not None:
        by = {(n, k): (ts, tm) for n, k, ts, tm in rows}
        for n in sizes:
            s = [by[(n, "python")][i] / by[(n, "cython")][i] for i in (0, 1)]
            print(f"speedup N={n}: sweep x{s[0]:.1f}, march x{s[1]:.1f}")


if __name__ == "__main__":
    main()
