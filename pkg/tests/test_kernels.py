import os
import subprocess
import sys

import numpy as np
import pytest

from dstlattice import _backend, _kernels_py, dnls
from dstlattice.errors import Singularity

try:
    from dstlattice import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def _random_lattice(rng, n=10):
    z = lambda: 0.3 * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
    return dnls.DnlsLattice(z(), z())


@needs_ext
def test_sweep_backends_agree(rng):
    for lat in (dnls.soliton("I", 12, 12), _random_lattice(rng)):
        args = (lat.X, lat.Y, 1.0 + 0j, 1, lat.M - 1, 1e-8)
        e_c, z_c = _ckernels.dnls_sweep(*args)
        e_p, z_p = _kernels_py.dnls_sweep(*args)
        scale = max(1.0, np.abs(e_p).max(), np.abs(z_p).max())
        assert np.abs(e_c - e_p).max() / scale < 1e-12
        assert np.abs(z_c - z_p).max() / scale < 1e-12


@needs_ext
def test_march_backends_agree(rng):
    b = 0.3 * (rng.normal(size=40) + 1j * rng.normal(size=40))
    bh = 0.3 * (rng.normal(size=40) + 1j * rng.normal(size=40))
    assert np.array_equal(_ckernels.march_beta(b, bh, 0.1 + 0j), _kernels_py.march_beta(b, bh, 0.1 + 0j))


@pytest.mark.parametrize("mod", [_kernels_py, pytest.param(_ckernels, marks=needs_ext)])
def test_march_reports_singular_site(mod):
    b = np.array([0.5, 2.0, 0.1], dtype=complex)
    bh = np.array([0.0, 0.5, 0.0], dtype=complex)
    with pytest.raises(ZeroDivisionError) as exc:
        mod.march_beta(b, bh, 0.3 + 0j)
    assert exc.value.args[0] == 1


def test_kernel_sweep_matches_reference_sweeps():
    lat = dnls.soliton("II", 12, 12)
    eq, zc = dnls.kernel_sweep(lat)
    assert eq.max_residual == pytest.approx(dnls.sweep_equations(lat).max_residual, abs=1e-13)
    assert zc.max_residual == pytest.approx(dnls.sweep_zero_curvature(lat).max_residual, abs=1e-13)


def test_kernel_sweep_singularity():
    X = np.full((6, 6), 0.2 + 0j)
    Y = np.full((6, 6), 0.1 + 0j)
    X[3, 2], Y[2, 2] = 1.0, 1.0
    with pytest.raises(Singularity):
        dnls.kernel_sweep(dnls.DnlsLattice(X, Y))


def test_pure_env_forces_fallback():
    env = dict(os.environ, DSTLATTICE_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import dstlattice; print(dstlattice.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_default_backend_prefers_extension():
    if os.environ.get("DSTLATTICE_PURE"):
        pytest.skip("fallback forced")
    assert _backend.BACKEND == ("cython" if _ckernels is not None else "python")
