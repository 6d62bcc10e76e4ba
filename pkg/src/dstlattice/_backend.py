"""Select the compiled kernels when built, else the pure-Python ones.

Set ``DSTLATTICE_PURE=1`` to force the fallback.
"""
import os

if os.environ.get("DSTLATTICE_PURE"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _ckernels as kernels
    except ImportError:  # extension not built
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND
march_beta = kernels.march_beta
dnls_sweep = kernels.dnls_sweep
