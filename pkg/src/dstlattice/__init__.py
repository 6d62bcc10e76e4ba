"""Discrete space-time integrable lattices.

Submodules:

- ``algebra``: Laurent polynomials and 2x2 Laurent matrices
- ``rmatrix``: classical and quantum r-matrices, Yang-Baxter residuals
- ``dnls``: fully discrete NLS lattice, solitons, Darboux maps, time stepping
- ``semidnls``: semi-discrete-time NLS on Taylor jets
- ``al``: fully discrete Ablowitz-Ladik lattice (cases A, B, C)
- ``ncalg``: exact noncommutative normal ordering and RTT checks
- ``qboson``: cyclic q-boson representation, gauge and coproduct checks
- ``poisson``: Poisson brackets by forward-mode AD, Sklyanin checks
- ``cli``: command-line front end
"""
from . import al, algebra, dnls, errors, ncalg, poisson, qboson, rmatrix, semidnls
from ._backend import BACKEND
from .errors import LatticeError

__version__ = "0.1.0"

__all__ = ["al", "algebra", "dnls", "errors", "ncalg", "poisson", "qboson", "rmatrix",
           "semidnls", "BACKEND", "LatticeError", "__version__"]
