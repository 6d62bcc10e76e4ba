import cmath

import numpy as np
import pytest

from dstlattice import semidnls
from dstlattice.errors import InvalidDispersion, InvalidParam, Singularity
from dstlattice.semidnls import Jet, ModeFunction, SemiSolution

XS, AS = np.linspace(0.0, 1.0, 4), range(4)


def test_jet_arithmetic_matches_taylor():
    x = Jet([0.5, 1.0, 0, 0, 0, 0, 0])            # 0.5 + h
    r = x.recip()
    assert [r.deriv(k) for k in range(4)] == pytest.approx([2, -4, 16, -96])
    p = x ** 3
    assert p.deriv(1) == pytest.approx(3 * 0.25)
    assert (x * x - x ** 2).value == 0


def test_dispersion_laws():
    assert semidnls.dispersion(0.5) == pytest.approx(cmath.log(1.25))
    assert semidnls.dispersion(0.5, "transport") == pytest.approx(cmath.log(0.5))
    with pytest.raises(InvalidDispersion):
        semidnls.dispersion(1j)
    with pytest.raises(InvalidParam):
        semidnls.dispersion(0.3, "kdv")


def test_mode_function_solves_its_heat_equation():
    for flow in semidnls.FLOWS:
        w = ModeFunction(((1.0, 0.4), (0.3, 0.2 + 0.1j)), flow)
        assert max(w.heat_residual(x, a) for x in XS for a in AS) < 1e-12


def test_wrong_dispersion_is_rejected_or_detected():
    with pytest.raises(InvalidDispersion):
        ModeFunction(((1.0, 0.4, 0.3),))
    bad = SemiSolution(ModeFunction(((1.0, 0.4, 0.3), (0.3, 0.9 + 0.2j)), check=False))
    assert semidnls.sweep(bad, XS, AS, ("nls",)).max_residual > 1e-3


def test_nls_solution_passes_its_checks():
    sol = SemiSolution(ModeFunction(((1.0, 0.4), (0.3, 0.9 + 0.2j))), 0.8 + 0.1j)
    sw = semidnls.sweep(sol, XS, AS, ("nls", "zero_curvature"))
    assert set(semidnls.NLS_CHECKS) <= set(sw.per_check)
    assert max(sw.per_check[k] for k in semidnls.NLS_CHECKS + ("zc2",)) < 1e-8
    assert sw.per_check["zc1"] > 1e-3       # order-1 V generates the transport flow


def test_transport_solution_passes_transport_checks():
    sol = SemiSolution(ModeFunction(((1.0, 0.4), (0.3, 0.2 + 0.1j)), "transport"))
    sw = semidnls.sweep(sol, XS, AS, ("transport", "zero_curvature"))
    assert max(sw.per_check["transport"], sw.per_check["zc1"]) < 1e-8


def test_trivial_fields():
    src = semidnls.ConstantFields(0.0, 0.0)
    assert semidnls.sweep(src, XS, AS).max_residual < 1e-14


def test_periodic_modes_conserve_hamiltonians():
    M = 5
    seed = semidnls.periodic_modes(M, [0, 1, 2], [1.0, 0.2, 0.1 - 0.05j])
    sol = SemiSolution(seed)
    H = [semidnls.hamiltonians(sol, x, range(M)) for x in np.linspace(0, 0.8, 5)]
    drift = max(abs(h[i] - H[0][i]) for h in H for i in (0, 1))
    assert drift < 1e-8
    # a non-periodic window does not conserve them
    H2 = [semidnls.hamiltonians(sol, x, range(M - 1)) for x in (0.0, 0.8)]
    assert abs(H2[1][0] - H2[0][0]) > 1e-6


def test_v_determinant_is_x_independent():
    sol = SemiSolution(ModeFunction(((1.0, 0.4), (0.3, 0.9 + 0.2j))))
    vals = [semidnls.v_determinant(sol, x, 2, 0.7 + 0.3j) for x in XS]
    assert max(abs(v - vals[0]) for v in vals) < 1e-9


def test_derivative_access_and_errors():
    sol = SemiSolution(ModeFunction(((1.0, 0.4),)))
    d = semidnls.eval_with_derivatives(sol, "u", 0.3, 1, 2)
    assert len(d) == 3
    with pytest.raises(InvalidParam):
        semidnls.eval_with_derivatives(sol, "v", 0.3, 1)
    with pytest.raises(InvalidParam):
        semidnls.residual_semidiscrete(sol, 0.3, 1, "kdv")
    with pytest.raises(InvalidParam):
        SemiSolution(ModeFunction(((1.0, 0.4),)), 0.0)
    vanishing = SemiSolution(ModeFunction(((1.0, 0.0), (-1.0, 0.0))))
    with pytest.raises(Singularity):
        vanishing.u(0.0, 0)
