import numpy as np
import pytest

from dstlattice import rmatrix
from dstlattice.errors import DegenerateEvaluation, InvalidParam


@pytest.mark.parametrize("tag", rmatrix.KINDS)
def test_yang_baxter_holds(tag):
    worst, _ = rmatrix.ybe_sweep(tag, samples=40, seed=7)
    assert worst < 1e-11


def test_alternating_sign_breaks_cybe():
    r = rmatrix.cybe_residual_of(rmatrix.al_classical_alternating, 0.3 + 0.4j, -0.8 + 0.1j)
    assert r > 1e-2


@pytest.mark.parametrize("tag", rmatrix.CLASSICAL)
def test_classical_unitarity(tag):
    kind = rmatrix.default_kind(tag)
    for lam in (0.3 + 0.5j, -0.7 + 0.2j):
        lhs = rmatrix.P @ rmatrix.make_r(kind, lam) @ rmatrix.P
        assert np.allclose(lhs, -rmatrix.make_r(kind, -lam), atol=1e-13)


def test_yangian_is_lambda_plus_permutation():
    R = rmatrix.make_r("yangian_quantum", 0.5)
    assert np.allclose(R, 0.5 * np.eye(4) + rmatrix.P)


def test_embed_13_acts_on_outer_factors(rng):
    a, b, c = (rng.normal(size=(2, 2)) for _ in range(3))
    r = np.kron(a, b)
    got = rmatrix.embed(r, (0, 2)) @ np.kron(np.kron(np.eye(2), c), np.eye(2))
    want = np.kron(np.kron(a, c), b)
    assert np.allclose(got, want)


def test_poles_and_bad_kinds():
    with pytest.raises(DegenerateEvaluation):
        rmatrix.make_r("rational_classical", 0.0)
    with pytest.raises(DegenerateEvaluation):
        rmatrix.al_classical(0.0)
    with pytest.raises(InvalidParam):
        rmatrix.RMatrixKind("nope")
    with pytest.raises(InvalidParam):
        rmatrix.RMatrixKind("xxz_quantum", 0.0)
    with pytest.raises(InvalidParam):
        rmatrix.check_qybe("rational_classical", 0.2, 0.5)


def test_sweep_is_seeded():
    assert rmatrix.ybe_sweep("xxz_quantum", 10, seed=3) == rmatrix.ybe_sweep("xxz_quantum", 10, seed=3)
