import numpy as np
import pytest

from dstlattice.algebra import LAMBDA, LaurentMat, LaurentPoly, approx_zero, lp_arith, mat_arith
from dstlattice.errors import DegenerateEvaluation, ShapeError


def _rand_poly(rng, lo=-2, hi=3):
    return LaurentPoly({k: complex(*rng.normal(size=2)) for k in range(lo, hi + 1)})


def _rand_mat(rng, lo=-1, hi=2):
    return LaurentMat.from_coeffs({k: rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
                                   for k in range(lo, hi + 1)})


def test_poly_product_matches_pointwise(rng):
    a, b = _rand_poly(rng), _rand_poly(rng)
    for t in (0.3 + 0.7j, -1.2, 2j):
        assert (a * b)(t) == pytest.approx(a(t) * b(t), rel=1e-13)
        assert (a + b)(t) == pytest.approx(a(t) + b(t), rel=1e-13)


def test_trailing_zeros_are_trimmed():
    p = LaurentPoly({-3: 0.0, -1: 2.0, 0: 1.0, 4: 0.0})
    assert (p.low, p.high) == (-1, 0)
    assert LaurentPoly({2: 1.0}) - LaurentPoly({2: 1.0}) == 0
    assert LaurentPoly().is_zero()


def test_negative_power_at_zero_raises():
    with pytest.raises(DegenerateEvaluation):
        LaurentPoly({-1: 1.0}).eval(0)
    assert LaurentPoly({0: 3.0, 2: 1.0}).eval(0) == 3


def test_lambda_monomial():
    assert (LAMBDA * LAMBDA).coeffs == {2: 1}
    assert lp_arith(LAMBDA, LaurentPoly(1.0), "add")(2.0) == 3


def test_matrix_product_and_det(rng):
    A, B = _rand_mat(rng), _rand_mat(rng)
    t = 0.4 - 0.9j
    assert np.allclose((A @ B).eval(t), A.eval(t) @ B.eval(t), rtol=1e-13)
    assert (A @ B).det2()(t) == pytest.approx(np.linalg.det(A.eval(t) @ B.eval(t)), rel=1e-12)
    assert A.trace()(t) == pytest.approx(np.trace(A.eval(t)), rel=1e-13)


def test_kron_evaluates_pointwise(rng):
    A, B = _rand_mat(rng, 0, 1), _rand_mat(rng, -1, 0)
    t = 1.1 + 0.2j
    assert np.allclose(mat_arith(A, B, "kron").eval(t), np.kron(A.eval(t), B.eval(t)), rtol=1e-13)


def test_shape_errors():
    with pytest.raises(ShapeError):
        LaurentMat.from_entries([[1, 2], [3]])
    with pytest.raises(ShapeError):
        LaurentMat(0, np.zeros((2, 3, 1)))
    with pytest.raises(ShapeError):
        LaurentMat.identity(3).det2()


def test_approx_zero_scales_tolerance(rng):
    A = _rand_mat(rng)
    diff = (A @ A) - (A @ A)
    assert approx_zero(diff, 1e-14)
    small = LaurentMat.constant(np.full((2, 2), 5e-12))
    assert not approx_zero(small, 1e-12)
    assert approx_zero(small, 1e-12, scale=10.0)
    with pytest.raises(ValueError):
        approx_zero(small, 0.0)


def test_identity_is_neutral(rng):
    A = _rand_mat(rng)
    assert LaurentMat.identity(2) @ A == A
