import numpy as np
import pytest

from dstlattice import qboson
from dstlattice.errors import InvalidParam

Z1, Z2 = 1.3 + 0.2j, 0.7 - 0.4j


@pytest.mark.parametrize("p", [3, 4, 7])
def test_cyclic_pair_and_algebra(p):
    rep = qboson.cyclic_rep(p, 0.8 + 0.3j, 1.1 - 0.2j)
    assert np.allclose(rep.X @ rep.Y, rep.q ** 2 * rep.Y @ rep.X)
    assert max(qboson.check_qboson_algebra(rep).values()) < 1e-13


def test_algebra_at_wrong_q_fails():
    rep = qboson.cyclic_rep(5, 0.9, 1.2)
    assert max(qboson.check_qboson_algebra(rep, q=rep.q * np.exp(0.1j)).values()) > 1e-3


def test_q_must_be_a_root_of_unity():
    assert qboson.exchange_residual(5, np.exp(0.3j)) > 1e-3
    with pytest.raises(InvalidParam):
        qboson.cyclic_rep(5, q=np.exp(0.3j))
    with pytest.raises(InvalidParam):
        qboson.cyclic_rep(2)
    with pytest.raises(InvalidParam):
        qboson.cyclic_rep(4, xi=0)


@pytest.mark.parametrize("which", qboson.LAXES)
def test_twisted_rtt(which):
    rep = qboson.cyclic_rep(4, 0.7 + 0.4j, 1.3)
    assert qboson.check_rtt_rep(which, rep, Z1, Z2) < 1e-11


@pytest.mark.parametrize("which", ["Lminus", "Lplus"])
def test_wrong_sign_of_A_breaks_rtt(which):
    rep = qboson.cyclic_rep(4, 0.7 + 0.4j, 1.3)
    bad = qboson.lax_operator(rep, which, A_sign=+1.0)
    assert qboson.check_rtt_rep(bad, rep, Z1, Z2) > 1e-3


def test_gauge_needs_q_to_the_p_equal_one():
    p = 5
    good = qboson.cyclic_rep(p, 0.9 + 0.2j, 0.8, q=np.exp(2j * np.pi / p))
    assert max(qboson.gauge_check(good, Z1, Z2).values()) < 1e-11
    half = qboson.cyclic_rep(p, 0.9 + 0.2j, 0.8)          # q = e^{i pi/p}, q^p = -1
    assert qboson.gauge_check(half, Z1, Z2)["bh_V"] > 1e-3


@pytest.mark.parametrize("which", qboson.COPRODUCTS)
def test_coproducts(which):
    rep = qboson.cyclic_rep(4, 0.9 - 0.3j, 1.2 + 0.1j, q=1j)
    res = qboson.coproduct_check(rep, which)
    assert res.pop("rtt_doubled") < 1e-11
    assert max(res.values()) < 1e-12


def test_coproduct_without_sigma_z_differs():
    rep = qboson.cyclic_rep(4, 0.9, 1.1, q=1j)
    fn = qboson.lax_operator(rep, "Lminus")
    with_s = qboson.z_coefficients(qboson.coproduct_lax(fn, 4), 0, 1)[1]
    without = qboson.z_coefficients(qboson.coproduct_lax(fn, 4, sigma_z=False), 0, 1)[1]
    assert np.abs(with_s - without).max() > 1e-3


def test_interpolation_recovers_laurent_coefficients():
    f = lambda z: [[np.array([[2 * z ** 2 - 1 / z]])]]
    c = qboson.z_coefficients(f, 0, 0)
    assert c[2][0, 0] == pytest.approx(2) and c[-1][0, 0] == pytest.approx(-1)
    assert abs(c[0][0, 0]) < 1e-14


def test_suite_is_seeded():
    a = qboson.qboson_suite(3, draws=3, seed=1)
    assert a == qboson.qboson_suite(3, draws=3, seed=1)
    assert set(a) == {"algebra", "rtt", "gauge", "coproduct", "coproduct_rtt"}


def test_unknown_names():
    rep = qboson.cyclic_rep(3)
    with pytest.raises(InvalidParam):
        qboson.lax_operator(rep, "Lzero")
    with pytest.raises(InvalidParam):
        qboson.coproduct_check(rep, "L")
