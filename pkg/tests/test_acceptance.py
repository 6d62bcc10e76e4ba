"""Acceptance criteria AC1-AC9, one test each, with a one-line verdict.

Each test records its verdict in ``conftest.ACCEPTANCE`` and prints it, so
``pytest -v`` ends with an "acceptance criteria" section listing every
criterion.  Literal readings that turned out to be false are kept as strict
xfails next to the criterion they belong to.
"""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE
from dstlattice import al, dnls, ncalg, poisson, qboson, rmatrix, semidnls


def verdict(key, ok, msg):
    ACCEPTANCE[key] = (bool(ok), msg)
    print(f"{key} {'PASS' if ok else 'FAIL'}  {msg}")
    assert ok, msg


def test_ac1_yang_baxter_suite():
    t0 = time.perf_counter()
    worst = {}
    for tag in rmatrix.KINDS:
        worst[tag] = rmatrix.ybe_sweep(tag, samples=100, seed=1)[0]
    dt = time.perf_counter() - t0
    ok = max(worst.values()) < 1e-11 and dt < 1.0
    verdict("AC1", ok, f"max YBE residual {max(worst.values()):.1e} over 5 kinds x 100 pairs, {dt:.2f}s")


def _soliton_lattices():
    return {"I": dnls.soliton("I", 12, 12), "II": dnls.soliton("II", 12, 12)}


def test_ac2_fully_discrete_solitons():
    t0 = time.perf_counter()
    worst = 0.0
    for lat in _soliton_lattices().values():
        eq = dnls.sweep_equations(lat)
        zc = dnls.sweep_zero_curvature(lat)
        worst = max(worst, eq.max_residual, zc.max_residual)
    rng = np.random.default_rng(2)
    neg = []
    for _ in range(5):
        X = 0.4 * (rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
        Y = 0.4 * (rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12)))
        neg.append(dnls.sweep_equations(dnls.DnlsLattice(X, Y)).max_residual)
    dt = time.perf_counter() - t0
    ok = worst < 1e-9 and min(neg) > 1e-3 and dt < 1.0
    verdict("AC2", ok, f"solitons I/II residual {worst:.1e}; random lattices >= {min(neg):.1e}; {dt:.2f}s")


def _random_modes(rng, S=3):
    modes = []
    while len(modes) < S:
        xi = 1 + 0.5 * rng.uniform() * np.exp(2j * np.pi * rng.uniform())
        c = rng.uniform(0.3, 1.0) * np.exp(2j * np.pi * rng.uniform())
        modes.append((c, xi))
    return modes


def test_ac3_toda_darboux_generality():
    rng = np.random.default_rng(3)
    worst, used = 0.0, 0
    while used < 20:
        modes = _random_modes(rng)
        p = dnls.TodaParams(*(rng.uniform(0.5, 1.5, 2) * np.exp(1j * rng.uniform(-1, 1, 2))))
        try:
            # random modes are not periodic in n: judge the sites away from the wrap
            lat = dnls.toda_darboux(dnls.heat_field(modes), p, 10, 8)
            r = dnls.sweep_equations(lat, open_space=True).max_residual
        except dnls.Singularity:
            continue
        worst = max(worst, r)
        used += 1
    # canonical mode choices against the closed forms
    N = M = 12
    xi, eta, eps = np.exp(2j * np.pi / N), np.exp(2j * np.pi / N), np.exp(-2j * np.pi / N)
    lat1 = dnls.toda_darboux(dnls.heat_field([(1.0, xi), (1.0, 1.0)]), dnls.TodaParams(), N, M)
    ref1 = dnls.soliton("I", N, M, xi=xi, c1=1.0, c2=1.0)
    lat2 = dnls.toda_darboux(dnls.heat_field([(1.0, eta), (0.5, eps)]), dnls.TodaParams(), N, M)
    ref2 = dnls.soliton("II", N, M, eta=eta, eps=eps, c1=1.0, c2=0.5)
    closed = max(np.abs(lat1.X - ref1.X).max(), np.abs(lat1.Y - ref1.Y).max(),
                 np.abs(lat2.X - ref2.X).max(), np.abs(lat2.Y - ref2.Y).max())
    ok = worst < 1e-8 and closed < 1e-12
    verdict("AC3", ok, f"20 random 3-mode inputs: residual {worst:.1e}; closed forms match to {closed:.1e}")


def test_ac4_conservation():
    rng = np.random.default_rng(4)
    lams = list(rng.uniform(-1.5, 1.5, 5) + 1j * rng.uniform(-1.5, 1.5, 5))
    d_dnls = max(dnls.trace_drift(lat, lams) for lat in _soliton_lattices().values())
    d_al = 0.0
    for seed in range(5):
        lat = al.random_case_c(6, 6, seed)
        zs = [np.exp(l) for l in lams]
        d_al = max(d_al, al.trace_drift(lat, zs, "C"),
                   al.charge_drift(lat, "HS+", "C"), al.charge_drift(lat, "HS-", "C"))
    ok = d_dnls < 1e-9 and d_al < 1e-9
    verdict("AC4", ok, f"DNLS trace drift {d_dnls:.1e}; AL trace and HS+- drift {d_al:.1e}")


def test_ac5_al_stepper_and_mkdv():
    worst = 0.0
    for seed in range(20):
        rng = np.random.default_rng(seed)
        draw = lambda k: 0.3 * (rng.uniform(-1, 1, k) + 1j * rng.uniform(-1, 1, k))
        lat, _ = al.evolve_case_c(draw(8), draw(8), 8, draw(7))
        worst = max(worst, al.sweep(lat, "C", full=False, skip_wrap=True).max_residual)
    rng = np.random.default_rng(55)
    mk = 0.0
    for _ in range(100):
        bh = 0.5 * (rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5)))
        lat = al.AlLattice(np.zeros((5, 5)), bh)
        mk = max(mk, al.mkdv_check(lat, 2, 2)[1])
    ok = worst < 1e-13 and mk < 1e-12
    verdict("AC5", ok, f"case-C stepper residual {worst:.1e} on 20 seeds; mKdV identity {mk:.1e}")


def _semi_grid():
    return np.linspace(0.0, 1.0, 5), range(5)


def test_ac6_semi_discrete():
    xs, As = _semi_grid()
    nls = semidnls.SemiSolution(semidnls.ModeFunction(((1.0, 0.4), (0.3, 0.9 + 0.2j))), 1.0)
    sw = semidnls.sweep(nls, xs, As, ("nls", "zero_curvature"))
    nls_worst = max(sw.per_check[k] for k in semidnls.NLS_CHECKS + ("zc2",))
    tr = semidnls.SemiSolution(semidnls.ModeFunction(((1.0, 0.4), (0.3, 0.2 + 0.1j)), "transport"), 1.0)
    sw_t = semidnls.sweep(tr, xs, As, ("transport", "zero_curvature"))
    tr_worst = max(sw_t.per_check["transport"], sw_t.per_check["zc1"])
    bad = semidnls.SemiSolution(semidnls.ModeFunction(((1.0, 0.4, 0.3), (0.3, 0.9 + 0.2j)),
                                                      check=False), 1.0)
    wrong = semidnls.sweep(bad, xs, As, ("nls",)).max_residual
    ok = nls_worst < 1e-8 and tr_worst < 1e-8 and wrong > 1e-3
    verdict("AC6", ok, f"semi-discrete NLS equations, zc2 {nls_worst:.1e}; transport, zc1 on transport modes "
                       f"{tr_worst:.1e}; wrong dispersion {wrong:.1e}")


@pytest.mark.xfail(strict=True, reason="transport and the order-1 zero curvature need "
                                        "Lam = ln(1-k); with Lam = ln(k^2+1) they fail")
def test_ac6_transport_on_nls_dispersion_modes():
    xs, As = _semi_grid()
    nls = semidnls.SemiSolution(semidnls.ModeFunction(((1.0, 0.4), (0.3, 0.9 + 0.2j))), 1.0)
    sw = semidnls.sweep(nls, xs, As, ("transport", "zero_curvature"))
    assert max(sw.per_check["transport"], sw.per_check["zc1"]) < 1e-8


def test_ac7_quantum_exact_suite():
    l1, l2 = ncalg.build_l1_weyl(), ncalg.build_l2_diffrep()
    rtt = not ncalg.check_rtt_nc(l1) and not ncalg.check_rtt_nc(l2)
    q1 = ncalg.check_qdet_nc(l1, {0: 1, 1: 1})
    q2 = ncalg.check_qdet_nc(l2, {1: -1, 2: 1})
    rels = ncalg.check_relations("time_fields") + ncalg.check_relations("exchange")
    literal_bad = {r.name for r in rels if not r.passed}
    corrected = ncalg.check_relations("exchange_corrected")
    exchange_ok = literal_bad == {"[C,D]=-Y N2", "[B,D]=N2 X"} and all(r.passed for r in corrected)
    ok = rtt and q1.passed and q2.passed and exchange_ok
    verdict("AC7", ok, f"RTT exact for L1, L2; qdet f = {q1.f} and {q2.f}; "
                       f"{len(rels) - len(literal_bad)}/{len(rels)} literal relations exact, "
                       f"the 2 D-relations hold in corrected form")


@pytest.mark.xfail(strict=True, reason="[C,D] and [B,D] normalize to -Y D and D X, not -Y N2 and N2 X")
def test_ac7_literal_exchange_list_all_zero():
    assert all(r.passed for r in ncalg.check_relations("exchange"))


def test_ac8_qboson_suite():
    t0 = time.perf_counter()
    worst = {}
    for p in range(3, 9):
        for k, v in qboson.qboson_suite(p, draws=20, seed=p).items():
            worst[k] = max(worst.get(k, 0.0), v)
    dt = time.perf_counter() - t0
    gates = {"algebra": 1e-13, "rtt": 1e-11, "gauge": 1e-11, "coproduct": 1e-12, "coproduct_rtt": 1e-11}
    ok = all(worst[k] < g for k, g in gates.items()) and dt < 5.0
    verdict("AC8", ok, ", ".join(f"{k} {worst[k]:.1e}" for k in gates) + f"; p=3..8, {dt:.2f}s")


def test_ac9_poisson_suite():
    sk = {w: poisson.check_matrix_bracket(w, samples=50, seed=9)[0] for w in poisson.CASES}
    jac = {t: poisson.jacobi_residual(poisson.TABLES[t], seed=9) for t in poisson.TABLES}
    inv = max(poisson.transfer_involution(w, s, 0.3 + 0.2j, -0.7 + 0.4j, seed=9)
              for w in poisson.INVOLUTION for s in (2, 3))
    ok = max(sk.values()) < 1e-9 and max(jac.values()) < 1e-11 and inv < 1e-9
    verdict("AC9", ok, f"{len(sk)} Sklyanin checks {max(sk.values()):.1e}; Jacobi {max(jac.values()):.1e}; "
                       f"involution N=2,3 {inv:.1e}")
