from fractions import Fraction

import pytest

from dstlattice import ncalg, poisson
from dstlattice.errors import InvalidParam, NonInvertiblePower, NotDivisible, UnknownGenerator
from dstlattice.ncalg import Coef, GaussQ, RuleSet


def test_gaussian_rationals_are_exact():
    a = GaussQ(Fraction(1, 3), 2)
    assert a * (GaussQ(1) / a) == GaussQ(1)
    assert ncalg.I * ncalg.I == GaussQ(-1)
    assert complex(a) == pytest.approx(1 / 3 + 2j)


def test_weyl_normal_ordering():
    R = ncalg.weyl_rules()
    X, Y = R.gens("X", "Y")
    assert ncalg.nc_commutator(X, Y) == R.scalar(1)
    # Y^2 X^2 = X^2 Y^2 - 4 X Y + 2
    lhs = ncalg.nc_normalize(R, [("Y", 2), ("X", 2)])
    assert lhs == X * X * Y * Y - 4 * X * Y + 2


def test_q_pairs_and_inverses():
    R = RuleSet(("a", "b"), invertible=("a", "b"), qpairs={("a", "b"): Coef.param(2)})
    a, b = R.gens("a", "b")
    q2 = R.param_poly(2)
    assert b * a == q2 * a * b
    assert a * R.gen("a", -1) == R.scalar(1)


def test_rule_errors():
    with pytest.raises(InvalidParam):
        RuleSet(("a", "a"))
    with pytest.raises(InvalidParam):
        RuleSet(("a", "b"), weyl={("b", "a"): 1})
    with pytest.raises(UnknownGenerator):
        ncalg.weyl_rules().gen("Z")
    with pytest.raises(NonInvertiblePower):
        ncalg.weyl_rules().gen("X", -1)


def test_exact_division():
    R = ncalg.weyl_rules()
    X, Y = R.gens("X", "Y")
    d = 1 + X * Y
    p = d * (X + 3)
    assert ncalg.left_divide(d, p) == X + 3
    assert ncalg.right_divide(d, (Y - 2) * d) == Y - 2
    with pytest.raises(NotDivisible):
        ncalg.left_divide(X, Y)


def test_rtt_and_quantum_determinants():
    l1, l2 = ncalg.build_l1_weyl(), ncalg.build_l2_diffrep()
    assert ncalg.check_rtt_nc(l1) == []
    assert ncalg.check_rtt_nc(l2) == []
    q1 = ncalg.check_qdet_nc(l1, {0: 1, 1: 1})
    q2 = ncalg.check_qdet_nc(l2, {1: -1, 2: 1})
    assert q1.passed and q2.passed
    assert not ncalg.check_qdet_nc(l1, {0: 2, 1: 1}).passed


def test_shift_only_moves_the_determinant():
    # a constant shift is a shift of lambda, invisible to the difference-form R
    l0 = ncalg.build_l1_weyl(N_shift=0)
    assert ncalg.check_rtt_nc(l0) == []
    assert not ncalg.check_qdet_nc(l0, {0: 1, 1: 1}).passed


def test_rescaled_weyl_constant_breaks_rtt():
    R = RuleSet(("X", "Y"), weyl={("X", "Y"): -2})
    assert ncalg.check_rtt_nc(ncalg.build_l1_weyl(rules=R))


def test_nonzero_a0_is_not_representable():
    with pytest.raises(NotDivisible):
        ncalg.diffrep_fields(a0=1)


def test_relation_sets():
    assert all(r.passed for r in ncalg.check_relations("time_fields"))
    assert all(r.passed for r in ncalg.check_relations("exchange_corrected"))
    assert all(r.passed for r in ncalg.check_relations("qboson_symbolic"))
    failing = {r.name for r in ncalg.check_relations("exchange") if not r.passed}
    assert failing == {"[C,D]=-Y N2", "[B,D]=N2 X"}
    with pytest.raises(InvalidParam):
        ncalg.check_relations("nope")


POINT = {"f": 0.7 + 0.2j, "g": -0.4 + 0.9j, "x": 0.3 - 0.5j, "dx": 1.1 + 0.1j,
         "y": -0.6 + 0.2j, "dy": 0.25 - 0.8j}


@pytest.mark.parametrize("pair", [("Y", "B"), ("X", "C"), ("B", "C"), ("X", "Y")])
def test_semiclassical_limit_matches_classical_bracket(pair):
    F = ncalg.diffrep_fields(rules=ncalg.diffrep_rules(hbar=True))
    d = F.as_dict()
    got = ncalg.semiclassical_bracket(d[pair[0]], d[pair[1]]).evaluate(POINT)
    vals = {k: d[k].evaluate(POINT) for k in ("X", "Y", "B", "C")}
    want = poisson.TABLES["dnls_V2"].bracket_expr(*pair)(vals)
    assert got == pytest.approx(want, abs=1e-12)


def test_semiclassical_point_relabels():
    F = ncalg.diffrep_fields()
    p = poisson.semiclassical_point(F, POINT)
    assert set(p) == {"uh", "u", "B", "C"}
    assert p["uh"] == pytest.approx(POINT["f"] * POINT["x"])
