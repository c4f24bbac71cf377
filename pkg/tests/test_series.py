from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from pantograph.series import (TruncSeries, solve_R, dlogR_dt, tabc_series,
                               alpha_count, boundary_gf, funnel_block,
                               tight_annulus, quad_xy, identity_suite,
                               QUAD, GENERAL)

N = 4


def small_series(order=3, degrees=(2, 4)):
    coeff = st.integers(-3, 3).map(Fraction)
    tpoly = st.dictionaries(st.integers(-1, 3), coeff, max_size=3)
    gexp = st.tuples(st.integers(0, order), st.integers(0, order))
    return st.dictionaries(gexp, tpoly, max_size=4).map(
        lambda c: TruncSeries(order, degrees, c))


@given(small_series(), small_series(), small_series())
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a - a == TruncSeries.zero(a.order, a.degrees)


@given(small_series(), small_series())
def test_derivation(a, b):
    assert (a * b).dt() == a.dt() * b + a * b.dt()


@given(small_series())
def test_inverse(a):
    s = TruncSeries.t_power(a.order, a.degrees, 1) + \
        a * TruncSeries.g_var(a.order, a.degrees, 2)
    one = TruncSeries.t_power(a.order, a.degrees, 0, 1)
    assert s * s.inverse() == one


def test_R_quadrangulation_coefficients():
    # R for quadrangulations: R = t + 3 g R^2 has Catalan-like data;
    # [g^n] R at t=1 is 3^n Cat(n) / (n+1)... check small orders directly
    R = solve_R(5, QUAD)
    vals = [R.t_poly((n,)) for n in range(4)]
    assert vals[0] == {1: Fraction(1)}
    assert vals[1] == {2: Fraction(3)}
    assert vals[2] == {3: Fraction(18)}
    assert vals[3] == {4: Fraction(135)}


def test_R_general_first_order():
    R = solve_R(2, GENERAL)
    # [g_2] R = t, [g_4] R = 3 t^2, [g_6] R = 10 t^3, [g_8] R = 35 t^4
    for d in GENERAL:
        k = d // 2
        gexp = tuple(1 if dd == d else 0 for dd in GENERAL)
        assert R.t_poly(gexp) == {k: Fraction(comb(2 * k - 1, k))}


def test_alpha_count_values():
    assert [alpha_count(x) for x in range(1, 7)] == [1, 2, 6, 12, 30, 60]


def test_tabc_nonnegative_and_integral():
    T = tabc_series(2, 2, 2, N)
    for g, te, num, den in T.rows():
        assert den == 1 and num >= 0


def test_funnel_and_annulus_guards():
    with pytest.raises(ValueError):
        funnel_block(2, 4, N)
    with pytest.raises(ValueError):
        tight_annulus(0, N)
    with pytest.raises(ValueError):
        tabc_series(1, 1, 1, N)


def test_quad_xy_low_orders():
    x, X, Y = quad_xy(4)
    assert x.t_poly((0,)) == {}
    assert x.t_poly((1,)) == {1: Fraction(1)}
    assert X.t_poly((0,)) == {1: Fraction(1)}
    assert Y.t_poly((0,)) == {1: Fraction(1)}


def test_identity_suite_passes():
    report = identity_suite(N, quad_N=6)
    assert report, "empty identity report"
    failed = [name for name, ok in report if not ok]
    assert not failed, failed
