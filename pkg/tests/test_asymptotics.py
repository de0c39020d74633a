from fractions import Fraction
from math import comb, isqrt

import pytest
from hypothesis import given, strategies as st

from qwalks.asymptotics import (
    alpha, alpha_bracket, alpha_term, boundary_root_test, fibonacci, growth_report,
    half_plane_closed_form, half_plane_coefficient, sum_certificate, y_at_one_third,
)
from qwalks.enumerator import SET_S, Axis, Region, count_walks, iter_total_counts, series_boundary
from qwalks.kernel import KernelModel, Mode
from qwalks.series import TruncSeries


def test_fibonacci_convention():
    assert [fibonacci(n) for n in range(7)] == [1, 1, 2, 3, 5, 8, 13]


def test_y_at_one_third_examples():
    assert y_at_one_third(0) == 1
    assert y_at_one_third(1) == Fraction(1, 2)
    assert y_at_one_third(3) == Fraction(1, 13)


@given(st.integers(0, 60))
def test_fibonacci_identity(n):
    assert y_at_one_third(n) * fibonacci(2 * n) == 1


def _frac_sqrt(v):
    a, b = isqrt(v.numerator), isqrt(v.denominator)
    assert a * a == v.numerator and b * b == v.denominator
    return Fraction(a, b)


def test_y_one_third_by_composing_the_root():
    # Y_1(x; t) = x (1 - sqrt(1 - 4t^2 (1 + x^2))) / (2t (1 + x^2)), iterated
    # from x = 1 at t = 1/3 in exact arithmetic
    t = Fraction(1, 3)
    x = Fraction(1)
    for n in range(1, 12):
        u = 1 + x * x
        x = x * (1 - _frac_sqrt(1 - 4 * t * t * u)) / (2 * t * u)
        assert x == y_at_one_third(n)


def test_alpha_digits():
    assert alpha(10).value == "0.1731788836"
    assert alpha(1).value == "0.2"
    r = alpha(30)
    assert r.lower < r.upper and r.upper - r.lower < Fraction(1, 10 ** 32)
    assert r.value.startswith("0.17317888355")  # 10 digits round up to ...836


def test_alpha_brackets_shrink_and_alternate():
    prev = None
    for k in range(1, 25):
        lo, hi = alpha_bracket(k)
        if prev is not None:
            assert prev[0] <= lo and hi <= prev[1]
        prev = (lo, hi)
    assert all(abs(alpha_term(n + 1)) < abs(alpha_term(n)) for n in range(50))


def test_sum_certificate():
    cert = sum_certificate()
    assert cert["passed"]
    assert cert["lower"] == "2/5" and cert["upper"] == "1/2"


def test_half_plane_closed_form():
    s = half_plane_closed_form(8)
    assert [s[k] for k in range(8)] == [1, 0, 2, 0, 8, 0, 40, 0]
    s = half_plane_closed_form(41)
    assert all(s[2 * m + 1] == 0 for m in range(20))
    assert all(s[2 * m] == 2 ** m * comb(2 * m, m) // (m + 1) for m in range(21))
    assert half_plane_coefficient(3) == 40


def test_half_plane_squares_back():
    p = half_plane_closed_form(30)
    t2 = TruncSeries([0, 0, 4], 30)
    lhs = (1 - t2 * p) ** 2
    assert lhs.truncate(30) == TruncSeries([1, 0, -8], 30)


def test_half_plane_oracle():
    table = count_walks(SET_S, Region.HALF_PLANE_Y, 30)
    assert series_boundary(table, Axis.X_AXIS) == half_plane_closed_form(31)


def test_growth_short_window():
    counts = list(iter_total_counts(SET_S, Region.QUARTER_PLANE, 120))
    rep = growth_report(counts, window=(50, 120))
    assert rep["final_ratio_within_1e-3"]
    assert rep["residual_bounded"]
    assert rep["rows"][0].n == 50 and rep["rows"][-1].n == 120


def test_growth_rejects_short_input():
    with pytest.raises(ValueError):
        growth_report([1, 1, 3], window=(50, 200))


def test_boundary_radius_evidence():
    q10 = KernelModel("S", 60).q_x0(Mode.AT_X1)
    rep = boundary_root_test(q10)
    assert rep["passed"]
