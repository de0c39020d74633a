import pytest

from qwalks.enumerator import SET_S, Region, count_walks, series_line
from qwalks.kernel import KernelModel, Mode
from qwalks.poly import Poly, poly_gcd
from qwalks.qanalysis import RatQ, ybar
from qwalks.series import TruncSeries
from qwalks.strip import (
    BASE, StripError, _div_y_minus_q, d_at_one, d_next, factor_denominator, pole_survey,
    q_of_t, q_round_trip, strip_gf, verify_strip,
)

Q = Poly([0, 1])


def test_q_of_t_catalan():
    q = q_of_t(9)
    assert [q[k] for k in range(9)] == [0, 1, 0, 1, 0, 2, 0, 5, 0]
    assert q_round_trip(40)


def test_q_of_t_reproduces_first_iterate():
    order = 14
    y1 = KernelModel("S", order).iterates(1, Mode.AT_X1)[1]
    inv = ybar(1).to_t_series(q_of_t(order))
    assert (inv * y1).truncate(order - 1) == TruncSeries.one(order - 1)


def test_base_case():
    assert strip_gf(0) is BASE
    assert d_at_one(0) == 1


def test_first_step_closed_form():
    # D_2(y) = [q^3 (y^4 + 1) - q y^2 (q^4 + 1)] / [(q^4 + 1)(yq - 1)(y - q)]
    d2 = strip_gf(2)
    y_num = [Q ** 3, Poly(), -Q * (Poly.monomial(4) + 1), Poly(), Q ** 3]
    quot = _div_y_minus_q(y_num)  # exact: the numerator vanishes at y = q
    # remaining factor (yq - 1) divides too; compare by cross-multiplying
    lhs = [c * d2.den for c in quot]
    qy1 = [Poly([-1]), Q]
    rhs = [Poly()] * (len(d2.num) + 1)
    for i, a in enumerate(d2.num):
        for j, b in enumerate(qy1):
            rhs[i + j] = rhs[i + j] + a * b * (Poly.monomial(4) + 1)
    while len(rhs) > len(lhs) and not rhs[-1]:
        rhs.pop()
    assert lhs == rhs


def test_y_minus_q_division_detects_non_vanishing():
    with pytest.raises(StripError):
        _div_y_minus_q([Poly([1]), Poly([1])])  # 1 + y does not vanish at y = q


def test_d2_and_d4_values():
    assert d_at_one(2) == RatQ(Q * (Q + 1) ** 2, Poly.monomial(4) + 1)
    d4 = d_at_one(4)
    facs = [f for f, _ in factor_denominator(d4)]
    assert facs == [Poly([1, 0, -1, 0, 1]), Poly([1, 0, 0, 0, 1])]
    # only the q^4 - q^2 + 1 part of q^6 + 1 survives reduction
    assert poly_gcd(Poly.monomial(6) + 1, d4.den) == Poly([1, 0, -1, 0, 1])


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_dual_route(k):
    assert d_at_one(k) == strip_gf(k).at_one()
    assert d_next(strip_gf(k - 2)) == strip_gf(k)


def test_d2_series_start():
    s = d_at_one(2).to_t_series(q_of_t(8))
    assert [s[k] for k in range(4)] == [0, 1, 2, 2]


def test_verify_strip_small():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 12)
    rep = verify_strip(8, 12, table)
    assert rep["passed"] and rep["sum_matches_W"]
    assert [c.k for c in rep["lines"]] == [0, 2, 4, 6, 8]


def test_verify_strip_detects_fault():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 10)
    bad = table.replace(5, 1, 1, table.coefficient(5, 1, 1) + 1)
    rep = verify_strip(6, 10, bad)
    assert not rep["passed"]
    line2 = [c for c in rep["lines"] if c.k == 2][0]
    assert line2.first_mismatch_exponent == 5


def test_line_series_polynomial_in_y():
    # D_2(y) expanded in t agrees with the oracle's y-polynomials at y = 2
    order = 10
    table = count_walks(SET_S, Region.QUARTER_PLANE, order)
    d2 = strip_gf(2)
    qt = q_of_t(order + 1)
    num = sum((RatQ(c) * RatQ(Poly.const(2 ** i)) for i, c in enumerate(d2.num)), RatQ(0))
    ours = (num / RatQ(d2.den * (2 * Q - 1) ** d2.qy_power)).to_t_series(qt)
    theirs = series_line(table, 2).eval_at_x(2)
    assert ours.first_mismatch(theirs, order + 1) is None


def test_survey_is_observational():
    s = pole_survey(8, precision=30)
    assert s["status"] == "OBSERVATIONAL"
    gaps = [r["max_angular_gap"] for r in s["rows"]]
    assert gaps == sorted(gaps, reverse=True)


def test_odd_k_rejected():
    with pytest.raises(ValueError):
        strip_gf(3)
    with pytest.raises(ValueError):
        d_at_one(-2)
