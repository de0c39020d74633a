"""Acceptance suite: one test per criterion, summarised at the end of the run."""
import subprocess
import sys
from fractions import Fraction
from math import comb

import mpmath
import pytest

from qwalks import asymptotics, qanalysis, strip
from qwalks.enumerator import (
    SET_S, SET_T, Axis, Region, count_walks, iter_total_counts, series_boundary,
    series_boundary_poly, series_W,
)
from qwalks.kernel import KernelModel


@pytest.mark.criterion(1, "kernel method equals enumeration to order 100 (S and T)")
@pytest.mark.parametrize("fam,steps", [("S", SET_S), ("T", SET_T)])
def test_c1_oracle_kernel_agreement(fam, steps):
    order = 100
    table = count_walks(steps, Region.QUARTER_PLANE, order - 1)
    model = KernelModel(fam, order)
    w = series_W(table)
    assert model.q_11(order).first_mismatch(w, order) is None
    assert model.q_11(order).order == order
    qx = model.q_x0("SymbolicX", order)
    assert qx.first_mismatch(series_boundary_poly(table, Axis.X_AXIS), order) is None
    if fam == "T":
        qy = model.q_0y("SymbolicX", order)
        assert qy.first_mismatch(series_boundary_poly(table, Axis.Y_AXIS), order) is None


@pytest.mark.criterion(2, "alpha(10) = 0.1731788836; inner sum in (2/5, 1/2)")
def test_c2_alpha():
    assert asymptotics.alpha(10).value == "0.1731788836"
    cert = asymptotics.sum_certificate()
    assert cert["passed"]
    assert Fraction(cert["lower"]) == Fraction(2, 5) and Fraction(cert["upper"]) == Fraction(1, 2)
    lo, hi = asymptotics.alpha_bracket(40)
    inner_lo, inner_hi = (1 - hi) / 2, (1 - lo) / 2
    assert Fraction(2, 5) < inner_lo < inner_hi < Fraction(1, 2)


@pytest.mark.criterion(3, "Y_n(1;1/3) F_2n = 1 for n <= 40 (F_0 = F_1 = 1)")
def test_c3_fibonacci():
    assert asymptotics.fibonacci(0) == asymptotics.fibonacci(1) == 1
    for n in range(41):
        assert asymptotics.y_at_one_third(n) * asymptotics.fibonacci(2 * n) == 1


@pytest.mark.criterion(4, "half-plane closed form equals the oracle to order 40")
def test_c4_half_plane():
    table = count_walks(SET_S, Region.HALF_PLANE_Y, 40)
    oracle = series_boundary(table, Axis.X_AXIS)
    closed = asymptotics.half_plane_closed_form(41)
    assert closed.first_mismatch(oracle, 41) is None
    for m in range(21):
        assert closed[2 * m] == 2 ** m * comb(2 * m, m) // (m + 1)


@pytest.mark.criterion(5, "pole certifications for n = 2..12 at 60 digits")
def test_c5_pole_certifications():
    tol = mpmath.mpf("1e-20")
    for n in range(2, 13):
        rep = qanalysis.certify_thm_work(n, k_range=4 * n, precision=60)
        assert rep.passed, (n, rep.certifications)
        assert rep.tolerance <= 1e-20
        for root in rep.roots:
            assert abs(root.modulus - 1) > mpmath.mpf("1e-6")
        for w in rep.witnesses:
            assert w["branch"] in (1, -1)
            assert mpmath.mpf(w["abs_ybar_n"]) < tol < mpmath.mpf(w["min_other"])
            assert mpmath.mpf(w["antisymmetry"]) < tol
    with mpmath.workdps(40):
        roots = qanalysis.find_roots(qanalysis.pole_locus_S(2), 60)
        got = sorted(mpmath.nstr(r.value.imag, 11) for r in roots)
        phi = (1 + mpmath.sqrt(5)) / 2
        want = sorted(mpmath.nstr(v, 11) for v in (phi, -phi, 1 / phi, -1 / phi))
        assert got == want
        assert all(abs(r.value.real) < mpmath.mpf("1e-10") for r in roots)


@pytest.mark.criterion(6, "closed forms equal recurrences exactly for n <= 30")
def test_c6_closed_forms():
    for n in range(31):
        rec = qanalysis.ybar(n, "recurrence")
        assert rec == qanalysis.ybar(n, "closed")
        assert rec == qanalysis.ybar(n, "closed_qpowers")
        assert qanalysis.xbar(n, "recurrence") == qanalysis.xbar(n, "explicit")


@pytest.mark.criterion(7, "imaginary-axis lemma: f values, brackets, nu case checks n = 1..12")
def test_c7_imaginary_axis():
    for m in range(1, 11):
        assert qanalysis.f_rational(m, Fraction(1)) == 4
        assert qanalysis.f_rational(m, Fraction(-1)) == 4
        assert qanalysis.f_sign(m, Fraction(2)) < 0
        assert qanalysis.f_sign(m, Fraction(-2)) < 0
        assert qanalysis.f_at_two_negative(m)
        (nlo, nhi), (lo, hi) = qanalysis.bracket_roots_f(m)
        assert 1 <= lo < hi <= 2 and -2 <= nlo < nhi <= -1
    grid = qanalysis.default_grid(Fraction(1, 20), Fraction(4), Fraction(1, 200))
    assert len(grid) == 2 * 791 and min(abs(r) for r in grid) == Fraction(1, 20)
    for n in range(1, 13):
        rep = qanalysis.nu_case_checks(n, grid, precision=60)
        assert rep["passed"], rep
        assert mpmath.mpf(rep["reduced_vs_direct_max_rel"]) < mpmath.mpf("1e-30")
        assert mpmath.mpf(rep["display_vs_direct_max_rel"]) < mpmath.mpf("1e-30")


@pytest.mark.criterion(8, "strip recurrence: k <= 20 at order 30, k-sum reproduces W to t^30")
def test_c8_strip():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 30)
    rep = strip.verify_strip(20, 30, table)
    assert all(c.passed and c.dual_route for c in rep["lines"])
    assert [c.k for c in rep["lines"]] == list(range(0, 21, 2))
    assert rep["sum_matches_W"]
    assert rep["passed"]


@pytest.mark.criterion(9, "growth: c_200/(alpha 3^200) within 1e-3; residual ratio bounded")
def test_c9_growth():
    counts = list(iter_total_counts(SET_S, Region.QUARTER_PLANE, 200))
    assert counts[0] == 1
    rep = asymptotics.growth_report(counts, window=(50, 200))
    last = rep["rows"][-1]
    assert last.n == 200
    assert abs(last.ratio - 1) <= mpmath.mpf("1e-3")
    c = mpmath.mpf(rep["fitted_C"])
    assert all(r.residual_ratio <= c * (1 + mpmath.mpf("1e-6")) for r in rep["rows"])
    assert rep["residual_bounded"] and rep["ratio_trend_decreasing"]


@pytest.mark.criterion(10, "verify-all twice gives byte-identical reports")
def test_c10_determinism(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"run{i}.json"
        res = subprocess.run([sys.executable, "-m", "qwalks", "verify-all", "--out", str(path)],
                             capture_output=True, text=True, timeout=600)
        assert res.returncode == 0, res.stderr
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    assert len(outs[0]) > 1000
