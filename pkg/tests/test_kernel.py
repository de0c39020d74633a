import pytest

from qwalks.enumerator import SET_S, SET_T, Axis, Region, count_walks, series_boundary
from qwalks.kernel import Family, KernelModel, Mode, Rule, check_against_oracle, telescoped_q_x0
from qwalks.enumerator import series_boundary_poly
from qwalks.series import TruncSeries


def coeffs(s, n):
    return [s[k] for k in range(n)]


def test_first_iterates_S():
    # Frozen from an independent sympy expansion of the closed-form root.
    fam = KernelModel("S", 12).iterates(2)
    assert coeffs(fam[1], 8) == [0, 1, 0, 2, 0, 8, 0, 40]
    assert coeffs(fam[2], 9) == [0, 0, 1, 0, 3, 0, 13, 0, 67]


def test_first_iterates_T():
    m = KernelModel("T", 12)
    a = m.iterates(2, tag="A")
    b = m.iterates(1, tag="B")
    assert coeffs(a[2], 9) == [0, 0, 1, 0, 4, 0, 20, 0, 112]
    assert coeffs(b[1], 8) == [0, 1, 1, 2, 4, 9, 21, 51]


@pytest.mark.parametrize("fam,count", [("S", 5), ("T", 10)])
def test_root_identities(fam, count):
    res = KernelModel(fam, 20).verify_root_identities()
    assert len(res) == count
    assert all(r.passed for r in res), [r.to_json() for r in res if not r.passed]


@pytest.mark.parametrize("fam,tag", [("S", "Y"), ("T", "A"), ("T", "B")])
def test_recurrence_equals_composition(fam, tag):
    m = KernelModel(fam, 14)
    rec = m.iterates(4, Mode.SYMBOLIC_X, Rule.RECURRENCE, tag, 14)
    comp = m.iterates(4, Mode.SYMBOLIC_X, Rule.COMPOSITION, tag, 14)
    for n in range(5):
        assert rec[n].first_mismatch(comp[n], 14) is None


def test_wrong_family_rejected():
    with pytest.raises(ValueError):
        KernelModel("S", 5).iterates(2, tag="A")


@pytest.mark.parametrize("fam,steps", [("S", SET_S), ("T", SET_T)])
def test_oracle_agreement_order_40(fam, steps):
    table = count_walks(steps, Region.QUARTER_PLANE, 39)
    res = check_against_oracle(KernelModel(fam, 40), table)
    assert all(r.passed for r in res)


def test_oracle_detects_fault():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 19)
    bad = table.replace(12, 4, 0, table.coefficient(12, 4, 0) + 1)
    res = check_against_oracle(KernelModel("S", 20), bad)
    failed = [r for r in res if not r.passed]
    assert failed and all(r.first_mismatch_exponent == 12 for r in failed)


def test_boundary_at_one():
    table = count_walks(SET_T, Region.QUARTER_PLANE, 25)
    m = KernelModel("T", 26)
    assert m.q_x0(Mode.AT_X1) == series_boundary(table, Axis.X_AXIS)
    assert m.q_0y(Mode.AT_X1) == series_boundary(table, Axis.Y_AXIS)


@pytest.mark.parametrize("N", [1, 3, 6])
def test_telescoped_remainder(N):
    table = count_walks(SET_S, Region.QUARTER_PLANE, 20)
    oracle = series_boundary_poly(table, Axis.X_AXIS)
    m = KernelModel("S", 20)
    tel = telescoped_q_x0(m, N, oracle, 20)
    assert tel.first_mismatch(oracle, 20) is None


def test_counting_series_T_start():
    w = KernelModel(Family.SET_T, 12).q_11()
    assert coeffs(w, 9) == [1, 1, 2, 4, 10, 23, 61, 153, 418]
    assert isinstance(w, TruncSeries)
