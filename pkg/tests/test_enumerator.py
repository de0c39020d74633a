import json
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from qwalks.enumerator import (
    SET_S, SET_T, Axis, CountTable, Region, StepSet, StepSetError, count_walks,
    functional_equation_check, iter_total_counts, parse_step_set, series_boundary,
    series_boundary_poly, series_line, series_W,
)


def brute_force(steps, region, n_max):
    """Endpoint counts by explicit walk extension, one layer at a time."""
    def ok(i, j):
        if region is Region.QUARTER_PLANE:
            return i >= 0 and j >= 0
        if region is Region.HALF_PLANE_Y:
            return j >= 0
        return True

    layers = [Counter({(0, 0): 1})]
    for _ in range(n_max):
        nxt = Counter()
        for (i, j), c in layers[-1].items():
            for dx, dy in steps:
                if ok(i + dx, j + dy):
                    nxt[(i + dx, j + dy)] += c
        layers.append(nxt)
    return layers


step_pool = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
step_sets = st.lists(st.sampled_from(step_pool), min_size=1, max_size=8, unique=True)


@given(step_sets, st.sampled_from(list(Region)), st.integers(0, 7))
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(steps, region, n):
    table = count_walks(StepSet(tuple(steps)), region, n)
    ref = brute_force(steps, region, n)
    for k in range(n + 1):
        assert dict(((i, j), c) for i, j, c in table.entries(k)) == dict(ref[k])


def test_first_counts_S_and_T():
    s = list(iter_total_counts(SET_S, Region.QUARTER_PLANE, 10))
    assert s == [1, 1, 3, 7, 21, 55, 165, 457, 1371, 3909, 11727]
    t = list(iter_total_counts(SET_T, Region.QUARTER_PLANE, 8))
    assert t == [1, 1, 2, 4, 10, 23, 61, 153, 418]


def test_trivial_bounds():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 12)
    w = series_W(table)
    assert all(w[n] <= 3 ** n for n in range(13))
    free = count_walks(SET_S, Region.UNRESTRICTED, 6)
    assert series_W(free).coefficient_list(0, 7) == [3 ** n for n in range(7)]


def test_parse_step_set():
    assert parse_step_set("S") == SET_S
    assert parse_step_set("(-1,1);(1,1);(1,-1)") == SET_S
    assert parse_step_set("nw; N ;se") == SET_T
    with pytest.raises(StepSetError) as exc:
        parse_step_set("(1,1);(2,0)")
    assert exc.value.position > 0
    with pytest.raises(StepSetError):
        parse_step_set("(0,0)")
    with pytest.raises(StepSetError):
        parse_step_set("")


def test_json_round_trip():
    table = count_walks(SET_T, Region.QUARTER_PLANE, 9)
    data = json.loads(json.dumps(table.to_json()))
    assert CountTable.from_json(data) == table


def test_boundary_and_lines():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 12)
    q10 = series_boundary(table, Axis.X_AXIS)
    q01 = series_boundary(table, Axis.Y_AXIS)
    assert q10 == q01  # diagonal symmetry of S
    assert series_boundary_poly(table, Axis.X_AXIS).eval_at_x(1) == q10
    line2 = series_line(table, 2).eval_at_x(1)
    assert line2.coefficient_list(0, 4) == [0, 1, 2, 2]
    total = sum((series_line(table, k).eval_at_x(1) for k in range(0, 25, 2)),
                series_line(table, 0).eval_at_x(1) * 0)
    assert total == series_W(table)


@pytest.mark.parametrize("steps", [SET_S, SET_T])
def test_functional_equation_holds(steps):
    table = count_walks(steps, Region.QUARTER_PLANE, 25)
    rep = functional_equation_check(table)
    assert rep.passed and rep.n_checked == 25


def test_functional_equation_detects_fault():
    table = count_walks(SET_S, Region.QUARTER_PLANE, 10)
    bad = table.replace(6, 2, 2, table.coefficient(6, 2, 2) + 1)
    rep = functional_equation_check(bad)
    assert not rep.passed
    assert rep.first_violation == (6, 2, 2)
