from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qwalks.poly import Poly, cyclotomic, poly_gcd, squarefree_factors
from qwalks.series import PolySeries, SeriesError, TruncSeries

small_ints = st.integers(min_value=-20, max_value=20)
polys = st.lists(small_ints, min_size=0, max_size=8).map(Poly)
nonzero_polys = polys.filter(lambda p: bool(p))


def test_poly_basics():
    p = Poly([1, 2, 3])
    assert p.degree == 2 and p.lead == 3
    assert p(2) == 1 + 4 + 12
    assert Poly([0, 0, 1]).valuation() == 2
    assert (p * Poly([1, -1])).c == (1, 1, 1, -3)
    assert Poly([0, 1]).format("q") == "q"


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a) == Poly()


@given(polys, nonzero_polys)
def test_divmod_reconstructs(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert not r or r.degree < b.degree


@given(nonzero_polys, nonzero_polys)
@settings(max_examples=50)
def test_gcd_matches_sympy(a, b):
    q = sp.symbols("q")
    expected = sp.Poly(sp.gcd(sp.Poly(list(reversed(a.c)), q), sp.Poly(list(reversed(b.c)), q)), q)
    g = poly_gcd(a, b)
    ref = Poly(reversed([Fraction(int(c)) for c in expected.all_coeffs()]))
    assert g == ref.monic()


def test_cyclotomic():
    assert cyclotomic(1) == Poly([-1, 1])
    assert cyclotomic(12) == Poly([1, 0, -1, 0, 1])
    prod = Poly([1])
    for d in (1, 2, 3, 6):
        prod = prod * cyclotomic(d)
    assert prod == Poly.monomial(6) - 1


def test_multiplicity_and_squarefree():
    p = Poly([-1, 1]) ** 3 * Poly([1, 1]) * Poly([1, 0, 1]) ** 2
    k, rest = p.multiplicity(Poly([-1, 1]))
    assert k == 3 and rest == Poly([1, 1]) * Poly([1, 0, 1]) ** 2
    parts = squarefree_factors(p)
    rebuilt = Poly([1])
    for f, e in parts:
        rebuilt = rebuilt * f ** e
    assert rebuilt.monic() == p.monic()
    assert max(e for _, e in parts) == 3


def test_series_reciprocal_and_sqrt():
    s = TruncSeries([1, -1], 10)
    assert s.reciprocal() == TruncSeries([1] * 10, 10)
    r = TruncSeries([0, 0, -8], 12).sqrt_one_plus()
    assert (r * r).truncate(12) == TruncSeries([1, 0, -8], 12)


@given(st.lists(small_ints, min_size=1, max_size=6).filter(lambda c: c[0] != 0))
def test_reciprocal_property(coeffs):
    s = TruncSeries(coeffs, 8)
    assert (s * s.reciprocal()).truncate(8) == TruncSeries.one(8)


def test_laurent_shift_and_mismatch():
    s = TruncSeries([0, 1, 2], 5)
    assert s.shift(-1)[0] == 1
    assert s.first_mismatch(TruncSeries([0, 1, 3], 5)) == 2
    assert s.first_mismatch(s) is None


def test_series_json_round_trip():
    s = TruncSeries([1, Fraction(1, 3), -2], 6)
    assert TruncSeries.from_json(s.to_json()) == s


def test_poly_series_composition():
    # g = t, f(x) = x + x^2 t  =>  f(g) = t + t^3
    f = PolySeries([Poly([0, 1]), Poly([0, 0, 1])], 6)
    g = TruncSeries([0, 1], 6)
    assert f.compose_inner(g).truncate(5) == TruncSeries([0, 1, 0, 1], 5)


def test_reciprocal_of_zero_raises():
    with pytest.raises((SeriesError, ZeroDivisionError)):
        TruncSeries.zero(4).reciprocal()
