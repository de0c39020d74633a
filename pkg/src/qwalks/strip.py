"""Strip decomposition for step set S: walks ending on the line ``x + y = k``.

``D_k(y)`` is carried exactly as ``N_k(q, y) / (E_k(q) (q y - 1)^m_k)`` with
``N_k`` a polynomial in ``y`` whose coefficients are polynomials in ``q``.
Every step divides out the apparent pole at ``y = q`` exactly; a nonzero
remainder raises ``StripError``.  ``D_k(1)`` is produced twice, once by the
dedicated ``y = 1`` recurrence and once by evaluating ``D_k(y)``.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath
from sympy import Poly as SymPoly, factor_list, symbols

from .enumerator import CountTable, series_W, series_line
from .poly import Poly, poly_gcd
from .qanalysis import RatQ, RootFindingError, find_roots
from .series import TruncSeries

ONE = Poly.const(1)
Q = Poly.x()


class StripError(ArithmeticError):
    """A division that should be exact left a remainder."""


def _ymul(a: list[Poly], b: list[Poly]) -> list[Poly]:
    out = [Poly() for _ in range(len(a) + len(b) - 1)]
    for i, u in enumerate(a):
        if not u:
            continue
        for j, v in enumerate(b):
            if v:
                out[i + j] = out[i + j] + u * v
    return out


def _ytrim(a: list[Poly]) -> list[Poly]:
    a = list(a)
    while len(a) > 1 and not a[-1]:
        a.pop()
    return a


def _qy_minus_one_pow(m: int) -> list[Poly]:
    return [Poly.monomial(i, comb(m, i) * (-1) ** (m - i)) for i in range(m + 1)]


def _div_y_minus_q(a: list[Poly]) -> list[Poly]:
    """Exact quotient by ``y - q`` (synthetic division from the top)."""
    d = len(a) - 1
    quot = [Poly()] * d
    carry = Poly()
    for i in range(d, 0, -1):
        carry = a[i] + Q * carry
        quot[i - 1] = carry
    if a[0] + Q * carry:
        raise StripError("numerator does not vanish at y = q")
    return quot


def _div_qy_minus_one(a: list[Poly]) -> list[Poly] | None:
    """Quotient by ``q y - 1`` if exact, else ``None`` (division from the bottom)."""
    r = []
    prev = Poly()
    for i in range(len(a) - 1):
        cur = Q * prev - a[i]
        r.append(cur)
        prev = cur
    return r if a[-1] == Q * prev and r else None


@dataclass(frozen=True)
class StripGF:
    """``D_k(y) = num(y) / (den * (q y - 1)^qy_power)``."""

    k: int
    num: tuple[Poly, ...]
    den: Poly
    qy_power: int

    def at_one(self) -> RatQ:
        total = Poly()
        for c in self.num:
            total = total + c
        return RatQ(total, self.den * (Q - 1) ** self.qy_power)

    def at_q(self) -> RatQ:
        total = Poly()
        for i, c in enumerate(self.num):
            total = total + c.shift(i)
        return RatQ(total, self.den * (Q * Q - 1) ** self.qy_power)

    def y_degree(self) -> int:
        return len(self.num) - 1


def _reduce(num: list[Poly], den: Poly, m: int) -> tuple[list[Poly], Poly, int]:
    while m > 0:
        r = _div_qy_minus_one(num)
        if r is None:
            break
        num, m = r, m - 1
    # the content gcd divides N(q, 2); start there and only refine on failure
    at_two = Poly()
    for i, c in enumerate(num):
        at_two = at_two + c * (2 ** i)
    g = poly_gcd(den, at_two) if at_two else den
    for c in num:
        if g.degree == 0:
            break
        if c and divmod(c, g)[1]:
            g = poly_gcd(g, c)
    if g.degree > 0:
        num = [c.exact_div(g) for c in num]
        den = den.exact_div(g)
    lead = Fraction(den.lead)
    if lead != 1:
        num = [c * (1 / lead) for c in num]
        den = den * (1 / lead)
    return num, den, m


BASE = StripGF(0, (ONE,), ONE, 0)


def d_next(prev: StripGF) -> StripGF:
    """One step of the strip recurrence

    ``D_k(y) = [q^3 D_{k-2}(q) (y^{k+2}+1) - q y^2 D_{k-2}(y) (q^{k+2}+1)]
    / [(q^{k+2}+1) (y q - 1) (y - q)]``.
    """
    k = prev.k + 2
    a = prev.at_q()
    big = Poly.monomial(k + 2) + 1
    g = poly_gcd(a.den, prev.den)
    common = a.den * prev.den.exact_div(g)
    m = prev.qy_power
    left_scale = Q ** 3 * a.num * common.exact_div(a.den)
    right_scale = Q * big * common.exact_div(prev.den)
    ypoly = [ONE] + [Poly()] * (k + 1) + [ONE]
    left = _ymul([c * left_scale for c in ypoly], _qy_minus_one_pow(m))
    right = [Poly(), Poly()] + [c * right_scale for c in prev.num]
    size = max(len(left), len(right))
    left += [Poly()] * (size - len(left))
    right += [Poly()] * (size - len(right))
    numer = _ytrim([u - v for u, v in zip(left, right)])
    quot = _div_y_minus_q(numer)
    num, den, m = _reduce(quot, common * big, m + 1)
    return StripGF(k, tuple(_ytrim(num)), den, m)


@functools.lru_cache(maxsize=None)
def strip_gf(k: int) -> StripGF:
    """``D_k(y)`` for even ``k >= 0`` from the base case ``D_0 = 1``."""
    if k < 0 or k % 2:
        raise ValueError("k must be even and nonnegative for step set S")
    return BASE if k == 0 else d_next(strip_gf(k - 2))


@functools.lru_cache(maxsize=None)
def d_at_one(k: int) -> RatQ:
    """``D_k(1) = [q (q^{k+2}+1) D_{k-2}(1) - 2 q^3 D_{k-2}(q)]
    / [(q^{k+2}+1) (q-1)^2]``, chained from ``D_0(1) = 1``."""
    if k < 0 or k % 2:
        raise ValueError("k must be even and nonnegative for step set S")
    if k == 0:
        return RatQ(ONE)
    big = Poly.monomial(k + 2) + 1
    prev_one = d_at_one(k - 2)
    prev_q = strip_gf(k - 2).at_q()
    g = poly_gcd(prev_one.den, prev_q.den)
    common = prev_one.den * prev_q.den.exact_div(g)
    num = (prev_one.num * common.exact_div(prev_one.den) * (Q * big)
           - prev_q.num * common.exact_div(prev_q.den) * (2 * Q ** 3))
    return RatQ(num, common * big * (Q - 1) ** 2)


def q_of_t(order: int) -> TruncSeries:
    """The power series ``q(t)`` with ``q = t (1 + q^2)``, to ``O(t^order)``."""
    if order < 1:
        raise ValueError("order must be at least 1")
    t = TruncSeries.t(order)
    q = TruncSeries.zero(order)
    for _ in range(order):
        q = t * (1 + q * q)
    return q


def q_round_trip(order: int) -> bool:
    """``q / (1 + q^2) = t`` up to the working order."""
    q = q_of_t(order)
    return q * (1 + q * q).reciprocal() == TruncSeries.t(order)


def d_at_one_series(k: int, order: int) -> TruncSeries:
    return d_at_one(k).to_t_series(q_of_t(order))


@dataclass(frozen=True)
class StripCheck:
    k: int
    passed: bool
    first_mismatch_exponent: int | None
    dual_route: bool

    def to_json(self) -> dict:
        return {"k": self.k, "status": "pass" if self.passed else "fail",
                "first_mismatch_exponent": self.first_mismatch_exponent,
                "dual_route_agrees": self.dual_route}


def verify_strip(k_max: int, order: int, table: CountTable) -> dict:
    """Compare ``D_k(1)`` expanded through ``q(t)`` with the enumerator's
    line series for every even ``k <= k_max``, through ``t^order``.  Also sums
    the expansions over ``k <= 2 order`` and compares with ``W(t)``."""
    if k_max % 2:
        raise ValueError("k_max must be even")
    if table.n_max < order:
        raise ValueError("table too short for the requested order")
    qt = q_of_t(order + 1)
    checks = []
    for k in range(0, k_max + 1, 2):
        ours = d_at_one(k).to_t_series(qt)
        theirs = series_line(table, k).eval_at_x(1).truncate(order + 1)
        mismatch = ours.first_mismatch(theirs, order + 1)
        dual = d_at_one(k) == strip_gf(k).at_one()
        checks.append(StripCheck(k, mismatch is None and dual, mismatch, dual))
    total = TruncSeries.zero(order + 1)
    for k in range(0, 2 * order + 1, 2):
        total = total + d_at_one(k).to_t_series(qt)
    w = series_W(table).truncate(order + 1)
    sum_mismatch = total.first_mismatch(w, order + 1)
    return {
        "k_max": k_max,
        "order": order,
        "lines": checks,
        "sum_first_mismatch_exponent": sum_mismatch,
        "sum_matches_W": sum_mismatch is None,
        "passed": all(c.passed for c in checks) and sum_mismatch is None,
    }


def factor_denominator(r: RatQ) -> list[tuple[Poly, int]]:
    """Irreducible factors over Z of the reduced denominator."""
    q = symbols("q")
    expr = SymPoly([int(v) for v in reversed(r.den.primitive().c)], q)
    _, facs = factor_list(expr)
    out = [(Poly([int(v) for v in reversed(f.all_coeffs())]), e) for f, e in facs]
    return sorted(out, key=lambda fe: (fe[0].degree, fe[0].c))


def _max_gap(angles: list) -> float:
    if not angles:
        return 2 * float(mpmath.pi)
    a = sorted(angles)
    gaps = [b - c for b, c in zip(a[1:], a)]
    gaps.append(a[0] + 2 * float(mpmath.pi) - a[-1])
    return max(gaps)


def pole_survey(k_max: int, precision: int = 60) -> dict:
    """OBSERVATIONAL.  Roots of the reduced denominators of ``D_k(1)``.

    For each even ``k`` reports the factored denominator, which factors of
    ``q^{k+2} + 1`` survive reduction, the number of roots within the
    tolerance of the unit circle and the largest angular gap among all
    unit-circle roots collected so far.  Nothing here is asserted."""
    if k_max % 2:
        raise ValueError("k_max must be even")
    tol = mpmath.mpf(10) ** (-(precision // 3))
    angles: list[float] = []
    rows = []
    for k in range(2, k_max + 1, 2):
        r = d_at_one(k)
        facs = factor_denominator(r)
        on_circle = 0
        with mpmath.workdps(precision):
            for f, _ in facs:
                if f.degree < 1:
                    continue
                try:
                    roots = find_roots(f, precision)
                except RootFindingError:
                    continue
                for root in roots:
                    if abs(root.modulus - 1) < tol:
                        on_circle += 1
                        angles.append(float(mpmath.arg(root.value)) % (2 * float(mpmath.pi)))
        big = Poly.monomial(k + 2) + 1
        surviving = poly_gcd(big, r.den)
        rows.append({
            "k": k,
            "denominator_factors": [{"poly": f.format("q"), "exponent": e} for f, e in facs],
            "reduced_degree": r.den.degree,
            "unit_circle_roots_found": on_circle,
            "q^(k+2)+1_surviving_degree": surviving.degree,
            "max_angular_gap": round(_max_gap(sorted(set(round(a, 12) for a in angles))), 12),
        })
    return {"status": "OBSERVATIONAL", "k_max": k_max, "rows": rows}
