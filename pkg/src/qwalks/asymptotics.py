"""Fibonacci values at ``t = 1/3``, the constant ``alpha`` and growth checks.

Fibonacci indexing here is ``F_0 = F_1 = 1``, ``F_n = F_{n-1} + F_{n-2}``, so
``F_2 = 2, F_4 = 5, F_6 = 13``.  This is the indexing under which
``Y_n(1; 1/3) = 1 / F_{2n}``; the more common ``F_1 = F_2 = 1`` would shift
every index by one.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

import mpmath

from .series import TruncSeries


@functools.lru_cache(maxsize=None)
def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 1, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def y_at_one_third(n: int) -> Fraction:
    """``Y_n(1; 1/3)`` from ``1/Y_n = 3/Y_{n-1} - 1/Y_{n-2}``, ``Y_0 = 1``, ``Y_1 = 1/2``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    inv = [Fraction(1), Fraction(2)]
    for _ in range(2, n + 1):
        inv.append(3 * inv[-1] - inv[-2])
    return 1 / inv[n]


def alpha_term(n: int) -> Fraction:
    """``(-1)^n / (F_{2n} F_{2n+2})``."""
    return Fraction((-1) ** n, fibonacci(2 * n) * fibonacci(2 * n + 2))


@dataclass(frozen=True)
class AlphaResult:
    value: str
    digits: int
    partial_terms: int
    lower: Fraction
    upper: Fraction

    def to_json(self) -> dict:
        width = self.upper - self.lower
        return {"alpha": self.value, "digits": self.digits,
                "partial_terms": self.partial_terms,
                "error_bound": f"{float(width):.3e}"}


def _round_decimal(x: Fraction, digits: int) -> str:
    scaled = x * 10 ** digits
    k = scaled.numerator // scaled.denominator
    frac = scaled - k
    if frac > Fraction(1, 2) or (frac == Fraction(1, 2) and k % 2):
        k += 1
    sign = "-" if k < 0 else ""
    k = abs(k)
    s = str(k).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}" if digits else f"{sign}{s}"


def alpha_bracket(terms: int) -> tuple[Fraction, Fraction]:
    """Exact interval containing ``alpha`` after ``terms`` terms of the sum.

    The terms alternate and strictly decrease in size, so the sum lies
    strictly between consecutive partial sums."""
    s = Fraction(0)
    for n in range(terms):
        s += alpha_term(n)
    s_next = s + alpha_term(terms)
    lo, hi = sorted((1 - 2 * s, 1 - 2 * s_next))
    return lo, hi


def alpha(digits: int) -> AlphaResult:
    """``alpha = 1 - 2 sum_{n>=0} (-1)^n / (F_{2n} F_{2n+2})`` to ``digits``
    decimals, with the alternating-series bracket certifying the rounding."""
    if digits < 1:
        raise ValueError("digits must be at least 1")
    s = Fraction(0)
    n = 0
    while True:
        s += alpha_term(n)
        n += 1
        nxt = s + alpha_term(n)
        lo, hi = sorted((1 - 2 * s, 1 - 2 * nxt))
        if hi - lo < Fraction(1, 10 ** (digits + 2)):
            a, b = _round_decimal(lo, digits), _round_decimal(hi, digits)
            if a == b:
                return AlphaResult(a, digits, n, lo, hi)


def sum_certificate() -> dict:
    """The sum ``sum (-1)^n/(F_{2n}F_{2n+2})`` lies strictly in ``(2/5, 1/2)``.

    Its first two partial sums are ``1/2`` and ``2/5``; since the terms
    alternate and ``1/(F_{2n}F_{2n+2})`` is strictly decreasing, the sum lies
    strictly between any two consecutive partial sums.  The decrease is
    checked exactly for the first 200 terms and follows from
    ``F_{2n+4} > F_{2n}`` in general.
    """
    s0 = alpha_term(0)
    s1 = s0 + alpha_term(1)
    decreasing = all(abs(alpha_term(n + 1)) < abs(alpha_term(n)) for n in range(200))
    s2 = s1 + alpha_term(2)
    return {
        "partial_sums": [str(s0), str(s1), str(s2)],
        "lower": str(s1),
        "upper": str(s0),
        "strictly_decreasing_terms": decreasing,
        "passed": s1 == Fraction(2, 5) and s0 == Fraction(1, 2) and decreasing and s1 < s2 < s0,
    }


def half_plane_closed_form(order: int) -> TruncSeries:
    """``(1 - sqrt(1 - 8t^2)) / (4t^2)`` to ``O(t^order)``."""
    if order < 2:
        raise ValueError("order must be at least 2")
    arg = TruncSeries([0, 0, -8], order + 2)
    root = arg.sqrt_one_plus()
    return ((1 - root).shift(-2) * Fraction(1, 4)).truncate(order)


def half_plane_coefficient(m: int) -> int:
    """Coefficient of ``t^{2m}``: ``2^m Catalan(m)``."""
    return 2 ** m * comb(2 * m, m) // (m + 1)


@dataclass(frozen=True)
class GrowthRow:
    n: int
    count: int
    ratio: mpmath.mpf
    residual_ratio: mpmath.mpf

    def to_csv(self) -> dict:
        return {"n": self.n, "c_n": str(self.count),
                "ratio": mpmath.nstr(self.ratio, 20),
                "residual_ratio": mpmath.nstr(self.residual_ratio, 12)}


def growth_report(counts, alpha_digits: int = 130, window: tuple[int, int] = (50, 200)) -> dict:
    """``c_n / (alpha 3^n)`` and ``|c_n - alpha 3^n| / 8^{n/2}`` over the window.

    ``counts`` is a sequence of exact ``c_n`` (e.g. ``series_W`` coefficients
    of a quarter-plane table for set S).  Certifies: the last ratio is within
    ``1e-3`` of 1; the largest deviation over each successive quarter of the
    window shrinks; the residual ratio is bounded by the fitted constant
    ``C = max`` over the window, and its maximum over the second half of the
    window does not exceed the first half's.
    """
    lo, hi = window
    counts = list(counts)
    hi = min(hi, len(counts) - 1)
    if hi < lo:
        raise ValueError("not enough counts for the requested window")
    with mpmath.workdps(alpha_digits + 20):
        lower = alpha(alpha_digits).lower
        a = mpmath.mpf(lower.numerator) / lower.denominator
        rows = []
        for n in range(lo, hi + 1):
            c = counts[n]
            main = a * mpmath.mpf(3) ** n
            rows.append(GrowthRow(n, c, c / main, abs(c - main) / mpmath.mpf(8) ** (mpmath.mpf(n) / 2)))
        devs = [abs(r.ratio - 1) for r in rows]
        q = max(1, len(rows) // 4)
        chunks = [max(devs[i:i + q]) for i in range(0, len(devs), q)]
        trend = all(chunks[i + 1] < chunks[i] for i in range(len(chunks) - 1))
        resid = [r.residual_ratio for r in rows]
        half = len(resid) // 2
        fitted_c = max(resid)
        bounded = max(resid[half:]) <= max(resid[:half]) if half else True
        final_dev = devs[-1]
    return {
        "window": [lo, hi],
        "rows": rows,
        "final_ratio_deviation": mpmath.nstr(final_dev, 6),
        "final_ratio_within_1e-3": bool(final_dev < mpmath.mpf("1e-3")),
        "ratio_trend_decreasing": bool(trend),
        "fitted_C": mpmath.nstr(fitted_c, 8),
        "residual_bounded": bool(bounded),
        "passed": bool(final_dev < mpmath.mpf("1e-3") and trend and bounded),
    }


def boundary_root_test(q10: TruncSeries, start: int = 20) -> dict:
    """``|coefficient n|^{1/n}`` of ``1 - 2t Q(1,0)`` stays at most ``sqrt 8``
    (plus a small margin) from ``start`` on; evidence for a radius of
    convergence of at least ``8^{-1/2}``."""
    s = 1 - 2 * q10.shift(1)
    vals = []
    for n in range(start, s.order):
        c = abs(s[n])
        if c:
            vals.append(float(mpmath.root(mpmath.mpf(c), n)))
    bound = 8 ** 0.5 * 1.05
    return {"max_root": max(vals) if vals else 0.0, "bound": bound,
            "passed": all(v <= bound for v in vals)}
