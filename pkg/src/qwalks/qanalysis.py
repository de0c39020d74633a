"""Iterates under the substitution ``t = q / (1 + q^2)``.

With ``1/t = q + 1/q`` the reciprocal recurrences become linear with
characteristic roots ``q`` and ``1/q``, so every reciprocal iterate lives in
the quadratic extension ``Q(q)[sqrt(disc)]`` generated by its first term:

* ``Ybar_1 = (1 + q^2 + sqrt(1 - 6q^2 + q^4)) / (2q)``           (set S, and T at x = 1)
* ``Bbar_1 = (q^2 - q + 1 + sqrt(q^4 - 2q^3 - q^2 - 2q + 1)) / (2q)`` (set T, y = 1)

The sign of the square root written here is the one that is ``+1`` at
``q = 0``, which is the branch carrying the power series.  Zeros of the
iterates are poles of the generating functions; they are located by
clearing the square root (a norm computation) and root finding, then
certified numerically on both branches.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import mpmath

from .poly import Poly, poly_gcd, squarefree_factors
from .series import TruncSeries

Q = Poly([0, 1])
ONE = Poly([1])
DISC_Y = Poly([1, 0, -6, 0, 1])
DISC_B = Poly([1, -2, -1, -2, 1])


# ---------------------------------------------------------------------------
# rational functions in q
# ---------------------------------------------------------------------------
class RatQ:
    """``num / den`` in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE, *, reduced: bool = False):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = den if isinstance(den, Poly) else Poly.const(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not reduced and num:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num, den = num.exact_div(g), den.exact_div(g)
        if not num:
            den = ONE
        lead = den.lead
        if lead != 1:
            inv = 1 / Fraction(lead)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @classmethod
    def q_power(cls, k: int) -> "RatQ":
        if k >= 0:
            return cls(Poly.monomial(k), ONE, reduced=True)
        return cls(ONE, Poly.monomial(-k), reduced=True)

    def __repr__(self) -> str:
        return f"RatQ({self.num.format('q')!r}, {self.den.format('q')!r})"

    def format(self) -> str:
        if self.den == ONE:
            return self.num.format("q")
        return f"({self.num.format('q')})/({self.den.format('q')})"

    @staticmethod
    def _coerce(other) -> "RatQ | None":
        if isinstance(other, RatQ):
            return other
        if isinstance(other, Poly):
            return RatQ(other, ONE, reduced=True)
        if isinstance(other, (int, Fraction)):
            return RatQ(Poly.const(other), ONE, reduced=True)
        return None

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatQ(self.num + o.num, self.den)
        return RatQ(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatQ(-self.num, self.den, reduced=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RatQ(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RatQ":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return RatQ(self.den, self.num, reduced=True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __call__(self, z):
        return mp_eval(self.num, z) / mp_eval(self.den, z)

    def to_t_series(self, qt: TruncSeries) -> TruncSeries:
        num = _poly_of_series(self.num, qt)
        den = _poly_of_series(self.den, qt)
        return num * den.reciprocal()


def _poly_of_series(p: Poly, s: TruncSeries) -> TruncSeries:
    coeffs = p.c
    v = s.valuation
    if v is not None and v > 0:
        # q^j = O(t^(j v)); powers at or beyond the order contribute nothing
        coeffs = coeffs[:(s.order - 1) // v + 1]
    acc = TruncSeries.zero(s.order)
    for c in reversed(coeffs):
        acc = acc * s + c
    return acc


def mp_eval(p: Poly, z):
    acc = mpmath.mpf(0)
    for c in reversed(p.c):
        acc = acc * z + _mp(c)
    return acc


def _mp(c) -> mpmath.mpf:
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    return mpmath.mpf(c)


# ---------------------------------------------------------------------------
# the quadratic extension
# ---------------------------------------------------------------------------
class AlgebraicQ:
    """``a + b * sqrt(disc)`` with ``a, b`` rational functions of ``q``."""

    __slots__ = ("a", "b", "disc")

    def __init__(self, a, b, disc: Poly):
        self.a = RatQ._coerce(a) if not isinstance(a, RatQ) else a
        self.b = RatQ._coerce(b) if not isinstance(b, RatQ) else b
        self.disc = disc

    def __repr__(self) -> str:
        return f"AlgebraicQ({self.a.format()} + ({self.b.format()})*sqrt({self.disc.format('q')}))"

    def _lift(self, other) -> "AlgebraicQ | None":
        if isinstance(other, AlgebraicQ):
            if other.disc != self.disc:
                raise ValueError("elements of different quadratic extensions")
            return other
        r = RatQ._coerce(other)
        if r is None:
            return None
        return AlgebraicQ(r, RatQ(0), self.disc)

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b, self.disc))

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraicQ(self.a + o.a, self.b + o.b, self.disc)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraicQ(-self.a, -self.b, self.disc)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return AlgebraicQ(self.a - o.a, self.b - o.b, self.disc)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.b:
            return AlgebraicQ(self.a * o.a, self.b * o.a, self.disc)
        d = RatQ(self.disc)
        return AlgebraicQ(self.a * o.a + self.b * o.b * d,
                          self.a * o.b + self.b * o.a, self.disc)

    __rmul__ = __mul__

    def conj(self) -> "AlgebraicQ":
        return AlgebraicQ(self.a, -self.b, self.disc)

    def norm(self) -> RatQ:
        """``(a + b r)(a - b r) = a^2 - b^2 disc``; its zeros contain ours."""
        return self.a * self.a - self.b * self.b * RatQ(self.disc)

    def inverse(self) -> "AlgebraicQ":
        n = self.norm()
        return AlgebraicQ(self.a / n, -self.b / n, self.disc)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def sqrt_value(self, z, branch: int = 1):
        """``branch * principal sqrt(disc(z))``."""
        return branch * mpmath.sqrt(mp_eval(self.disc, z))

    def evaluate(self, z, branch: int = 1):
        return self.a(z) + self.b(z) * self.sqrt_value(z, branch)

    def to_t_series(self, qt: TruncSeries) -> TruncSeries:
        """Expand on the series branch (``sqrt(disc) = 1 + O(q)``)."""
        d = _poly_of_series(self.disc, qt)
        root = (d - 1).sqrt_one_plus()
        return self.a.to_t_series(qt) + self.b.to_t_series(qt) * root


def _first(disc: Poly, a_num: Poly) -> AlgebraicQ:
    two_q = Poly([0, 2])
    return AlgebraicQ(RatQ(a_num, two_q), RatQ(ONE, two_q), disc)


def ybar_1() -> AlgebraicQ:
    return _first(DISC_Y, Poly([1, 0, 1]))


def bbar_1() -> AlgebraicQ:
    return _first(DISC_B, Poly([1, -1, 1]))


def ybar_1_displayed() -> AlgebraicQ:
    """The form ``4q / (q^2 + 1 + sqrt(q^4 - 6q^2 + 1))`` as printed with the
    recurrences; it is the conjugate of :func:`ybar_1`."""
    return Poly([0, 4]) * AlgebraicQ(Poly([1, 0, 1]), 1, DISC_Y).inverse()


def xbar_1_displayed() -> AlgebraicQ:
    return Poly([0, 2]) * AlgebraicQ(Poly([1, -1, 1]), 1, DISC_B).inverse()


INV_T = RatQ(Poly([1, 0, 1]), Q)  # 1/t = (1 + q^2)/q


def _linear_recurrence(first: AlgebraicQ, n: int, defect) -> list[AlgebraicQ]:
    """``I_0 = 1``, ``I_1 = first``, ``I_{j+1} = (1/t) I_j - I_{j-1} - defect(j)``."""
    out = [AlgebraicQ(1, 0, first.disc), first]
    for j in range(1, n):
        nxt = out[j] * INV_T - out[j - 1]
        d = defect(j)
        if d:
            nxt = nxt - d
        out.append(nxt)
    return out[: n + 1]


@functools.lru_cache(maxsize=None)
def _ybar_rec(n: int) -> tuple:
    return tuple(_linear_recurrence(ybar_1(), max(n, 1), lambda j: 0))


@functools.lru_cache(maxsize=None)
def _xbar_rec(n: int) -> tuple:
    return tuple(_linear_recurrence(bbar_1(), max(n, 1), lambda j: 1 if j >= 1 else 0))


def ybar(n: int, method: str = "recurrence") -> AlgebraicQ:
    """``1 / Y_n(1; q/(1+q^2))``.

    ``method`` is ``"recurrence"`` (three-term recurrence) or ``"closed"``
    (``((1-q^{2n})/(1-q^2)) q^{1-n} Ybar_1 - ((1-q^{2n-2})/(1-q^2)) q^{2-n}``).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if method == "recurrence":
        return _ybar_rec(n)[n]
    if method == "closed":
        one_m_q2 = Poly([1, 0, -1])
        c1 = RatQ(ONE - Poly.monomial(2 * n), one_m_q2) * RatQ.q_power(1 - n)
        c0 = (RatQ(ONE, one_m_q2) - RatQ.q_power(2 * n - 2) / one_m_q2) * RatQ.q_power(2 - n)
        return ybar_1() * c1 - c0
    if method == "closed_qpowers":
        # ((Ybar_1 - q)/(1-q^2)) q^{1-n} + ((1 - q Ybar_1)/(1-q^2)) q^n
        y1 = ybar_1()
        inv = RatQ(ONE, Poly([1, 0, -1]))
        return (y1 - Q) * inv * RatQ.q_power(1 - n) + (1 - y1 * Q) * inv * RatQ.q_power(n)
    raise ValueError(f"unknown method {method!r}")


def xbar(n: int, method: str = "recurrence") -> AlgebraicQ:
    """The reciprocal iterates of the displayed inhomogeneous recurrence
    ``Xbar_n = ((1+q^2)/q) Xbar_{n-1} - Xbar_{n-2} - 1`` with ``Xbar_1 = Bbar_1``.

    ``method="explicit"`` evaluates the closed form in terms of ``beta = Bbar_1``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if method == "recurrence":
        return _xbar_rec(n)[n]
    if method == "explicit":
        beta = bbar_1()
        qn, q2n = Poly.monomial(n), Poly.monomial(2 * n)
        lead = Poly([1, -2]) + beta * Poly([0, -1, 1])
        tail = Poly([0, 0, -2, 1]) + beta * Poly([0, 1, -1])
        num = lead * q2n + qn * Poly([0, 1, 1]) + tail
        den = Poly([1, -1]) ** 2 * Poly([1, 1]) * qn
        return num * RatQ(ONE, den)
    raise ValueError(f"unknown method {method!r}")


@functools.lru_cache(maxsize=None)
def _kernel_rec(tag: str, n: int) -> tuple:
    if tag == "A":
        return tuple(_linear_recurrence(ybar_1(), max(n, 1), lambda j: j % 2))
    return tuple(_linear_recurrence(bbar_1(), max(n, 1), lambda j: 1 if j % 2 == 0 else 0))


def abar_kernel(n: int) -> AlgebraicQ:
    """``1/A_n(1; q/(1+q^2))`` from the kernel relations of set T: the extra
    ``-1`` enters exactly at odd ``j`` (``A_j`` in the y-slot)."""
    return _kernel_rec("A", n)[n]


def bbar_kernel(n: int) -> AlgebraicQ:
    """``1/B_n(1; q/(1+q^2))``: the extra ``-1`` enters at even ``j >= 2``."""
    return _kernel_rec("B", n)[n]


# ---------------------------------------------------------------------------
# pole loci
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Deflation:
    polynomial: Poly
    removed: dict = field(default_factory=dict)  # factor text -> multiplicity


def deflate(p: Poly) -> Deflation:
    """Remove every power of ``q``, ``q - 1`` and ``q + 1`` by exact division."""
    removed = {}
    v = p.valuation()
    if v:
        p = p.shift(-v)
        removed["q"] = v
    for name, fac in (("q - 1", Poly([-1, 1])), ("q + 1", Poly([1, 1]))):
        k, p = p.multiplicity(fac)
        if k:
            removed[name] = k
    return Deflation(p.primitive() if p.degree > 0 else p, removed)


def pole_locus_S_raw(n: int) -> Poly:
    """``q^{4n+2} + q^{2n}(1 - 4q^2 + q^4) + q^2``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return Poly.monomial(4 * n + 2) + Poly.monomial(2 * n) * Poly([1, 0, -4, 0, 1]) + Poly.monomial(2)


def pole_locus_T_raw(n: int) -> Poly:
    if n < 1:
        raise ValueError("n must be at least 1")
    c = Poly([1, -3, 1])
    s6 = Poly([1, -4, 3, 6, 3, -4, 1])
    return (Poly.monomial(2) * c * (Poly.monomial(4 * n) + 1)
            - Q * Poly([1, 1]) ** 2 * c * (Poly.monomial(3 * n) + Poly.monomial(n))
            - s6 * Poly.monomial(2 * n))


def pole_locus_S(n: int) -> Poly:
    return deflate(pole_locus_S_raw(n)).polynomial


def pole_locus_T(n: int) -> Poly:
    return deflate(pole_locus_T_raw(n)).polynomial


def norm_numerator(v: AlgebraicQ) -> Poly:
    """Numerator of ``v * conj(v)``: a polynomial whose roots contain the zeros
    of ``v`` on either branch."""
    return v.norm().num


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------
class RootFindingError(ArithmeticError):
    def __init__(self, message: str, residuals: Sequence = ()):
        super().__init__(message)
        self.residuals = list(residuals)


@dataclass(frozen=True)
class Root:
    value: mpmath.mpc
    residual: mpmath.mpf
    modulus: mpmath.mpf
    multiplicity: int = 1

    def to_json(self, digits: int = 30) -> dict:
        out = {"re": mpmath.nstr(self.value.real, digits),
               "im": mpmath.nstr(self.value.imag, digits),
               "modulus": mpmath.nstr(self.modulus, digits),
               "residual": mpmath.nstr(self.residual, 5)}
        if self.multiplicity != 1:
            out["multiplicity"] = self.multiplicity
        return out


def _scale(p: Poly, z) -> mpmath.mpf:
    a = abs(z)
    return sum(abs(_mp(c)) * a ** k for k, c in enumerate(p.c))


def _squarefree_roots(p: Poly, precision: int) -> list:
    deg = p.degree
    coeffs = [_mp(c) for c in reversed(p.c)]
    steps, extra = max(200, 20 * deg), 3 * precision + 10 * deg
    for _ in range(4):
        try:
            return mpmath.polyroots(coeffs, maxsteps=steps, extraprec=extra, cleanup=True)
        except mpmath.libmp.NoConvergence:
            steps, extra = 4 * steps, 2 * extra
    raise RootFindingError(f"no convergence for degree {deg}")


def find_roots(p: Poly, precision: int = 60) -> list[Root]:
    """All complex roots of ``p`` with ``|f(z)| < 10^(-precision/2) * ||f||_z``.

    ``f`` is the squarefree factor the root belongs to (its multiplicity in
    ``p`` is recorded) and ``||f||_z = sum |c_k| |z|^k``.  Output is sorted by
    modulus, then argument.
    """
    if p.degree < 1:
        raise ValueError("find_roots needs a polynomial of degree >= 1")
    out = []
    bad = []
    with mpmath.workdps(precision + 20):
        bound = mpmath.mpf(10) ** (-mpmath.mpf(precision) / 2)
        for f, mult in squarefree_factors(p):
            df = f.derivative()
            for z in _squarefree_roots(f, precision):
                z = mpmath.mpc(z)
                for _ in range(3):
                    d = mp_eval(df, z)
                    if d == 0:
                        break
                    z = z - mp_eval(f, z) / d
                res = abs(mp_eval(f, z))
                if res > bound * _scale(f, z):
                    bad.append(res)
                out.append(Root(z, res, abs(z), mult))
        if bad:
            raise RootFindingError("residual above certified bound", [r.residual for r in out])
        digits = precision // 2
        out.sort(key=lambda r: (mpmath.nint(r.modulus * 10 ** digits),
                                mpmath.nint(mpmath.arg(r.value) * 10 ** digits)))
    return out


# ---------------------------------------------------------------------------
# certification of the zero structure of Ybar_n
# ---------------------------------------------------------------------------
@dataclass
class PoleReport:
    family: str
    n: int
    locus_polynomial: Poly
    roots: list
    certifications: dict
    tolerance: float
    witnesses: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(self.certifications.values())

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "n": self.n,
            "locus_degree": self.locus_polynomial.degree,
            "roots": [r.to_json() for r in self.roots],
            "certifications": dict(sorted(self.certifications.items())),
            "tolerance": self.tolerance,
        }

    def csv_row(self) -> dict:
        row = {"family": self.family, "n": self.n,
               "locus_degree": self.locus_polynomial.degree, "roots": len(self.roots)}
        row.update({k: "pass" if v else "fail" for k, v in sorted(self.certifications.items())})
        return row


def _numeric_iterates(q, branch: int, count: int, disc: Poly = DISC_Y):
    """``Ybar_0 .. Ybar_count`` at ``q`` on the chosen square-root branch."""
    s = branch * mpmath.sqrt(mp_eval(disc, q))
    y1 = (1 + q * q + s) / (2 * q)
    inv_t = (1 + q * q) / q
    vals = [mpmath.mpc(1), y1]
    for _ in range(2, count + 1):
        vals.append(inv_t * vals[-1] - vals[-2])
    return vals


UNIT_CIRCLE_MARGIN = mpmath.mpf("1e-6")


def certify_thm_work(n: int, k_range: int | None = None, precision: int = 60) -> PoleReport:
    """Numerically certify, for every root of the deflated locus of ``Ybar_n``:

    * ``off_unit_circle``: ``| |q| - 1 | > 1e-6``;
    * ``unique_index``: on some branch ``|Ybar_n| < tol < min_{k != n} |Ybar_k|``;
    * ``antisymmetry``: ``|Ybar_{n+k} + Ybar_{n-k}| < tol`` for ``1 <= k <= n``;
    * ``bnq_form``: ``Ybar_{n+k} = Ybar_{n+1} (1 - q^{2k}) / ((1 - q^2) q^{k-1})``;
    * ``q_pm1_nonvanishing``: the closed forms at ``q = +-1`` are nonzero.

    ``tol = 10^(-precision/3)``.
    """
    if n < 2:
        raise ValueError("the deflated locus is constant for n = 1; use n >= 2")
    k_range = 4 * n if k_range is None else k_range
    tol = mpmath.mpf(10) ** (-mpmath.mpf(precision) / 3)
    locus = pole_locus_S(n)
    certs = {"off_unit_circle": True, "unique_index": True, "antisymmetry": True,
             "bnq_form": True, "q_pm1_nonvanishing": True, "residuals": True}
    witnesses = []
    with mpmath.workdps(precision + 10):
        roots = find_roots(locus, precision)
        if sum(r.multiplicity for r in roots) != locus.degree:
            certs["residuals"] = False
        depth = max(k_range, 2 * n) + 1
        for root in roots:
            qc = root.value
            if not abs(root.modulus - 1) > UNIT_CIRCLE_MARGIN:
                certs["off_unit_circle"] = False
            chosen = None
            for branch in (1, -1):
                vals = _numeric_iterates(qc, branch, depth)
                others = [abs(vals[k]) for k in range(0, k_range + 1) if k != n]
                if abs(vals[n]) < tol and min(others) > tol:
                    chosen = (branch, vals)
                    break
            if chosen is None:
                certs["unique_index"] = certs["antisymmetry"] = certs["bnq_form"] = False
                witnesses.append({"root": root.to_json(), "branch": None})
                continue
            branch, vals = chosen
            anti = max(abs(vals[n + k] + vals[n - k]) for k in range(1, min(n, k_range) + 1))
            scale = max(1, max(abs(v) for v in vals))
            if not anti < tol * scale:
                certs["antisymmetry"] = False
            bnq = mpmath.mpf(0)
            for k in range(1, k_range + 1):
                if n + k >= len(vals):
                    break
                pred = vals[n + 1] * (1 - qc ** (2 * k)) / ((1 - qc ** 2) * qc ** (k - 1))
                bnq = max(bnq, abs(vals[n + k] - pred))
            if not bnq < tol * scale:
                certs["bnq_form"] = False
            witnesses.append({"root": root.to_json(), "branch": branch,
                              "abs_ybar_n": mpmath.nstr(abs(vals[n]), 5),
                              "min_other": mpmath.nstr(min(abs(vals[k]) for k in range(k_range + 1)
                                                           if k != n), 10),
                              "antisymmetry": mpmath.nstr(anti, 5),
                              "bnq": mpmath.nstr(bnq, 5)})
        certs["q_pm1_nonvanishing"] = q_pm1_check(n)["passed"]
    return PoleReport("S", n, locus, roots, certs, float(tol), witnesses)


def q_pm1_check(n: int) -> dict:
    """At ``q = 1`` the recurrence gives ``n Ybar_1(1) - (n - 1)``; at ``q = -1``
    it gives ``(-1)^(n+1) (n Ybar_1(-1) + (n - 1))``.  ``Ybar_1(+-1)`` is
    ``+-(1 +- i)``, so neither vanishes.  Both forms are checked against the
    recurrence on both branches."""
    ok = True
    for z in (mpmath.mpf(1), mpmath.mpf(-1)):
        for branch in (1, -1):
            vals = _numeric_iterates(mpmath.mpc(z), branch, n)
            y1 = vals[1]
            if z > 0:
                closed = n * y1 - (n - 1)
            else:
                closed = (-1) ** (n + 1) * (n * y1 + (n - 1))
            if abs(closed - vals[n]) > mpmath.mpf(10) ** (-mpmath.mp.dps // 2) or closed == 0:
                ok = False
    return {"n": n, "passed": ok}


# ---------------------------------------------------------------------------
# imaginary axis: zeros of Ybar_{2m}
# ---------------------------------------------------------------------------
def imaginary_axis_f(m: int, r):
    """``f(r) = (1 - r^{4m}) sqrt(1 + 6r^2 + r^4) + (1 + r^2)(1 + r^{4m})``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    r = mpmath.mpf(r) if not isinstance(r, Fraction) else _mp(r)
    r4m = r ** (4 * m)
    return (1 - r4m) * mpmath.sqrt(1 + 6 * r ** 2 + r ** 4) + (1 + r ** 2) * (1 + r4m)


def f_exact(m: int, r: Fraction) -> tuple[Fraction, Fraction, Fraction]:
    """``f(r) = A + B sqrt(D)`` with rational ``A, B, D``."""
    r = Fraction(r)
    r4m = r ** (4 * m)
    return (1 + r * r) * (1 + r4m), 1 - r4m, 1 + 6 * r ** 2 + r ** 4


def f_rational(m: int, r: Fraction) -> Fraction | None:
    """``f(r)`` as an exact rational when ``sqrt(1 + 6r^2 + r^4)`` is rational
    or multiplied by zero; otherwise ``None``."""
    a, b, d = f_exact(m, r)
    if b == 0 or d == 0:
        return a
    rn, rd = isqrt(d.numerator), isqrt(d.denominator)
    if rn * rn == d.numerator and rd * rd == d.denominator:
        return a + b * Fraction(rn, rd)
    return None


def sign_of(a: Fraction, b: Fraction, d: Fraction) -> int:
    """Exact sign of ``a + b sqrt(d)`` for ``d >= 0``."""
    def sgn(x):
        return (x > 0) - (x < 0)
    sa, sb = sgn(a), sgn(b)
    if sb == 0 or d == 0:
        return sa
    if sa == 0:
        return sb
    if sa == sb:
        return sa
    # opposite signs: compare a^2 with b^2 d
    diff = a * a - b * b * d
    return sa * sgn(diff)


def f_sign(m: int, r: Fraction) -> int:
    return sign_of(*f_exact(m, r))


def f_at_two_negative(m: int) -> bool:
    """``f(2) = (sqrt(41) + 5) + (5 - sqrt(41)) 16^m < 0`` iff
    ``25 (1 + 16^m)^2 < 41 (16^m - 1)^2``; exact integer comparison."""
    p = 16 ** m
    return 25 * (1 + p) ** 2 < 41 * (p - 1) ** 2


def bracket_roots_f(m: int, width: Fraction = Fraction(1, 10 ** 12)) -> list[tuple[Fraction, Fraction]]:
    """Exact bisection for a sign change of ``f`` in ``[1, 2]``; ``f`` is even,
    so the mirror bracket in ``[-2, -1]`` is returned as well."""
    lo, hi = Fraction(1), Fraction(2)
    slo, shi = f_sign(m, lo), f_sign(m, hi)
    if not (slo > 0 > shi):
        raise ArithmeticError(f"no sign change of f on [1, 2] for m={m}")
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = f_sign(m, mid)
        if s == 0:
            return [(-mid, -mid), (mid, mid)]
        if s > 0:
            lo = mid
        else:
            hi = mid
    return [(-hi, -lo), (lo, hi)]


# ---------------------------------------------------------------------------
# the nu(r) case analysis (zeros of Xbar_n on the imaginary axis)
# ---------------------------------------------------------------------------
I = mpmath.mpc(0, 1)


def nu_direct(n: int, r):
    """The displayed locus polynomial evaluated at ``q = i r``."""
    return mp_eval(pole_locus_T_raw(n), I * r)


def nu_displayed(n: int, r):
    ir = I * r
    return (r ** 2 * (r ** 2 + 3 * ir - 1) * (r ** (4 * n) + 1)
            - ir * (r - I) ** 2 * (r ** 2 + 3 * ir - 1) * (ir ** (3 * n) + ir ** n)
            + (r ** 6 + 4 * ir * r ** 4 - 3 * r ** 4 + 6 * ir * r ** 2 + 3 * r ** 2 + 4 * ir - 1)
            * r ** (2 * n) * (-1) ** n)


def nu_case_reduced(n: int, r):
    """The case-specific real expression: ``Im(nu)`` (n = 2 mod 4),
    ``Re(nu)`` (n = 0 mod 4), or ``(r - 1/r) Im(nu) - 3 Re(nu)`` (n odd)."""
    if n % 4 == 2:
        return (3 * r ** (4 * n + 3) + r * (r ** 4 + 4 * r ** 2 + 1) * r ** (3 * n)
                + 2 * r * (2 * r ** 4 + 3 * r ** 2 + 2) * r ** (2 * n)
                + r * (r ** 4 + 4 * r ** 2 + 1) * r ** n + 3 * r ** 3)
    if n % 4 == 0:
        return r ** 2 * (r ** 2 - 1) * (r ** (4 * n) + r ** (3 * n) + (r ** 2 - 2 + r ** -2) * r ** (2 * n)
                                        + r ** n + 1)
    k = (n - 1) // 2
    return (r ** (2 * k + 2) * (2 + 14 * r ** 2 + 2 * r ** 4) * (r ** (4 * k + 2) - 1) * (-1) ** k
            - (r ** 2 - 1) * (r ** 4 + 12 * r ** 2 + 1) * r ** (4 * k + 2))


def _case_from_nu(n: int, r, v):
    if n % 4 == 2:
        return v.imag
    if n % 4 == 0:
        return v.real
    return (r - 1 / r) * v.imag - 3 * v.real


def _gauss_parts(p: Poly) -> tuple[Poly, Poly]:
    """Real and imaginary parts of ``p(i r)`` as polynomials in real ``r``."""
    re, im = [0] * len(p.c), [0] * len(p.c)
    for k, c in enumerate(p.c):
        # i^k: 1, i, -1, -i
        m = k % 4
        if m == 0:
            re[k] = c
        elif m == 1:
            im[k] = c
        elif m == 2:
            re[k] = -c
        else:
            im[k] = -c
    return Poly(re), Poly(im)


def case3_quotient(n: int) -> Poly:
    """``((r - 1/r) Im(nu) - 3 Re(nu)) / (r^2 - 1)`` with powers of ``r``
    removed, computed exactly from the locus polynomial."""
    if n % 2 == 0:
        raise ValueError("case 3 is for odd n")
    re, im = _gauss_parts(pole_locus_T_raw(n))
    comb = (Poly([-1, 0, 1]) * im - 3 * Q * re)  # r * combination
    quot = comb.exact_div(Poly([-1, 0, 1]))
    v = quot.valuation()
    return quot.shift(-v)


def constant_sign_in_r2(p: Poly) -> int:
    """``+1`` / ``-1`` if ``p`` is a polynomial in ``r^2`` whose coefficients
    all share that sign (zeros allowed), else ``0``."""
    if any(c for k, c in enumerate(p.c) if k % 2):
        return 0
    signs = {(c > 0) - (c < 0) for c in p.c[::2] if c}
    return signs.pop() if len(signs) == 1 else 0


def default_grid(lo: Fraction = Fraction(1, 20), hi: Fraction = Fraction(4),
                 step: Fraction = Fraction(1, 200)) -> list[Fraction]:
    pts = []
    k = 0
    while lo + k * step <= hi:
        pts.append(lo + k * step)
        k += 1
    return [-p for p in reversed(pts)] + pts


def nu_case_checks(n: int, grid: Iterable[Fraction] | None = None, precision: int = 60) -> dict:
    """Evaluate ``nu`` three ways on the grid and run the case-specific sign test."""
    if n < 1:
        raise ValueError("n must be at least 1")
    grid = default_grid() if grid is None else list(grid)
    if any(r == 0 for r in grid):
        raise ValueError("the grid must exclude r = 0")
    with mpmath.workdps(precision):
        worst_disp = mpmath.mpf(0)
        worst_case = mpmath.mpf(0)
        sign_ok = True
        for rf in grid:
            r = _mp(rf)
            d = nu_direct(n, r)
            v = nu_displayed(n, r)
            worst_disp = max(worst_disp, abs(d - v) / max(abs(d), mpmath.mpf(10) ** -precision))
            red = nu_case_reduced(n, r)
            ref = _case_from_nu(n, r, d)
            worst_case = max(worst_case, abs(red - ref) / max(abs(ref), abs(d), mpmath.mpf(10) ** -precision))
            if n % 4 == 2:
                sign_ok &= (red > 0) == (r > 0) and red != 0
            elif n % 4 == 0:
                if abs(rf) != 1:
                    sign_ok &= red != 0
            else:
                if abs(rf) != 1:
                    sign_ok &= red / (r * r - 1) != 0
        nu0 = nu_direct(n, mpmath.mpf(0))
        nu_p1, nu_m1 = nu_direct(n, mpmath.mpf(1)), nu_direct(n, mpmath.mpf(-1))
    rel_tol = mpmath.mpf(10) ** -30
    out = {
        "n": n,
        "case": {2: "n=2 mod 4", 0: "n=0 mod 4"}.get(n % 4, "n odd"),
        "grid_points": len(grid),
        "display_vs_direct_max_rel": mpmath.nstr(worst_disp, 5),
        "reduced_vs_direct_max_rel": mpmath.nstr(worst_case, 5),
        "reductions_agree": bool(worst_disp < rel_tol and worst_case < rel_tol),
        "nu_at_0_zero": nu0 == 0,
        "nu_at_1": _cstr(nu_p1),
        "nu_at_minus_1": _cstr(nu_m1),
        "nu_at_pm1_nonzero": nu_p1 != 0 and nu_m1 != 0,
        "grid_sign_test": bool(sign_ok),
    }
    if n % 2:
        out["case3_quotient_sign"] = constant_sign_in_r2(case3_quotient(n))
        out["case3_constant_sign"] = out["case3_quotient_sign"] != 0
    out["passed"] = bool(out["reductions_agree"] and out["nu_at_0_zero"]
                         and out["nu_at_pm1_nonzero"] and out["grid_sign_test"]
                         and out.get("case3_constant_sign", True))
    return out


def _cstr(z) -> str:
    return f"{mpmath.nstr(z.real, 10)}{'+' if z.imag >= 0 else '-'}{mpmath.nstr(abs(z.imag), 10)}i"


def nu_at_pm1_exact(n: int) -> tuple[complex, complex]:
    """Exact ``nu(1)`` and ``nu(-1)`` (Gaussian integers)."""
    p = pole_locus_T_raw(n)
    re, im = _gauss_parts(p)
    return (complex(int(re(1)), int(im(1))), complex(int(re(-1)), int(im(-1))))


# ---------------------------------------------------------------------------
# cross-family distinctness on the imaginary axis
# ---------------------------------------------------------------------------
def imaginary_axis_roots(p: Poly, precision: int = 60, slack: int = 3) -> list:
    """Roots of ``p`` whose real part is below ``10^(-precision/slack)``."""
    tol = mpmath.mpf(10) ** (-mpmath.mpf(precision) / slack)
    return [r for r in find_roots(p, precision) if abs(r.value.real) < tol]


def cross_family_distinctness(m_values: Iterable[int], n_values: Iterable[int],
                              precision: int = 60) -> dict:
    """Distance from the imaginary-axis zeros ``+-i r_m`` of ``Ybar_{2m}`` to the
    nearest root of every ``Xbar_n`` locus."""
    tol = mpmath.mpf(10) ** (-mpmath.mpf(precision) / 3)
    with mpmath.workdps(precision + 10):
        t_roots = []
        axis_hits = {}
        for n in n_values:
            p = pole_locus_T(n)
            if p.degree < 1:
                continue
            rs = find_roots(p, precision)
            t_roots.extend(r.value for r in rs)
            axis_hits[n] = sum(1 for r in rs if abs(r.value.real) < tol)
        min_dist = None
        for m in m_values:
            lo, hi = bracket_roots_f(m, Fraction(1, 10 ** 30))[1]
            rm = (_mp(lo) + _mp(hi)) / 2
            for z in (I * rm, -I * rm):
                for w in t_roots:
                    d = abs(z - w)
                    min_dist = d if min_dist is None or d < min_dist else min_dist
    return {
        "m_values": list(m_values) if not isinstance(m_values, range) else list(m_values),
        "n_values": list(n_values) if not isinstance(n_values, range) else list(n_values),
        "min_distance": mpmath.nstr(min_dist, 10) if min_dist is not None else None,
        "xbar_roots_on_axis": axis_hits,
        "passed": min_dist is not None and min_dist > tol and not any(axis_hits.values()),
    }


def kernel_true_axis_survey(n_max: int = 10, precision: int = 60) -> list[dict]:
    """Observational: imaginary-axis zeros of the kernel-true ``Abar_n`` and
    ``Bbar_n`` (series branch, i.e. the positive square root on the axis)."""
    tol = mpmath.mpf(10) ** (-mpmath.mpf(precision) / 3)
    rows = []
    with mpmath.workdps(precision + 10):
        for n in range(1, n_max + 1):
            row = {"n": n}
            for name, v in (("A", abar_kernel(n)), ("B", bbar_kernel(n))):
                p = deflate(norm_numerator(v)).polynomial
                hits = []
                if p.degree >= 1:
                    for r in find_roots(p, precision):
                        if abs(r.value.real) < tol and abs(v.evaluate(r.value, 1)) < tol:
                            hits.append(mpmath.nstr(r.value.imag, 15))
                row[f"{name}_axis_zeros"] = hits
            rows.append(row)
    return rows
