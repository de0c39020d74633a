"""Truncated Laurent series in ``t`` with exact coefficients.

Two coefficient rings are supported:

* :class:`TruncSeries` -- rational numbers (``int`` / ``Fraction``);
* :class:`PolySeries` -- polynomials in ``x`` over Q, stored as coefficient
  tuples (low degree first).

A series is the triple ``(start, coeffs, order)``: ``coeffs[i]`` is the
coefficient of ``t**(start + i)`` and nothing is known at exponents
``>= order``.  Every operation propagates ``order`` pessimistically, so a
coefficient is never reported unless it is actually determined.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .poly import (
    Number,
    Poly,
    convolve,
    exact_div,
    norm,
    packed_series_convolve,
    poly_add,
    poly_divmod,
    poly_eval,
    poly_mul,
    poly_scale,
    poly_sub,
    trim,
)


class SeriesError(ArithmeticError):
    pass


class _Series:
    __slots__ = ("start", "coeffs", "order")

    _zero = 0

    def __init__(self, coeffs: Iterable = (), order: int = 0, start: int = 0):
        cs = [self._cnorm(c) for c in coeffs][: max(order - start, 0)]
        i = 0
        while i < len(cs) and self._cis_zero(cs[i]):
            i += 1
        if i == len(cs):
            self.start, self.coeffs = order, ()
        else:
            cs = cs[i:]
            cs.extend([self._zero] * (order - start - i - len(cs)))
            self.start, self.coeffs = start + i, tuple(cs)
        self.order = order

    # -- coefficient ring hooks (overridden) --------------------------------
    @staticmethod
    def _cnorm(c):
        return norm(c)

    @staticmethod
    def _cis_zero(c) -> bool:
        return c == 0

    @staticmethod
    def _cadd(a, b):
        return norm(a + b)

    @staticmethod
    def _csub(a, b):
        return norm(a - b)

    @staticmethod
    def _cscale(a, s):
        return norm(a * s)

    @staticmethod
    def _conv(A, B, n):
        return convolve(A, B, n)

    @staticmethod
    def _cinv(c):
        return exact_div(1, c)

    # -- construction helpers ------------------------------------------------
    @classmethod
    def _raw(cls, coeffs, order, start):
        return cls(coeffs, order, start)

    @classmethod
    def zero(cls, order: int):
        return cls((), order, order)

    @classmethod
    def one(cls, order: int):
        return cls._raw([cls._cnorm(1)], order, 0)

    @classmethod
    def t(cls, order: int):
        return cls._raw([cls._cnorm(1)], order, 1)

    # -- inspection ----------------------------------------------------------
    @property
    def valuation(self) -> int | None:
        """Lowest exponent with nonzero coefficient; ``None`` if zero to order."""
        return self.start if self.coeffs else None

    @property
    def min_exp(self) -> int:
        return self.start

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int):
        if k >= self.order:
            raise IndexError(f"coefficient of t^{k} unknown (order {self.order})")
        if k < self.start:
            return self._zero
        return self.coeffs[k - self.start]

    def coefficient_list(self, lo: int, hi: int | None = None) -> list:
        """Coefficients for exponents ``lo .. hi-1`` (``hi`` defaults to order)."""
        hi = self.order if hi is None else hi
        return [self[k] for k in range(lo, hi)]

    def truncate(self, order: int):
        if order > self.order:
            raise SeriesError("cannot raise the truncation order")
        return self._raw(self.coeffs, order, self.start)

    def first_mismatch(self, other, upto: int | None = None) -> int | None:
        """Smallest exponent below ``upto`` where the two series differ."""
        hi = min(self.order, other.order)
        if upto is not None:
            if upto > hi:
                raise SeriesError(f"comparison to {upto} exceeds known order {hi}")
            hi = upto
        lo = min(self.start, other.start)
        for k in range(lo, hi):
            if self[k] != other[k]:
                return k
        return None

    def __eq__(self, other) -> bool:
        if type(other) is not type(self):
            return NotImplemented
        return (self.order == other.order and self.start == other.start
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.start, self.coeffs, self.order))

    # -- ring operations -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, type(self)):
            return other
        if isinstance(other, (int, Fraction)):
            return self._raw([self._cnorm(other) if not isinstance(self._zero, tuple)
                              else trim((other,))], self.order, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order = min(self.order, o.order)
        start = min(self.start, o.start)
        out = []
        for k in range(start, order):
            a = self.coeffs[k - self.start] if self.start <= k < self.start + len(self.coeffs) else None
            b = o.coeffs[k - o.start] if o.start <= k < o.start + len(o.coeffs) else None
            if a is None:
                out.append(self._zero if b is None else b)
            elif b is None:
                out.append(a)
            else:
                out.append(self._cadd(a, b))
        return self._raw(out, order, start)

    __radd__ = __add__

    def __neg__(self):
        return self._raw([self._cscale(c, -1) for c in self.coeffs], self.order, self.start)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def _scale(self, s: Number):
        return self._raw([self._cscale(c, s) for c in self.coeffs], self.order, self.start)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        va = self.start if self.coeffs else self.order
        vb = o.start if o.coeffs else o.order
        order = min(self.order + vb, o.order + va)
        if not self.coeffs or not o.coeffs:
            return self.zero(order)
        n = order - va - vb
        return self._raw(self._conv(self.coeffs, o.coeffs, n), order, va + vb)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Fraction(1) / other)
        return self * other.reciprocal()

    def __pow__(self, k: int):
        if k < 0:
            return self.reciprocal() ** (-k)
        result = None
        base = self
        while k:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if k:
                base = base * base
        if result is None:
            rel = self.order - (self.start if self.coeffs else 0)
            return self.one(rel)
        return result

    def shift(self, k: int):
        """Multiply by ``t**k``."""
        return self._raw(self.coeffs, self.order + k, self.start + k)

    def reciprocal(self):
        """``1/a`` by Newton iteration; ``order(1/a) = order(a) - 2*val(a)``."""
        if not self.coeffs:
            raise ZeroDivisionError("reciprocal of a series that is zero to its order")
        v = self.start
        p = self.order - v
        u = list(self.coeffs[:p])
        w = [self._cinv(u[0])]
        prec = 1
        two = [self._cnorm(2)]
        while prec < p:
            prec = min(2 * prec, p)
            e = self._conv(u[:prec], w, prec)
            corr = [self._csub(two[0] if i == 0 else self._zero, e[i]) if i < len(e)
                    else (two[0] if i == 0 else self._zero) for i in range(prec)]
            w = self._conv(w, corr, prec)
        return self._raw(w, self.order - 2 * v, -v)

    def sqrt_one_plus(self):
        """``sqrt(1 + a)`` for ``a`` of positive valuation, constant term 1."""
        if self.coeffs and self.start <= 0:
            raise SeriesError("sqrt_one_plus needs an argument of positive valuation")
        n = self.order
        if n <= 0:
            raise SeriesError("sqrt_one_plus needs order >= 1")
        a = [self[k] for k in range(n)]
        r = [self._cnorm(1)] + [self._zero] * (n - 1)
        half = Fraction(1, 2)
        for k in range(1, n):
            acc = a[k]
            for j in range(1, k):
                if not self._cis_zero(r[j]) and not self._cis_zero(r[k - j]):
                    acc = self._csub(acc, self._cmul(r[j], r[k - j]))
            r[k] = self._cscale(acc, half)
        return self._raw(r, n, 0)

    @staticmethod
    def _cmul(a, b):
        return norm(a * b)


class TruncSeries(_Series):
    """Truncated Laurent series with rational coefficients."""

    __slots__ = ()

    def __repr__(self) -> str:
        return f"TruncSeries({list(self.coeffs)}, order={self.order}, start={self.start})"

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "t") -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            e = self.start + i
            mono = "" if e == 0 else (var if e == 1 else f"{var}^{e}")
            cs = str(c)
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(cs + (f"*{mono}" if mono else ""))
        terms.append(f"O({var}^{self.order})")
        return " + ".join(terms).replace("+ -", "- ")

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[Number], order: int | None = None,
                    start: int = 0) -> "TruncSeries":
        order = start + len(coeffs) if order is None else order
        return cls(coeffs, order, start)

    def partial_sum(self, t: Number) -> Number:
        """Sum of all known terms at a rational point ``t``."""
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            total += c * Fraction(t) ** (self.start + i)
        return norm(total)

    def to_json(self) -> dict:
        return {
            "min_exp": self.start,
            "order": self.order,
            "coeffs": [[self.start + i, _ratstr(c)] for i, c in enumerate(self.coeffs)
                       if c != 0],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "TruncSeries":
        if isinstance(data, str):
            data = json.loads(data)
        order = data["order"]
        terms = {e: Fraction(c) for e, c in data["coeffs"]}
        if not terms:
            return cls.zero(order)
        lo = min(terms)
        return cls([terms.get(e, 0) for e in range(lo, order)], order, lo)


def _ratstr(c: Number) -> str:
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


class PolySeries(_Series):
    """Truncated Laurent series in ``t`` whose coefficients are polynomials in ``x``."""

    __slots__ = ()

    _zero = ()

    @staticmethod
    def _cnorm(c):
        if isinstance(c, Poly):
            return c.c
        if isinstance(c, (int, Fraction)):
            return trim((c,))
        return trim(c)

    @staticmethod
    def _cis_zero(c) -> bool:
        return not c

    @staticmethod
    def _cadd(a, b):
        return poly_add(a, b)

    @staticmethod
    def _csub(a, b):
        return poly_sub(a, b)

    @staticmethod
    def _cscale(a, s):
        return poly_scale(a, s)

    @staticmethod
    def _cmul(a, b):
        return poly_mul(a, b)

    @staticmethod
    def _conv(A, B, n):
        return packed_series_convolve(A, B, n)

    @staticmethod
    def _cinv(c):
        if len(c) != 1:
            raise SeriesError("leading coefficient is not an invertible constant")
        return (exact_div(1, c[0]),)

    def _coerce(self, other):
        if isinstance(other, TruncSeries):
            return PolySeries.from_trunc(other)
        if isinstance(other, Poly):
            return PolySeries([other.c], self.order, 0) if self.order > 0 else PolySeries.zero(self.order)
        return super()._coerce(other)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return self.mul_poly(other)
        return super().__mul__(other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return (f"PolySeries({[list(c) for c in self.coeffs]}, order={self.order}, "
                f"start={self.start})")

    def __str__(self) -> str:
        return self.format()

    def format(self, var: str = "x", tvar: str = "t") -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            e = self.start + i
            mono = "" if e == 0 else (tvar if e == 1 else f"{tvar}^{e}")
            body = Poly(c).format(var)
            terms.append(f"({body})" + (f"*{mono}" if mono else ""))
        terms.append(f"O({tvar}^{self.order})")
        return " + ".join(terms)

    @classmethod
    def from_trunc(cls, s: TruncSeries) -> "PolySeries":
        return cls([trim((c,)) for c in s.coeffs], s.order, s.start)

    @classmethod
    def x_times(cls, s: TruncSeries | None = None, order: int = 0) -> "PolySeries":
        """``x`` (or ``x * s``) as a polynomial series."""
        if s is None:
            return cls([(0, 1)], order, 0)
        return cls([(0, c) for c in s.coeffs], s.order, s.start)

    def coefficient(self, k: int) -> Poly:
        return Poly(self[k])

    def x_degree(self) -> int:
        return max((len(c) - 1 for c in self.coeffs), default=-1)

    def mul_poly(self, p: Poly) -> "PolySeries":
        return PolySeries([poly_mul(c, p.c) for c in self.coeffs], self.order, self.start)

    def exact_div_poly(self, p: Poly) -> "PolySeries":
        out = []
        for k, c in enumerate(self.coeffs):
            q, r = poly_divmod(c, p.c)
            if r:
                raise SeriesError(f"{p} does not divide coefficient of t^{self.start + k}")
            out.append(q)
        return PolySeries(out, self.order, self.start)

    def eval_at_x(self, value: Number) -> TruncSeries:
        """Specialise ``x = value`` (a ring homomorphism onto :class:`TruncSeries`)."""
        return TruncSeries([poly_eval(c, value) if c else 0 for c in self.coeffs],
                           self.order, self.start)

    def compose_inner(self, g: "_Series") -> "_Series":
        """Substitute the series ``g`` (valuation >= 1) for ``x``.

        Returns the same kind as ``g``.
        """
        if isinstance(g, TruncSeries):
            g = PolySeries.from_trunc(g)
            back = True
        else:
            back = False
        if g.coeffs and g.start < 1:
            raise SeriesError("inner series must have t-valuation >= 1")
        vg = g.start if g.coeffs else g.order
        order = self.order
        for k, c in enumerate(self.coeffs):
            e = self.start + k
            for j in range(1, len(c)):
                if c[j]:
                    order = min(order, e + g.order + (j - 1) * vg)
                    break
        # g**j contributes at exponents >= start + j*vg; stop once past order
        powers = [None, g]
        for j in range(2, self.x_degree() + 1):
            if self.start + j * vg >= order:
                break
            powers.append(powers[-1] * g)
        out: dict[int, tuple] = {}
        for k, c in enumerate(self.coeffs):
            e = self.start + k
            for j, cj in enumerate(c):
                if not cj:
                    continue
                if j == 0:
                    out[e] = poly_add(out.get(e, ()), (cj,))
                    continue
                if j >= len(powers):
                    break
                gp = powers[j]
                for i, pc in enumerate(gp.coeffs):
                    ee = e + gp.start + i
                    if ee >= order:
                        break
                    if pc:
                        out[ee] = poly_add(out.get(ee, ()), poly_scale(pc, cj))
        if out:
            lo = min(out)
            res = PolySeries([out.get(k, ()) for k in range(lo, order)], order, lo)
        else:
            res = PolySeries.zero(order)
        if back:
            return res.eval_at_x(0)
        return res

    def to_json(self) -> dict:
        return {
            "min_exp": self.start,
            "order": self.order,
            "coeffs": [[self.start + i, [_ratstr(v) for v in c]]
                       for i, c in enumerate(self.coeffs) if c],
        }
