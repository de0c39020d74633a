"""Kernel roots, their iterates, and the alternating-sum generating functions.

Both models are written in kernel form ``K(x, y) Q(x, y) = xy - ...`` with

* set S (NW, NE, SE):  ``K = xy - t(x^2 y^2 + x^2 + y^2)``
* set T (NW, N, SE):   ``K = xy - t(x y^2 + x^2 + y^2)``

The small root ``Y_1(x)`` is ``x t + O(t^2)``; iterating it (and for T the
small ``x``-root ``X_1(y)``) telescopes the boundary unknowns into an
alternating sum.  Iterates are produced either by the reciprocal recurrence
on ``P_n = x / Y_n`` (cheap, used for deep sums) or by honest series
composition (expensive, used as an independent check).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly
from .series import PolySeries, SeriesError, TruncSeries

ONE_PLUS_X2 = Poly([1, 0, 1])
ONE_PLUS_X = Poly([1, 1])


class Family(enum.Enum):
    SET_S = "S"
    SET_T = "T"


class Mode(enum.Enum):
    SYMBOLIC_X = "SymbolicX"
    AT_X1 = "AtX1"


class Rule(enum.Enum):
    RECURRENCE = "recurrence"
    COMPOSITION = "composition"


@dataclass(frozen=True)
class LaurentRoot:
    """A large kernel root ``numerator / denominator`` with ``denominator`` a
    polynomial in the free variable and ``numerator`` of valuation -1."""

    numerator: PolySeries
    denominator: Poly


@dataclass(frozen=True)
class KernelRoots:
    y_plus: PolySeries
    y_minus: LaurentRoot
    x_plus: PolySeries | None = None
    x_minus: LaurentRoot | None = None


@dataclass(frozen=True)
class IterateFamily:
    tag: str
    mode: Mode
    rule: Rule
    entries: list = field(default_factory=list)

    def __getitem__(self, n: int):
        return self.entries[n]

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class IdentityResult:
    identity: str
    order: int
    passed: bool
    first_mismatch_exponent: int | None = None

    def to_json(self) -> dict:
        out = {"identity": self.identity, "order": self.order,
               "status": "pass" if self.passed else "fail"}
        if self.first_mismatch_exponent is not None:
            out["first_mismatch_exponent"] = self.first_mismatch_exponent
        return out


def _check(name: str, lhs, rhs, order: int) -> IdentityResult:
    upto = min(order, lhs.order, rhs.order)
    bad = lhs.first_mismatch(rhs, upto)
    return IdentityResult(name, upto, bad is None, bad)


class KernelModel:
    """Kernel data for one of the two step sets at a fixed truncation order.

    ``order`` is the number of ``t``-coefficients the generating functions
    are reconstructed to: results are exact for exponents ``< order``.
    """

    def __init__(self, family: Family | str, order: int):
        self.family = Family(family)
        if order < 1:
            raise ValueError("order must be positive")
        self.order = order
        self._roots: dict[int, KernelRoots] = {}

    def __repr__(self) -> str:
        return f"KernelModel({self.family.value}, order={self.order})"

    # -- the kernel itself ---------------------------------------------------
    def kernel(self, x, y, t_order: int):
        """``K(x, y)`` for series (or polynomial) arguments."""
        t = TruncSeries.t(t_order)
        if self.family is Family.SET_S:
            return x * y - t * (x * x * y * y + x * x + y * y)
        return x * y - t * (x * y * y + x * x + y * y)

    def kernel_cleared(self, x, y, den_x: Poly | None = None, den_y: Poly | None = None,
                       t_order: int | None = None):
        """``K(x/dx, y/dy)`` multiplied through by ``dx^2 dy^2``."""
        o = t_order if t_order is not None else self.order
        t = TruncSeries.t(o)
        dx = den_x if den_x is not None else Poly([1])
        dy = den_y if den_y is not None else Poly([1])
        dx2, dy2 = dx * dx, dy * dy
        xx, yy = x * x, y * y
        if self.family is Family.SET_S:
            return (x * y) * (dx * dy) - t * (xx * yy + (xx * dy2) + (yy * dx2))
        return (x * y) * (dx * dy) - t * ((x * yy) * dx + (xx * dy2) + (yy * dx2))

    # -- roots ---------------------------------------------------------------
    def kernel_roots(self, order: int | None = None) -> KernelRoots:
        """Small roots as polynomial series, large roots as Laurent data."""
        o = self.order + 2 if order is None else order
        if o in self._roots:
            return self._roots[o]
        t = TruncSeries.t(o + 2)
        x = PolySeries.x_times(TruncSeries.one(o + 2))
        if self.family is Family.SET_S:
            u = ONE_PLUS_X2
        else:
            u = ONE_PLUS_X
        # Y_1 = x (1 - sqrt(1 - 4t^2 u)) / (2 t u)
        arg = (PolySeries.from_trunc(t * t) * u) * -4
        num = 1 - arg.sqrt_one_plus()
        y_plus = (num.exact_div_poly(u) * x).shift(-1) * Fraction(1, 2)
        y_plus = y_plus.truncate(o)
        # Y_{-1} = x / (t u) - Y_1, carried as (x/t - u Y_1) / u
        y_minus = LaurentRoot((x.truncate(o + 1).shift(-1) - y_plus * u).truncate(o - 1), u)
        x_plus = x_minus = None
        if self.family is Family.SET_T:
            y = x
            # X_1 = y ((1 - t y) - sqrt((1 - t y)^2 - 4 t^2)) / (2t)
            ty = PolySeries.from_trunc(t) * y
            disc = (ty * ty - 2 * ty) - PolySeries.from_trunc(t * t) * 4
            num = (1 - ty) - disc.sqrt_one_plus()
            x_plus = ((num * y).shift(-1) * Fraction(1, 2)).truncate(o)
            # X_{-1} = y/t - y^2 - X_1, a Laurent series with no denominator
            x_minus = LaurentRoot((y.truncate(o + 1).shift(-1) - y * y - x_plus).truncate(o - 1),
                                  Poly([1]))
        roots = KernelRoots(y_plus, y_minus, x_plus, x_minus)
        self._roots[o] = roots
        return roots

    def small_root_over_var(self, which: str = "Y", order: int | None = None) -> PolySeries:
        """``Y_1(x)/x`` (or ``X_1(y)/y``), a power series of valuation 1."""
        roots = self.kernel_roots(order)
        s = roots.y_plus if which == "Y" else roots.x_plus
        if s is None:
            raise ValueError("set S has no separate x-root")
        return s.exact_div_poly(Poly([0, 1]))

    # -- identities ----------------------------------------------------------
    def verify_root_identities(self, order: int | None = None) -> list[IdentityResult]:
        o = self.order if order is None else order
        roots = self.kernel_roots(o + 2)
        x = PolySeries.x_times(TruncSeries.one(o + 4))
        t_inv = TruncSeries([1], o + 4, -1)
        res: list[IdentityResult] = []
        yp, ym = roots.y_plus, roots.y_minus
        zero = PolySeries.zero(o)

        res.append(_check("K(x, Y_{+1}(x)) = 0", self.kernel(x, yp, o + 4), zero, o))
        res.append(_check("K(x, Y_{-1}(x)) = 0",
                          self.kernel_cleared(x, ym.numerator, None, ym.denominator, o + 4),
                          zero, o))
        # 1/Y_1 + 1/Y_{-1} = 1/(tx), multiplied through by x
        p1 = self.small_root_over_var("Y", o + 2).reciprocal()
        r1 = ym.numerator.exact_div_poly(Poly([0, 1]))
        lhs = p1 + r1.reciprocal() * ym.denominator
        res.append(_check("1/Y_{+1}(x) + 1/Y_{-1}(x) = 1/(tx)", lhs,
                          PolySeries.from_trunc(t_inv), o))
        if self.family is Family.SET_S:
            # Y_{-1}(Y_{+1}(x)) = x by composition: Y_{-1}(y) = y/(t(1+y^2)) - Y_1(y)
            comp = (yp * (yp * yp + 1).reciprocal()).shift(-1) - yp.compose_inner(yp)
            res.append(_check("Y_{-1}(Y_{+1}(x)) = x", comp, x, o))
            # the reverse composition is not a formal power series; its content
            # is that x is a root of K(Y_{-1}(x), .), checked by annihilation
            res.append(_check("Y_{+1}(Y_{-1}(x)) = x  [via K(Y_{-1}(x), x) = 0]",
                              self.kernel_cleared(ym.numerator, x, ym.denominator, None, o + 4),
                              zero, o))
        else:
            xp, xm = roots.x_plus, roots.x_minus
            y = x
            res.append(_check("K(X_{+1}(y), y) = 0", self.kernel(xp, y, o + 4), zero, o))
            res.append(_check("K(X_{-1}(y), y) = 0",
                              self.kernel_cleared(xm.numerator, y, None, None, o + 4), zero, o))
            q1 = self.small_root_over_var("X", o + 2).reciprocal()
            lhs = q1 + xm.numerator.exact_div_poly(Poly([0, 1])).reciprocal()
            rhs = PolySeries.from_trunc(t_inv) - y
            res.append(_check("1/X_{+1}(y) + 1/X_{-1}(y) = 1/(ty) - 1", lhs, rhs, o))
            # X_{-1}(Y_{+1}(x)) = x:  X_{-1}(y) = y/t - y^2 - X_1(y)
            comp = yp.shift(-1) - yp * yp - xp.compose_inner(yp)
            res.append(_check("X_{-1}(Y_{+1}(x)) = x", comp, x, o))
            # Y_{-1}(X_{+1}(y)) = y:  Y_{-1}(x) = x/(t(1+x)) - Y_1(x)
            comp = (xp * (xp + 1).reciprocal()).shift(-1) - yp.compose_inner(xp)
            res.append(_check("Y_{-1}(X_{+1}(y)) = y", comp, y, o))
            res.append(_check("X_{+1}(Y_{-1}(x)) = x  [via K(x, Y_{-1}(x)) = 0]",
                              self.kernel_cleared(x, ym.numerator, None, ym.denominator, o + 4),
                              zero, o))
            res.append(_check("Y_{+1}(X_{-1}(y)) = y  [via K(X_{-1}(y), y) = 0]",
                              self.kernel_cleared(xm.numerator, y, None, None, o + 4), zero, o))
        return res

    # -- iterates ------------------------------------------------------------
    def _parity_defect(self, tag: str, n: int) -> bool:
        """Whether ``1/I_{n+1} + 1/I_{n-1} = 1/(t I_n)`` carries an extra ``-1``.

        The extra term appears exactly when ``I_n`` sits in the y-slot of the
        kernel of set T, i.e. odd ``n`` for the A family and even ``n`` for B.
        """
        if tag == "Y":
            return False
        return (n % 2 == 1) if tag == "A" else (n % 2 == 0)

    def iterates(self, count: int, mode: Mode | str = Mode.AT_X1, rule: Rule | str = Rule.RECURRENCE,
                 tag: str | None = None, order: int | None = None) -> IterateFamily:
        """``I_0 .. I_count`` for ``tag`` in ``Y`` (set S), ``A`` or ``B`` (set T)."""
        mode, rule = Mode(mode), Rule(rule)
        if tag is None:
            tag = "Y" if self.family is Family.SET_S else "A"
        if (tag == "Y") != (self.family is Family.SET_S) or tag not in "YAB":
            raise ValueError(f"iterate family {tag} does not belong to set {self.family.value}")
        if count < 1:
            raise ValueError("count must be at least 1")
        o = self.order + 1 if order is None else order
        if rule is Rule.RECURRENCE:
            entries = self._iterates_recurrence(count, mode, tag, o)
        else:
            entries = self._iterates_composition(count, mode, tag, o)
        return IterateFamily(tag, mode, rule, entries)

    def _first_over_var(self, tag: str, o: int) -> PolySeries:
        return self.small_root_over_var("X" if tag == "B" else "Y", o)

    def _iterates_recurrence(self, count: int, mode: Mode, tag: str, o: int,
                             targets: list[int] | None = None) -> list:
        """``targets[n]``, if given, caps the absolute order wanted for ``I_n``;
        ``P_n`` has valuation ``-n`` so it is cut to ``targets[n] - 2n`` before
        inversion."""
        f1 = self._first_over_var(tag, o)
        var = PolySeries.x_times(TruncSeries.one(o + 2 * count + 2))
        if mode is Mode.AT_X1:
            f1 = f1.eval_at_x(1)
            var = TruncSeries.one(o + 2 * count + 2)
            one = var
        else:
            one = PolySeries.one(o + 2 * count + 2)
        # P_n = var / I_n
        P = [one, f1.reciprocal()]
        for n in range(1, count):
            nxt = P[n].shift(-1) - P[n - 1]
            if self._parity_defect(tag, n):
                nxt = nxt - var
            P.append(nxt)
        out = [var.truncate(o)]
        for n, p in enumerate(P[1:], 1):
            if targets is not None:
                p = p.truncate(min(p.order, max(targets[n] - 2 * n, 1 - n)))
            out.append(var * p.reciprocal())
        return out

    def _iterates_composition(self, count: int, mode: Mode, tag: str, o: int) -> list:
        roots = self.kernel_roots(o)
        var = PolySeries.x_times(TruncSeries.one(o))
        ent = [var]
        for n in range(count):
            if tag == "Y":
                f = roots.y_plus
            elif tag == "A":
                f = roots.y_plus if n % 2 == 0 else roots.x_plus
            else:
                f = roots.x_plus if n % 2 == 0 else roots.y_plus
            ent.append(f.compose_inner(ent[-1]) if n else f)
        if mode is Mode.AT_X1:
            return [e.eval_at_x(1) for e in ent]
        return ent

    # -- generating functions ------------------------------------------------
    def alternating_sum(self, tag: str, mode: Mode | str = Mode.AT_X1,
                        order: int | None = None):
        """``sum_n (-1)^n I_n I_{n+1}`` exact for exponents ``< order``.

        Term ``n`` has valuation ``2n + 1``, so terms are added until that
        reaches the target order (valuation bookkeeping, not a fixed count).
        """
        mode = Mode(mode)
        o = self.order + 1 if order is None else order
        count = o // 2 + 1
        # I_n I_{n+1} needs I_n to absolute order o - (n + 1) and I_{n+1} to o - n
        targets = [o - n + 1 for n in range(count + 1)]
        fam = self._iterates_recurrence(count, mode, tag, o + 1, targets)
        total = None
        for n in range(count):
            if 2 * n + 1 >= o:
                break
            term = fam[n] * fam[n + 1]
            if n % 2:
                term = -term
            total = term if total is None else total + term
        return total.truncate(o)

    def _boundary(self, tag: str, mode: Mode | str, order: int | None):
        o = self.order if order is None else order
        s = self.alternating_sum(tag, mode, o + 1).shift(-1)
        if Mode(mode) is Mode.AT_X1:
            return s.truncate(o)
        return s.exact_div_poly(Poly([0, 0, 1])).truncate(o)

    def q_x0(self, mode: Mode | str = Mode.SYMBOLIC_X, order: int | None = None):
        """``Q(x, 0)`` (symbolic) or ``Q(1, 0)`` (``mode=AtX1``)."""
        return self._boundary("Y" if self.family is Family.SET_S else "A", mode, order)

    def q_0y(self, mode: Mode | str = Mode.SYMBOLIC_X, order: int | None = None):
        """``Q(0, y)``; for set S this equals ``Q(y, 0)`` by symmetry."""
        if self.family is Family.SET_S:
            return self.q_x0(mode, order)
        return self._boundary("B", mode, order)

    def q_11(self, order: int | None = None) -> TruncSeries:
        """The counting series ``W(t) = Q(1, 1)``."""
        o = self.order if order is None else order
        geo = TruncSeries([Fraction(3) ** k for k in range(o)], o)
        if self.family is Family.SET_S:
            num = 1 - 2 * self.alternating_sum("Y", Mode.AT_X1, o)
        else:
            num = 1 - self.alternating_sum("A", Mode.AT_X1, o) \
                - self.alternating_sum("B", Mode.AT_X1, o)
        return (num * geo).truncate(o)


def telescoped_q_x0(model: KernelModel, N: int, oracle_q_x0: PolySeries,
                    order: int) -> PolySeries:
    """Partial sum of ``N`` terms plus the exact remainder
    ``(-1)^N (Y_N/x)^2 Q(Y_N, 0)`` with ``Q(., 0)`` taken from the oracle."""
    if model.family is not Family.SET_S:
        raise ValueError("the telescoped form is stated for set S")
    fam = model.iterates(max(N, 1), Mode.SYMBOLIC_X, Rule.RECURRENCE, "Y", order + 2)
    head = None
    for n in range(N):
        term = fam[n] * fam[n + 1]
        term = -term if n % 2 else term
        head = term if head is None else head + term
    x2 = Poly([0, 0, 1])
    yn_over_x = fam[N].exact_div_poly(Poly([0, 1]))
    rem = yn_over_x * yn_over_x * oracle_q_x0.compose_inner(fam[N]) if N else oracle_q_x0
    rem = -rem if N % 2 else rem
    if head is None:
        return rem.truncate(order)
    return (head.shift(-1).exact_div_poly(x2) + rem).truncate(order)


def check_against_oracle(model: KernelModel, table, order: int | None = None) -> list[IdentityResult]:
    """Compare ``q_11``, ``q_x0`` and ``q_0y`` with the enumerator's series."""
    from .enumerator import Axis, series_W, series_boundary_poly

    o = model.order if order is None else order
    o = min(o, table.n_max + 1)
    out = [_check("Q(1,1) = W(t)", model.q_11(o), series_W(table), o)]
    qx = model.q_x0(Mode.SYMBOLIC_X, o)
    out.append(_check("Q(x,0) symbolic", qx, series_boundary_poly(table, Axis.X_AXIS), o))
    qy = model.q_0y(Mode.SYMBOLIC_X, o)
    out.append(_check("Q(0,y) symbolic", qy, series_boundary_poly(table, Axis.Y_AXIS), o))
    return out

