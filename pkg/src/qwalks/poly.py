"""Dense univariate polynomials with exact integer / rational coefficients.

Coefficient lists are stored low degree first.  Products of integer
sequences go through Kronecker substitution: every sequence is packed into
one big integer, multiplied once, and unpacked again.  With ``gmpy2``
installed the big multiplication runs in GMP.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Iterable, Sequence, Union

try:  # optional fast path for very large products
    from gmpy2 import mpz as _mpz
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpz = None

Number = Union[int, Fraction]

_NAIVE_CUTOFF = 12
_GMP_CUTOFF_BITS = 20_000


def norm(x: Number) -> Number:
    """Demote integral ``Fraction`` values to ``int``."""
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def trim(coeffs: Iterable[Number]) -> tuple:
    c = [norm(v) for v in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def exact_div(a: Number, b: Number) -> Number:
    if type(a) is int and type(b) is int:
        q, r = divmod(a, b)
        if r == 0:
            return q
    return norm(Fraction(a) / b)


def denominator_lcm(coeffs: Iterable[Number]) -> int:
    d = 1
    for v in coeffs:
        if type(v) is Fraction:
            d = lcm(d, v.denominator)
    return d


# -- Kronecker packing -------------------------------------------------------

@lru_cache(maxsize=256)
def _bias(count: int, nbytes: int) -> int:
    base = 1 << (8 * nbytes)
    half = base >> 1
    return half * (((1 << (8 * nbytes * count)) - 1) // (base - 1))


def _nbytes_for(bound: int) -> int:
    return (bound.bit_length() + 2) // 8 + 1


def pack(digits: Sequence[int], nbytes: int) -> int:
    """Pack signed digits (each ``|d| < 2**(8*nbytes-1)``) into one integer."""
    if not digits:
        return 0
    half = 1 << (8 * nbytes - 1)
    buf = b"".join((d + half).to_bytes(nbytes, "little") for d in digits)
    return int.from_bytes(buf, "little") - _bias(len(digits), nbytes)


def unpack(value: int, nbytes: int, count: int) -> list[int]:
    """Inverse of :func:`pack` for the lowest ``count`` digits of ``value``."""
    if count <= 0:
        return []
    width = 8 * nbytes * count
    v = (value + _bias(count, nbytes)) & ((1 << width) - 1)
    buf = v.to_bytes(nbytes * count, "little")
    half = 1 << (8 * nbytes - 1)
    return [int.from_bytes(buf[i:i + nbytes], "little") - half
            for i in range(0, nbytes * count, nbytes)]


def _bigmul(a: int, b: int) -> int:
    if _mpz is not None and a.bit_length() + b.bit_length() > _GMP_CUTOFF_BITS:
        return int(_mpz(a) * _mpz(b))
    return a * b


def _maxabs(seq: Iterable[int]) -> int:
    return max((abs(v) for v in seq), default=0)


def int_convolve(a: Sequence[int], b: Sequence[int], n: int | None = None) -> list[int]:
    """Integer convolution of ``a`` and ``b``, truncated to ``n`` terms."""
    if not a or not b:
        return []
    full = len(a) + len(b) - 1
    n = full if n is None else min(n, full)
    a = a[:n]
    b = b[:n]
    if min(len(a), len(b)) <= _NAIVE_CUTOFF:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), n - i)):
                    out[i + j] += x * b[j]
        return out
    bound = _maxabs(a) * _maxabs(b) * min(len(a), len(b))
    if bound == 0:
        return [0] * n
    nb = _nbytes_for(bound)
    prod = _bigmul(pack(a, nb), pack(b, nb))
    return unpack(prod, nb, n)


def convolve(a: Sequence[Number], b: Sequence[Number], n: int | None = None) -> list[Number]:
    """Exact convolution over Q; rationals are scaled to integers first."""
    da = denominator_lcm(a)
    db = denominator_lcm(b)
    if da == 1 and db == 1:
        return int_convolve(a, b, n)
    ia = [int(v * da) for v in a]
    ib = [int(v * db) for v in b]
    den = da * db
    return [norm(Fraction(v, den)) for v in int_convolve(ia, ib, n)]


def poly_add(a: Sequence[Number], b: Sequence[Number]) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, v in enumerate(b):
        out[i] += v
    return trim(out)


def poly_sub(a: Sequence[Number], b: Sequence[Number]) -> tuple:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, v in enumerate(b):
        out[i] -= v
    return trim(out)


def poly_scale(a: Sequence[Number], s: Number) -> tuple:
    if s == 0:
        return ()
    return tuple(norm(v * s) for v in a)


def poly_mul(a: Sequence[Number], b: Sequence[Number]) -> tuple:
    if not a or not b:
        return ()
    return trim(convolve(a, b))


def poly_divmod(a: Sequence[Number], b: Sequence[Number]) -> tuple[tuple, tuple]:
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(trim(a))
    db = len(b) - 1
    lead = b[-1]
    if len(rem) <= db:
        return (), tuple(rem)
    quot = [0] * (len(rem) - db)
    for k in range(len(rem) - 1 - db, -1, -1):
        c = rem[k + db]
        if c == 0:
            continue
        c = exact_div(c, lead)
        quot[k] = c
        for i, bv in enumerate(b):
            if bv:
                rem[k + i] -= c * bv
    return trim(quot), trim(rem[:db])


def poly_eval(a: Sequence[Number], x):
    """Horner evaluation; ``x`` may be any ring element supporting + and *."""
    if not a:
        return 0 * x
    acc = a[-1]
    for v in reversed(a[:-1]):
        acc = acc * x + v
    return acc


def packed_series_convolve(A: Sequence[Sequence[Number]],
                           B: Sequence[Sequence[Number]],
                           n: int) -> list[tuple]:
    """Truncated product of two sequences of polynomials (bivariate Kronecker).

    ``A[i]`` is the coefficient polynomial of ``t**i``.  Returns ``n``
    coefficient polynomials of the product.
    """
    A = list(A[:n])
    B = list(B[:n])
    if not A or not B:
        return [()] * n
    da = denominator_lcm(v for p in A for v in p)
    db = denominator_lcm(v for p in B for v in p)
    if da != 1:
        A = [tuple(int(v * da) for v in p) for p in A]
    if db != 1:
        B = [tuple(int(v * db) for v in p) for p in B]
    la = max(len(p) for p in A)
    lb = max(len(p) for p in B)
    if la == 0 or lb == 0:
        return [()] * n
    width = la + lb - 1
    bound = (_maxabs(v for p in A for v in p) * _maxabs(v for p in B for v in p)
             * min(la, lb) * min(len(A), len(B)))
    if bound == 0:
        return [()] * n
    nb = _nbytes_for(bound)
    zero_pad = [0] * width

    def flat(S):
        out = []
        for p in S:
            out.extend(p)
            out.extend(zero_pad[:width - len(p)])
        return out

    prod = _bigmul(pack(flat(A), nb), pack(flat(B), nb))
    blocks = min(n, len(A) + len(B) - 1)
    digits = unpack(prod, nb, width * blocks)
    den = da * db
    out = []
    for k in range(blocks):
        chunk = digits[k * width:(k + 1) * width]
        if den != 1:
            chunk = [Fraction(v, den) for v in chunk]
        out.append(trim(chunk))
    out.extend([()] * (n - blocks))
    return out


def _format_coeff(c: Number) -> str:
    return str(c) if type(c) is int else f"({c})"


class Poly:
    """Immutable univariate polynomial over Q (integer coefficients stay ``int``)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable[Number] = ()):
        if isinstance(coeffs, Poly):
            self.c = coeffs.c
        else:
            self.c = trim(coeffs)

    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c: Number = 1) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        return cls([0] * k + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self) -> Number:
        return self.c[-1] if self.c else 0

    def valuation(self) -> int:
        """Multiplicity of 0 as a root (``-1`` for the zero polynomial)."""
        for i, v in enumerate(self.c):
            if v != 0:
                return i
        return -1

    def __bool__(self) -> bool:
        return bool(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == trim((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"Poly({list(self.c)})"

    def format(self, var: str = "q") -> str:
        if not self.c:
            return "0"
        terms = []
        for k in range(len(self.c) - 1, -1, -1):
            v = self.c[k]
            if v == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if not mono:
                terms.append(_format_coeff(v))
            elif v == 1:
                terms.append(mono)
            elif v == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{_format_coeff(v)}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    __str__ = format

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly((other,))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(poly_add(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-v for v in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(poly_sub(self.c, o.c))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Poly(poly_sub(o.c, self.c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Poly(poly_scale(self.c, other))
        if isinstance(other, Poly):
            return Poly(poly_mul(self.c, other.c))
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly((1,)), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other) -> tuple["Poly", "Poly"]:
        o = self._coerce(other)
        q, r = poly_divmod(self.c, o.c)
        return Poly(q), Poly(r)

    def __floordiv__(self, other) -> "Poly":
        return divmod(self, other)[0]

    def __mod__(self, other) -> "Poly":
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if r:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        return poly_eval(self.c, x)

    def shift(self, k: int) -> "Poly":
        """Multiply by ``x**k`` (``k < 0`` drops low terms, which must vanish)."""
        if k >= 0:
            return Poly((0,) * k + self.c) if self.c else self
        if any(self.c[:-k]):
            raise ArithmeticError("shift would drop nonzero terms")
        return Poly(self.c[-k:])

    def derivative(self) -> "Poly":
        return Poly(tuple(k * v for k, v in enumerate(self.c))[1:])

    def reverse(self, degree: int | None = None) -> "Poly":
        """``x**degree * p(1/x)``."""
        d = self.degree if degree is None else degree
        return Poly(tuple(reversed(self.c + (0,) * (d - self.degree))))

    def palindromic_sign(self) -> int:
        """``+1`` / ``-1`` if ``x^d p(1/x) = ±p(x)`` with ``d = deg p``, else 0.

        Low-order zero coefficients are stripped first so that a factor
        ``x**k`` does not hide the symmetry.
        """
        core = self.shift(-self.valuation()) if self.c else self
        r = core.reverse()
        if r == core:
            return 1
        if r == -core:
            return -1
        return 0

    def content(self) -> Fraction:
        """Positive rational ``c`` with ``self / c`` primitive in Z[x]."""
        if not self.c:
            return Fraction(1)
        den = denominator_lcm(self.c)
        g = 0
        for v in self.c:
            g = gcd(g, int(v * den))
        return Fraction(g, den)

    def primitive(self) -> "Poly":
        c = self.content()
        p = Poly(tuple(norm(v / c) for v in self.c))
        return -p if p.lead < 0 else p

    def monic(self) -> "Poly":
        if not self.c:
            return self
        return self * (1 / Fraction(self.lead))

    def multiplicity(self, factor: "Poly") -> tuple[int, "Poly"]:
        """Largest ``m`` with ``factor**m | self``, and the cofactor."""
        if factor.degree < 1:
            raise ValueError("factor must be non-constant")
        m, cur = 0, self
        while cur:
            q, r = divmod(cur, factor)
            if r:
                break
            m, cur = m + 1, q
        return m, cur

    def max_abs_coeff(self) -> Number:
        return max((abs(v) for v in self.c), default=0)


X = Poly.x()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over Q (heuristic/modular gcd from sympy on primitive parts)."""
    if not a:
        return b.monic() if b else Poly()
    if not b:
        return a.monic()
    va, vb = a.valuation(), b.valuation()
    common = min(va, vb)
    a = a.shift(-va)
    b = b.shift(-vb)
    if a.degree == 0 or b.degree == 0:
        return Poly.monomial(common)
    from sympy.polys.domains import ZZ
    from sympy.polys.euclidtools import dup_gcd

    pa = [ZZ(int(v)) for v in reversed(a.primitive().c)]
    pb = [ZZ(int(v)) for v in reversed(b.primitive().c)]
    g = Poly([int(v) for v in reversed(dup_gcd(pa, pb, ZZ))])
    return g.monic().shift(common)


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> Poly:
    """The n-th cyclotomic polynomial, built by exact division."""
    if n < 1:
        raise ValueError("n must be positive")
    p = Poly.monomial(n) - 1
    for d in range(1, n):
        if n % d == 0:
            p = p.exact_div(cyclotomic(d))
    return p


def squarefree_factors(p: Poly) -> list[tuple[Poly, int]]:
    """Squarefree decomposition ``p = c * prod f_k^k`` (sympy's Yun algorithm)."""
    from sympy.polys.domains import ZZ
    from sympy.polys.sqfreetools import dup_sqf_list

    if p.degree < 1:
        return []
    coeffs = [ZZ(int(v)) for v in reversed(p.primitive().c)]
    _, factors = dup_sqf_list(coeffs, ZZ)
    return [(Poly([int(v) for v in reversed(f)]), k) for f, k in factors]
