"""Dense polynomials over arbitrary-precision integers.

Coefficients are stored exponent-indexed (``coeffs[n]`` multiplies ``z**n``)
with trailing zeros stripped, so the zero polynomial is the empty tuple and
its degree is ``None``.  Everything here is exact; rational helpers at the
bottom of the module work on lists of :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import PolynomialError

KARATSUBA_THRESHOLD = 40


@dataclass(frozen=True)
class RationalComplex:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value) -> "RationalComplex":
        if isinstance(value, RationalComplex):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return RationalComplex(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-RationalComplex.coerce(other))

    def __rsub__(self, other):
        return RationalComplex.coerce(other) - self

    def __mul__(self, other):
        other = RationalComplex.coerce(other)
        return RationalComplex(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = RationalComplex.coerce(other)
        den = other.abs2()
        if den == 0:
            raise ZeroDivisionError("division by zero")
        num = self * other.conjugate()
        return RationalComplex(num.re / den, num.im / den)

    def __pow__(self, k: int):
        if k < 0:
            return RationalComplex(1) / (self ** -k)
        result, base = RationalComplex(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "RationalComplex":
        return RationalComplex(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        sign = "+" if self.im >= 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _strip(coeffs: list) -> tuple:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def _add_lists(a: Sequence[int], b: Sequence[int]) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return out


def _sub_lists(a: Sequence[int], b: Sequence[int]) -> list:
    out = list(a) + [0] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return out


def _schoolbook(a: Sequence[int], b: Sequence[int]) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _karatsuba(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    if len(a) < len(b):
        a, b = b, a
    if len(b) < KARATSUBA_THRESHOLD:
        return _schoolbook(a, b)
    out = [0] * (len(a) + len(b) - 1)
    if len(a) >= 2 * len(b):
        # unbalanced operands: multiply b against chunks of a
        for start in range(0, len(a), len(b)):
            for i, c in enumerate(_karatsuba(a[start:start + len(b)], b)):
                out[start + i] += c
        return out
    half = len(a) // 2
    a0, a1 = a[:half], a[half:]
    b0, b1 = b[:half], b[half:]
    z0 = _karatsuba(a0, b0)
    z2 = _karatsuba(a1, b1)
    z1 = _sub_lists(_sub_lists(_karatsuba(_add_lists(a0, a1), _add_lists(b0, b1)), z0), z2)
    for i, c in enumerate(z0):
        out[i] += c
    for i, c in enumerate(z1):
        if c:
            out[i + half] += c
    for i, c in enumerate(z2):
        out[i + 2 * half] += c
    return out


class IntPolynomial:
    """Immutable dense polynomial with integer coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        cs = []
        for c in coeffs:
            if isinstance(c, bool) or int(c) != c:
                raise PolynomialError(f"non-integer coefficient {c!r}")
            cs.append(int(c))
        object.__setattr__(self, "coeffs", _strip(cs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPolynomial is immutable")

    @classmethod
    def monomial(cls, n: int, c: int = 1) -> "IntPolynomial":
        return cls([0] * n + [c])

    @classmethod
    def from_strings(cls, items: Iterable[str]) -> "IntPolynomial":
        return cls(int(s) for s in items)

    def to_strings(self) -> list:
        return [str(c) for c in self.coeffs]

    # -- basic structure --------------------------------------------------
    @property
    def degree(self) -> Optional[int]:
        return len(self.coeffs) - 1 if self.coeffs else None

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, n: int) -> int:
        if 0 <= n < len(self.coeffs):
            return self.coeffs[n]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == _strip([other])
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPolynomial({list(self.coeffs)})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if n == 0:
                body = str(mag)
            else:
                body = ("" if mag == 1 else f"{mag}*") + ("z" if n == 1 else f"z^{n}")
            terms.append(("-" if c < 0 else "+", body))
        sign, body = terms[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def support(self) -> list:
        return [n for n, c in enumerate(self.coeffs) if c != 0]

    # -- arithmetic ---------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        return IntPolynomial(_add_lists(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = _coerce(other)
        return IntPolynomial(_sub_lists(self.coeffs, other.coeffs))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        other = _coerce(other)
        return IntPolynomial(_karatsuba(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolynomialError("negative power")
        result = IntPolynomial([1])
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def shift(self, t: int) -> "IntPolynomial":
        """Multiply by ``z**t``."""
        if not self.coeffs:
            return self
        return IntPolynomial([0] * t + list(self.coeffs))

    def truncate(self, n: int) -> "IntPolynomial":
        """Drop every term of degree > n."""
        return IntPolynomial(self.coeffs[: n + 1])

    def derivative(self, m: int = 1) -> "IntPolynomial":
        if m < 0:
            raise PolynomialError("negative derivative order")
        cs = list(self.coeffs)
        for _ in range(m):
            cs = [n * c for n, c in enumerate(cs)][1:]
        return IntPolynomial(cs)

    def compose(self, inner: "IntPolynomial", truncate_at: Optional[int] = None) -> "IntPolynomial":
        """Return ``self(inner(z))``, optionally truncated to degree ``truncate_at``."""
        result = IntPolynomial()
        for c in reversed(self.coeffs):
            result = result * inner + c
            if truncate_at is not None:
                result = result.truncate(truncate_at)
        return result

    # -- size measures ------------------------------------------------------
    def length(self) -> int:
        return sum(abs(c) for c in self.coeffs)

    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def content(self) -> int:
        return reduce(gcd, self.coeffs, 0)

    def primitive_part(self, anchor: str = "top") -> "IntPolynomial":
        """Divide out the content; the coefficient at ``anchor`` ("top" or "low"
        for the lowest nonzero term) is made positive."""
        if not self.coeffs:
            raise PolynomialError("primitive part of the zero polynomial")
        g = self.content()
        ref = self.leading if anchor == "top" else next(c for c in self.coeffs if c)
        if ref < 0:
            g = -g
        return IntPolynomial(c // g for c in self.coeffs)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, z):
        return self.eval_exact(z) if isinstance(z, RationalComplex) else _horner(self.coeffs, z)

    def eval_exact(self, z) -> RationalComplex:
        z = RationalComplex.coerce(z)
        re, im = Fraction(0), Fraction(0)
        for c in reversed(self.coeffs):
            re, im = re * z.re - im * z.im + c, re * z.im + im * z.re
        return RationalComplex(re, im)

    def exponent_gcd_split(self):
        """Return ``(d, q)`` with ``d`` the gcd of the support and ``q(z**d) == self``."""
        if not self.coeffs:
            raise PolynomialError("undefined gcd: zero polynomial")
        exps = [n for n in self.support() if n > 0]
        d = reduce(gcd, exps, 0) or 1
        return d, IntPolynomial(self.coeffs[::d])


def _coerce(value) -> IntPolynomial:
    if isinstance(value, IntPolynomial):
        return value
    if isinstance(value, int):
        return IntPolynomial([value])
    raise TypeError(f"cannot use {type(value).__name__} as a polynomial")


def _horner(coeffs, z):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * z + c
    return acc


Z = IntPolynomial([0, 1])


# Functional aliases -------------------------------------------------------

def mul(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    return p * q


def power(p: IntPolynomial, k: int) -> IntPolynomial:
    return p ** k


def derivative(p: IntPolynomial, m: int) -> IntPolynomial:
    return p.derivative(m)


def length(p: IntPolynomial) -> int:
    return p.length()


def height(p: IntPolynomial) -> int:
    return p.height()


def eval_exact(p: IntPolynomial, z) -> RationalComplex:
    return p.eval_exact(z)


def exponent_gcd_split(p: IntPolynomial):
    return p.exponent_gcd_split()


def primitive_part(p: IntPolynomial) -> IntPolynomial:
    """Content removed, lowest-order nonzero coefficient positive (2 - 4z -> 1 - 2z).

    Minimal polynomials use ``p.primitive_part()`` instead, which makes the
    top coefficient positive.
    """
    return p.primitive_part("low")


def product(polys: Iterable[IntPolynomial]) -> IntPolynomial:
    return reduce(lambda a, b: a * b, polys, IntPolynomial([1]))


# Rational polynomial helpers ----------------------------------------------
# Rational polynomials are plain lists of Fractions, exponent-indexed,
# trailing zeros stripped.

def qstrip(cs) -> list:
    return list(_strip([Fraction(c) for c in cs]))


def qdivmod(num, den):
    """Division with remainder over the rationals."""
    num = qstrip(num)
    den = qstrip(den)
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    if len(num) < len(den):
        return [], num
    quot = [Fraction(0)] * (len(num) - len(den) + 1)
    rem = list(num)
    lead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        c = rem[shift + len(den) - 1] / lead
        quot[shift] = c
        if c:
            for i, d in enumerate(den):
                rem[shift + i] -= c * d
    return qstrip(quot), qstrip(rem[: len(den) - 1])


def qmul(a, b) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return qstrip(out)


def qgcd(a, b) -> list:
    """Monic gcd over the rationals (``[]`` when both inputs vanish)."""
    a, b = qstrip(a), qstrip(b)
    while b:
        a, b = b, qdivmod(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [c / lead for c in a]


def to_integer_poly(cs) -> IntPolynomial:
    """Clear denominators of a rational polynomial and return its primitive part."""
    cs = qstrip(cs)
    if not cs:
        return IntPolynomial()
    den = 1
    for c in cs:
        den = den * c.denominator // gcd(den, c.denominator)
    return IntPolynomial(int(c * den) for c in cs).primitive_part()


def divides(divisor: IntPolynomial, p: IntPolynomial) -> bool:
    """True iff ``divisor`` divides ``p`` in Q[z]."""
    if divisor.is_zero():
        return p.is_zero()
    return not qdivmod(p.coeffs, divisor.coeffs)[1]


def poly_gcd(p: IntPolynomial, q: IntPolynomial) -> IntPolynomial:
    """Primitive gcd in Z[z] (up to sign, leading coefficient positive)."""
    return to_integer_poly(qgcd(p.coeffs, q.coeffs))


def squarefree_part(p: IntPolynomial) -> IntPolynomial:
    if p.is_zero():
        raise PolynomialError("squarefree part of the zero polynomial")
    if p.degree == 0:
        return IntPolynomial([1])
    g = qgcd(p.coeffs, p.derivative().coeffs)
    quot, _ = qdivmod(p.coeffs, g)
    return to_integer_poly(quot)


def is_squarefree(p: IntPolynomial) -> bool:
    if p.is_zero():
        return False
    if p.degree == 0:
        return True
    return len(qgcd(p.coeffs, p.derivative().coeffs)) == 1
