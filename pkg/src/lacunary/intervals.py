"""Rectangular complex interval arithmetic with rational endpoints.

Boxes are closed axis-aligned rectangles.  Every operation returns a box
that contains the exact image; results are rounded outward onto a dyadic
grid so endpoint sizes stay bounded during long Horner chains.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .bigpoly import RationalComplex

DEFAULT_GRID_BITS = 256


def round_down(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction((q.numerator * scale) // q.denominator, scale)


def round_up(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-q.numerator * scale) // q.denominator), scale)


def sqrt_upper(q: Fraction, bits: int = 128) -> Fraction:
    """Dyadic rational that is >= sqrt(q)."""
    if q < 0:
        raise ValueError("sqrt of negative value")
    scaled = q * (1 << (2 * bits))
    n = -((-scaled.numerator) // scaled.denominator)
    r = isqrt(n)
    if r * r < n:
        r += 1
    return Fraction(r, 1 << bits)


def sqrt_lower(q: Fraction, bits: int = 128) -> Fraction:
    """Dyadic rational that is <= sqrt(q)."""
    if q < 0:
        raise ValueError("sqrt of negative value")
    scaled = q * (1 << (2 * bits))
    return Fraction(isqrt(scaled.numerator // scaled.denominator), 1 << bits)


def _imul(a_lo, a_hi, b_lo, b_hi):
    prods = (a_lo * b_lo, a_lo * b_hi, a_hi * b_lo, a_hi * b_hi)
    return min(prods), max(prods)


@dataclass(frozen=True)
class Box:
    re_lo: Fraction
    re_hi: Fraction
    im_lo: Fraction
    im_hi: Fraction

    @classmethod
    def point(cls, z) -> "Box":
        z = RationalComplex.coerce(z)
        return cls(z.re, z.re, z.im, z.im)

    @classmethod
    def around(cls, center: RationalComplex, radius: Fraction) -> "Box":
        return cls(center.re - radius, center.re + radius, center.im - radius, center.im + radius)

    @property
    def center(self) -> RationalComplex:
        return RationalComplex((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    @property
    def width(self) -> Fraction:
        return max(self.re_hi - self.re_lo, self.im_hi - self.im_lo)

    def is_point(self) -> bool:
        return self.re_lo == self.re_hi and self.im_lo == self.im_hi

    def intersects(self, other: "Box") -> bool:
        return not (self.re_hi < other.re_lo or other.re_hi < self.re_lo
                    or self.im_hi < other.im_lo or other.im_hi < self.im_lo)

    def contains_box(self, other: "Box") -> bool:
        return (self.re_lo <= other.re_lo and other.re_hi <= self.re_hi
                and self.im_lo <= other.im_lo and other.im_hi <= self.im_hi)

    def contains(self, z) -> bool:
        z = RationalComplex.coerce(z)
        return self.re_lo <= z.re <= self.re_hi and self.im_lo <= z.im <= self.im_hi

    def conjugate(self) -> "Box":
        return Box(self.re_lo, self.re_hi, -self.im_hi, -self.im_lo)

    def outward(self, bits: int = DEFAULT_GRID_BITS) -> "Box":
        return Box(round_down(self.re_lo, bits), round_up(self.re_hi, bits),
                   round_down(self.im_lo, bits), round_up(self.im_hi, bits))

    def __add__(self, other):
        other = _as_box(other)
        return Box(self.re_lo + other.re_lo, self.re_hi + other.re_hi,
                   self.im_lo + other.im_lo, self.im_hi + other.im_hi)

    __radd__ = __add__

    def __neg__(self):
        return Box(-self.re_hi, -self.re_lo, -self.im_hi, -self.im_lo)

    def __sub__(self, other):
        return self + (-_as_box(other))

    def __rsub__(self, other):
        return _as_box(other) - self

    def __mul__(self, other):
        other = _as_box(other)
        rr = _imul(self.re_lo, self.re_hi, other.re_lo, other.re_hi)
        ii = _imul(self.im_lo, self.im_hi, other.im_lo, other.im_hi)
        ri = _imul(self.re_lo, self.re_hi, other.im_lo, other.im_hi)
        ir = _imul(self.im_lo, self.im_hi, other.re_lo, other.re_hi)
        return Box(rr[0] - ii[1], rr[1] - ii[0], ri[0] + ir[0], ri[1] + ir[1])

    __rmul__ = __mul__

    def abs2_bounds(self):
        """Lower and upper bounds for |z|^2 over the box."""
        def sq_range(lo, hi):
            top = max(lo * lo, hi * hi)
            bottom = Fraction(0) if lo <= 0 <= hi else min(lo * lo, hi * hi)
            return bottom, top
        r = sq_range(self.re_lo, self.re_hi)
        i = sq_range(self.im_lo, self.im_hi)
        return r[0] + i[0], r[1] + i[1]

    def reciprocal(self) -> "Box":
        """Enclosure of 1/z; requires 0 outside the box."""
        lo, hi = self.abs2_bounds()
        if lo == 0:
            raise ZeroDivisionError("box contains zero")
        inv = (1 / hi, 1 / lo)
        re = _imul(self.re_lo, self.re_hi, *inv)
        im = _imul(-self.im_hi, -self.im_lo, *inv)
        return Box(re[0], re[1], im[0], im[1])


def _as_box(value) -> Box:
    if isinstance(value, Box):
        return value
    return Box.point(value)


def eval_box(coeffs, box: Box, bits: int = DEFAULT_GRID_BITS) -> Box:
    """Horner evaluation of an exponent-indexed coefficient list on a box."""
    acc = Box.point(0)
    for c in reversed(list(coeffs)):
        acc = (acc * box + Box.point(c)).outward(bits)
    return acc


def box_power(box: Box, k: int, bits: int = DEFAULT_GRID_BITS) -> Box:
    result, base = Box.point(1), box
    while k:
        if k & 1:
            result = (result * base).outward(bits)
        k >>= 1
        if k:
            base = (base * base).outward(bits)
    return result
