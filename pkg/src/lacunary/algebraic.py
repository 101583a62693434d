"""Algebraic numbers as (minimal polynomial, isolating rectangle).

Root isolation works in two stages.  Approximations come from
``mpmath.polyroots``; they are snapped onto a dyadic grid and then
certified with exact rational arithmetic: with Weierstrass corrections
``W_i = p(z_i) / (lc * prod_{j != i} (z_i - z_j))`` every root of ``p`` lies
in the union of the disks ``|z - z_i| <= n|W_i|`` and each disk that is
disjoint from the others holds exactly one root.  The returned rectangles
bound those disks, so no floating-point value takes part in the decision.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import mpmath

from .bigpoly import (
    IntPolynomial,
    RationalComplex,
    divides,
    is_squarefree,
    qdivmod,
    qmul,
    qstrip,
    squarefree_part,
    to_integer_poly,
)
from .errors import AlgebraicError
from .intervals import Box, eval_box, sqrt_upper

DEFAULT_PRECISION = int(os.environ.get("LACUNARY_PRECISION", "30"))
MAX_PRECISION = 600
MAX_IRREDUCIBLE_DEGREE = 8


def _grid_bits(precision: int) -> int:
    return int(precision * 3.33) + 64


def _mpf_to_fraction(x) -> Fraction:
    sign, man, exp, _ = mpmath.mpf(x)._mpf_
    if sign:
        man = -man
    if exp >= 0:
        return Fraction(man << exp)
    return Fraction(man, 1 << -exp)


def _snap(q: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(round(q * scale), scale)


def _approximate_roots(p: IntPolynomial, dps: int) -> Optional[list]:
    n = p.degree
    with mpmath.workdps(dps):
        try:
            roots = mpmath.polyroots(list(reversed(p.coeffs)), maxsteps=200 + 20 * n,
                                     extraprec=2 * dps)
        except mpmath.libmp.NoConvergence:
            return None
        roots = [(_mpf_to_fraction(mpmath.mpc(r).real), _mpf_to_fraction(mpmath.mpc(r).imag))
                 for r in roots]
    bits = int(dps * 3.33) + 16
    eps = Fraction(1, 10 ** (dps // 2))
    reals, upper = [], []
    for re, im in roots:
        if abs(im) <= eps:
            reals.append(re)
        elif im > 0:
            upper.append((re, im))
    out = []
    if len(reals) + 2 * len(upper) == n:
        lc = abs(p.leading)
        for re in reals:
            guess = re.limit_denominator(lc)
            if abs(guess - re) <= eps and p.eval_exact(guess).is_zero():
                out.append(RationalComplex(guess))
            else:
                out.append(RationalComplex(_snap(re, bits)))
        for re, im in upper:
            re, im = _snap(re, bits), _snap(im, bits)
            out.append(RationalComplex(re, im))
            out.append(RationalComplex(re, -im))
    else:
        for re, im in roots:
            out.append(RationalComplex(_snap(re, bits), _snap(im, bits)))
    return out


def _certify(p: IntPolynomial, approx: Sequence[RationalComplex], precision: int):
    """Return disjoint isolating boxes, or None when the approximations are too coarse."""
    n = len(approx)
    if len(set(approx)) != n:
        return None
    lc2 = Fraction(p.leading) ** 2
    width_cap = Fraction(1, 10 ** precision)
    bits = _grid_bits(precision)
    boxes = []
    for i, zi in enumerate(approx):
        val = p.eval_exact(zi)
        if val.is_zero():
            boxes.append(Box.point(zi))
            continue
        den = lc2
        for j, zj in enumerate(approx):
            if j != i:
                den *= (zi - zj).abs2()
        radius = sqrt_upper(n * n * val.abs2() / den, bits)
        if 2 * radius > width_cap:
            return None
        boxes.append(Box.around(zi, radius))
    for a, b in itertools.combinations(boxes, 2):
        if a.intersects(b):
            return None
    return boxes


@lru_cache(maxsize=4096)
def _isolate(coeffs: tuple, precision: int) -> tuple:
    p = IntPolynomial(coeffs)
    if p.degree == 1:
        return (Box.point(RationalComplex(Fraction(-p[0], p[1]))),)
    digits = len(str(abs(p.leading))) + len(str(p.height()))
    dps = precision + 2 * digits + 10 + 2 * p.degree
    while dps <= 4 * MAX_PRECISION:
        approx = _approximate_roots(p, dps)
        if approx is not None:
            boxes = _certify(p, approx, precision)
            if boxes is not None:
                return tuple(sorted(boxes, key=lambda b: (b.center.re, b.center.im)))
        dps *= 2
    raise AlgebraicError("isolation failed: roots could not be separated at maximum precision")


def isolate_roots(p: IntPolynomial, precision: int = DEFAULT_PRECISION) -> list:
    """Pairwise-disjoint rectangles, one per complex root, each of width <= 10**-precision."""
    if p.degree is None or p.degree < 1:
        raise AlgebraicError("root isolation needs a nonconstant polynomial")
    if not is_squarefree(p):
        raise AlgebraicError("squarefree required")
    return list(_isolate(p.coeffs, precision))


def box_distance(a: Box, b: Box) -> Fraction:
    """Sup-norm gap between two rectangles (0 when they meet)."""
    gap_re = max(Fraction(0), b.re_lo - a.re_hi, a.re_lo - b.re_hi)
    gap_im = max(Fraction(0), b.im_lo - a.im_hi, a.im_lo - b.im_hi)
    return max(gap_re, gap_im)


def _precision_of(box: Box) -> int:
    w = box.width
    if w == 0:
        return DEFAULT_PRECISION
    digits = 0
    while Fraction(1, 10 ** (digits + 1)) >= w:
        digits += 1
    return max(digits, 1)


# -- irreducibility --------------------------------------------------------

def _rational_root_candidates(p: IntPolynomial):
    def divisors(n):
        n = abs(n)
        small, large = [], []
        d = 1
        while d * d <= n:
            if n % d == 0:
                small.append(d)
                if d * d != n:
                    large.append(n // d)
            d += 1
        return small + large[::-1]
    for a in divisors(p[0]):
        for b in divisors(p.leading):
            for sign in (1, -1):
                yield Fraction(sign * a, b)


def _box_poly_mul(a: list, b: list, bits: int) -> list:
    out = [Box.point(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y).outward(bits)
    return out


def _integer_in(box: Box):
    """Unique integer inside a coefficient box: int, None (none), or Ellipsis (ambiguous)."""
    if box.im_lo > 0 or box.im_hi < 0:
        return None
    lo = -((-box.re_lo.numerator) // box.re_lo.denominator)
    hi = box.re_hi.numerator // box.re_hi.denominator
    if lo > hi:
        return None
    if lo == hi:
        return lo
    return Ellipsis


@lru_cache(maxsize=4096)
def _irreducible(coeffs: tuple) -> bool:
    p = IntPolynomial(coeffs)
    n = p.degree
    if n == 1:
        return True
    if p[0] == 0 or p.content() != 1 or not is_squarefree(p):
        return False
    if abs(p[0]) < 10 ** 8 and abs(p.leading) < 10 ** 8:
        if any(p.eval_exact(r).is_zero() for r in _rational_root_candidates(p)):
            return False
        if n <= 3:
            return True
        sizes = range(2, n // 2 + 1)
    else:
        sizes = range(1, n // 2 + 1)
    precision = DEFAULT_PRECISION
    pending = [subset for k in sizes for subset in itertools.combinations(range(n), k)]
    while pending:
        if precision > MAX_PRECISION:
            raise AlgebraicError("isolation failed: irreducibility test inconclusive")
        boxes = _isolate(p.coeffs, precision)
        bits = _grid_bits(precision)
        ambiguous = []
        for subset in pending:
            poly = [Box.point(p.leading)]
            for idx in subset:
                poly = _box_poly_mul(poly, [-boxes[idx], Box.point(1)], bits)
            ints = [_integer_in(c) for c in poly]
            if any(v is None for v in ints):
                continue
            if any(v is Ellipsis for v in ints):
                ambiguous.append(subset)
                continue
            if divides(IntPolynomial(ints), p):
                return False
        pending = ambiguous
        precision *= 2
    return True


def is_irreducible(p: IntPolynomial) -> bool:
    """Irreducibility over Q of a primitive integer polynomial of degree <= 8.

    Rational roots are ruled out first; then every subset of roots of size at
    most n/2 is tested as the root set of a factor, using interval enclosures
    of ``lc * prod (z - root)`` to exclude or confirm integer candidates.
    """
    if p.degree is None or p.degree < 1:
        return False
    if p.degree > MAX_IRREDUCIBLE_DEGREE:
        raise AlgebraicError(f"irreducibility check limited to degree <= {MAX_IRREDUCIBLE_DEGREE}")
    return _irreducible(p.primitive_part().coeffs)


# -- algebraic numbers -----------------------------------------------------

@dataclass(frozen=True)
class AlgebraicNumber:
    minpoly: IntPolynomial
    enclosure: Box

    @property
    def degree(self) -> int:
        return self.minpoly.degree

    @property
    def precision(self) -> int:
        return _precision_of(self.enclosure)

    def is_rational(self) -> bool:
        return self.degree == 1

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise AlgebraicError("not a rational number")
        return Fraction(-self.minpoly[0], self.minpoly[1])

    def approx(self) -> complex:
        return complex(self.enclosure.center)

    def refine(self, precision: int) -> "AlgebraicNumber":
        """Same number with an enclosure of width <= 10**-precision."""
        if self.enclosure.is_point() or (
                self.enclosure.width <= Fraction(1, 10 ** precision)):
            return self
        while precision <= MAX_PRECISION:
            hits = [b for b in _isolate(self.minpoly.coeffs, precision)
                    if b.intersects(self.enclosure)]
            if len(hits) == 1:
                return AlgebraicNumber(self.minpoly, hits[0])
            precision += 10
        raise AlgebraicError("isolation failed: refinement did not converge")

    def conjugate(self) -> "AlgebraicNumber":
        """Complex conjugate (a root of the same minimal polynomial)."""
        if self.enclosure.im_lo == 0 == self.enclosure.im_hi:
            return self
        mirrored = self.enclosure.conjugate()
        precision = self.precision
        while precision <= MAX_PRECISION:
            hits = [b for b in _isolate(self.minpoly.coeffs, precision) if b.intersects(mirrored)]
            if len(hits) == 1:
                return AlgebraicNumber(self.minpoly, hits[0])
            precision += 10
        raise AlgebraicError("isolation failed: conjugate not located")

    def __repr__(self):
        return f"AlgebraicNumber({self})"

    def __str__(self):
        if self.is_rational():
            return str(self.rational_value())
        z = self.approx()
        return f"root of {self.minpoly} near {z.real:.6g}{z.imag:+.6g}i"


def rational(value) -> AlgebraicNumber:
    q = Fraction(value)
    return AlgebraicNumber(IntPolynomial([-q.numerator, q.denominator]), Box.point(q))


def make_algebraic(minpoly: IntPolynomial, hint=0, precision: int = DEFAULT_PRECISION,
                   tolerance: float = 1e-2) -> AlgebraicNumber:
    """Validate ``minpoly`` and isolate its root nearest to ``hint``."""
    if minpoly.degree is None or minpoly.degree < 1:
        raise AlgebraicError("minimal polynomial must be nonconstant")
    p = minpoly.primitive_part()
    if not is_squarefree(p) or not is_irreducible(p):
        raise AlgebraicError(f"not minimal: {p} is reducible over Q")
    target = complex(hint) if not isinstance(hint, RationalComplex) else complex(hint)
    boxes = isolate_roots(p, precision)
    dists = [abs(complex(b.center) - target) for b in boxes]
    best = min(range(len(boxes)), key=lambda i: (dists[i], i))
    if dists[best] > tolerance * max(1.0, abs(target)):
        raise AlgebraicError(f"root not found near {hint}")
    return AlgebraicNumber(p, boxes[best])


def roots_of(p: IntPolynomial, precision: int = DEFAULT_PRECISION) -> list:
    """All roots of an irreducible primitive polynomial as algebraic numbers."""
    return [AlgebraicNumber(p, b) for b in isolate_roots(p, precision)]


def root_index(alpha: AlgebraicNumber, boxes: Sequence[Box]) -> Optional[int]:
    hits = [i for i, b in enumerate(boxes) if b.intersects(alpha.enclosure)]
    return hits[0] if len(hits) == 1 else None


def same_number(a: AlgebraicNumber, b: AlgebraicNumber) -> bool:
    """Exact identity: equal minimal polynomials and the same isolated root."""
    if a.minpoly != b.minpoly:
        return False
    if a.is_rational():
        return True
    precision = max(a.precision, b.precision)
    while precision <= MAX_PRECISION:
        boxes = _isolate(a.minpoly.coeffs, precision)
        ia, ib = root_index(a, boxes), root_index(b, boxes)
        if ia is not None and ib is not None:
            return ia == ib
        precision += 10
    raise AlgebraicError("isolation failed: membership undecidable")


def contains_number(items: Sequence[AlgebraicNumber], alpha: AlgebraicNumber) -> bool:
    return any(same_number(s, alpha) for s in items)


def _radius_reflection_possible(p: IntPolynomial, rho2: Fraction) -> bool:
    """Whether z**n p(rho2/z) is proportional to p (needed for a root with |z|^2 = rho2)."""
    n = p.degree
    reflected = [p[n - j] * rho2 ** (n - j) for j in range(n + 1)]
    ratio = None
    for a, b in zip(p.coeffs, reflected):
        if (a == 0) != (b == 0):
            return False
        if a:
            r = Fraction(b) / a
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return True


def compare_modulus(alpha: AlgebraicNumber, rho) -> int:
    """Sign of |alpha| - rho, decided exactly.

    A root on the circle |z| = rho is recognized by checking that the
    enclosure of rho^2 / conj(alpha) sits inside a region holding no other
    root; this requires the minimal polynomial to be invariant under that
    reflection, which is tested first.
    """
    rho2 = Fraction(rho) ** 2
    if alpha.enclosure.is_point():
        m = alpha.enclosure.center.abs2()
        return (m > rho2) - (m < rho2)
    on_circle_possible = _radius_reflection_possible(alpha.minpoly, rho2)
    precision = alpha.precision
    current = alpha
    while precision <= MAX_PRECISION:
        current = current.refine(precision)
        lo, hi = current.enclosure.abs2_bounds()
        if hi < rho2:
            return -1
        if lo > rho2:
            return 1
        if on_circle_possible and lo > 0:
            boxes = _isolate(current.minpoly.coeffs, precision)
            idx = root_index(current, boxes)
            if idx is not None:
                own = boxes[idx]
                others = [b for i, b in enumerate(boxes) if i != idx]
                margin = min((box_distance(own, b) for b in others), default=Fraction(1)) / 2
                region = Box(own.re_lo - margin, own.re_hi + margin,
                             own.im_lo - margin, own.im_hi + margin)
                image = current.enclosure.conjugate().reciprocal() * Box.point(rho2)
                if region.contains_box(image):
                    return 0
        precision += 20
    raise AlgebraicError("boundary undecidable")


def is_exact_root(p: IntPolynomial, alpha: AlgebraicNumber) -> bool:
    return divides(alpha.minpoly, p)


# -- number field elements -------------------------------------------------

@dataclass(frozen=True)
class FieldElement:
    """Element sum(coords[j] * alpha**j) of Q(alpha)."""

    base: AlgebraicNumber
    coords: tuple

    def __post_init__(self):
        d = self.base.degree
        cs = tuple(Fraction(c) for c in self.coords)
        if len(cs) < d:
            cs = cs + (Fraction(0),) * (d - len(cs))
        if len(cs) != d:
            raise AlgebraicError("coordinate vector longer than the field degree")
        object.__setattr__(self, "coords", cs)

    @classmethod
    def constant(cls, base: AlgebraicNumber, value) -> "FieldElement":
        return cls(base, (Fraction(value),))

    @classmethod
    def generator(cls, base: AlgebraicNumber) -> "FieldElement":
        if base.degree == 1:
            return cls.constant(base, base.rational_value())
        return cls(base, (0, 1))

    def _wrap(self, cs) -> "FieldElement":
        return FieldElement(self.base, tuple(_reduce_list(cs, self.base.minpoly)))

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.base.minpoly != self.base.minpoly:
                raise AlgebraicError("field elements over different generators")
            return other
        return FieldElement.constant(self.base, other)

    def __add__(self, other):
        other = self._coerce(other)
        return FieldElement(self.base, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.base, tuple(-c for c in self.coords))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.base, tuple(c * other for c in self.coords))
        other = self._coerce(other)
        return self._wrap(qmul(qstrip(self.coords), qstrip(other.coords)))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraicError("negative powers are not supported")
        result = FieldElement.constant(self.base, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return not any(self.coords)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise AlgebraicError("field element is not rational")
        return self.coords[0]

    def enclosure(self, precision: Optional[int] = None) -> Box:
        alpha = self.base if precision is None else self.base.refine(precision)
        bits = _grid_bits(max(precision or 0, alpha.precision))
        return eval_box(self.coords, alpha.enclosure, bits)

    def to_strings(self) -> list:
        return [str(c) for c in self.coords]


def _reduce_list(cs, minpoly: IntPolynomial) -> list:
    return qdivmod(cs, minpoly.coeffs)[1]


def reduce(p: IntPolynomial, alpha: AlgebraicNumber) -> FieldElement:
    """Exact image of p(alpha) in Q(alpha)."""
    return FieldElement(alpha, tuple(_reduce_list(p.coeffs, alpha.minpoly)))


def eval_in_field(p: IntPolynomial, x: FieldElement) -> FieldElement:
    acc = FieldElement.constant(x.base, 0)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def charpoly(x: FieldElement) -> list:
    """Characteristic polynomial of multiplication by x (monic, rational coefficients)."""
    d = x.base.degree
    basis_images = []
    for j in range(d):
        e = FieldElement(x.base, tuple(Fraction(int(i == j)) for i in range(d)))
        basis_images.append((x * e).coords)
    # column j holds the image of alpha**j
    mat = [[basis_images[j][i] for j in range(d)] for i in range(d)]
    coeffs = [Fraction(0)] * d + [Fraction(1)]
    m = [[Fraction(0)] * d for _ in range(d)]
    for k in range(1, d + 1):
        # Faddeev-LeVerrier: M_k = A M_{k-1} + c_{d-k+1} I, c_{d-k} = -tr(A M_k)/k
        m = [[sum(mat[i][t] * m[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
        for i in range(d):
            m[i][i] += coeffs[d - k + 1]
        am = [[sum(mat[i][t] * m[t][j] for t in range(d)) for j in range(d)] for i in range(d)]
        coeffs[d - k] = -sum(am[i][i] for i in range(d)) / k
    return coeffs


def minimal_polynomial(x: FieldElement) -> IntPolynomial:
    return squarefree_part(to_integer_poly(charpoly(x)))


def to_algebraic(x: FieldElement, precision: int = DEFAULT_PRECISION) -> AlgebraicNumber:
    """Convert a field element into a standalone algebraic number."""
    m = minimal_polynomial(x)
    if m.degree == 1:
        return rational(Fraction(-m[0], m[1]))
    while precision <= MAX_PRECISION:
        boxes = _isolate(m.coeffs, precision)
        value = x.enclosure(precision)
        hits = [b for b in boxes if b.intersects(value)]
        if len(hits) == 1:
            return AlgebraicNumber(m, hits[0])
        precision += 20
    raise AlgebraicError("isolation failed: field element not located")


# -- enumeration and closure -----------------------------------------------

class Enumeration(NamedTuple):
    numbers: list
    shortfall: bool


def _polys_of(degree: int, height: int):
    rng = range(-height, height + 1)
    for lead in range(1, height + 1):
        for rest in itertools.product(rng, repeat=degree):
            cs = rest + (lead,)
            if max(abs(c) for c in cs) != height:
                continue
            yield IntPolynomial(cs)


def enumerate_unit_ball(count: int, max_degree: int, max_height: int,
                        precision: int = DEFAULT_PRECISION) -> Enumeration:
    """Deterministic prefix of the algebraic numbers in the open unit disc.

    Numbers are grouped by (degree, height of the minimal polynomial); inside
    a group they are ordered by real part, imaginary part, then coefficients.
    """
    if max_degree < 1:
        raise AlgebraicError("degree must be >= 1")
    out = []
    for degree in range(1, max_degree + 1):
        for height in range(1, max_height + 1):
            group = []
            for p in _polys_of(degree, height):
                if p.content() != 1:
                    continue
                if degree > 1 and (p[0] == 0 or not is_irreducible(p)):
                    continue
                for alpha in roots_of(p, precision):
                    if compare_modulus(alpha, 1) < 0:
                        c = alpha.enclosure.center
                        group.append(((c.re, c.im, p.coeffs), alpha))
            group.sort(key=lambda item: item[0])
            out.extend(alpha for _, alpha in group)
            if len(out) >= count:
                return Enumeration(out[:count], False)
    return Enumeration(out, True)


def conjugates_in_ball(alpha: AlgebraicNumber, rho, precision: Optional[int] = None) -> list:
    """Roots of alpha's minimal polynomial certified to satisfy |root| < rho."""
    precision = precision or max(alpha.precision, DEFAULT_PRECISION)
    if alpha.is_rational():
        return [alpha] if compare_modulus(alpha, rho) < 0 else []
    return [r for r in roots_of(alpha.minpoly, precision) if compare_modulus(r, rho) < 0]


def check_closed_relative(items: Sequence[AlgebraicNumber], rho):
    """(True, None) when every conjugate inside B(0, rho) of a member is a member.

    On failure the witness is the offending number: either a conjugate that is
    missing, or a member lying outside the ball.
    """
    for alpha in items:
        if compare_modulus(alpha, rho) >= 0:
            return False, alpha
        for conj in conjugates_in_ball(alpha, rho):
            if not contains_number(items, conj):
                return False, conj
    return True, None


# -- preimages under a polynomial map --------------------------------------

def _qhorner(outer, inner) -> list:
    """outer(inner(z)) for rational coefficient lists."""
    acc: list = []
    for c in reversed(list(outer)):
        acc = qmul(acc, inner)
        acc = qstrip([acc[0] + c] + acc[1:] if acc else [c])
    return acc


def preimage_roots(p: IntPolynomial, alpha: AlgebraicNumber,
                   precision: int = DEFAULT_PRECISION):
    """Roots gamma of p(z) - p(alpha), isolated inside an integer polynomial.

    Returns ``(poly, boxes, hits, precision)``: ``poly`` is squarefree with
    integer coefficients and vanishes at every such gamma (it is the norm of
    p(z) - p(alpha) down to Z[z]); ``boxes`` isolate all roots of ``poly`` and
    ``hits`` indexes those whose image under p is p(alpha) itself rather than
    one of its other conjugates.
    """
    beta = eval_in_field(p, FieldElement.generator(alpha))
    chi = charpoly(beta)
    poly = squarefree_part(to_integer_poly(_qhorner(chi, [Fraction(c) for c in p.coeffs])))
    target = minimal_polynomial(beta)
    while precision <= MAX_PRECISION:
        bits = _grid_bits(precision)
        boxes = _isolate(poly.coeffs, precision)
        images_of = _isolate(target.coeffs, precision)
        own = [i for i, b in enumerate(images_of) if b.intersects(beta.enclosure(precision))]
        if len(own) == 1:
            hits, clean = [], True
            for idx, b in enumerate(boxes):
                image = eval_box(p.coeffs, b, bits)
                where = [i for i, t in enumerate(images_of) if t.intersects(image)]
                if len(where) != 1:
                    clean = False
                    break
                if where[0] == own[0]:
                    hits.append(idx)
            if clean:
                return poly, list(boxes), hits, precision
        precision += 20
    raise AlgebraicError("isolation failed: preimages could not be separated")


def locate_root(alpha: AlgebraicNumber, poly: IntPolynomial, boxes: Sequence[Box]) -> Optional[int]:
    """Index of the box (isolating the roots of ``poly``) that holds alpha; None if alpha is not a root."""
    if not divides(alpha.minpoly, poly):
        return None
    precision = alpha.precision
    while precision <= MAX_PRECISION:
        idx = root_index(alpha.refine(precision), boxes)
        if idx is not None:
            return idx
        precision += 20
    raise AlgebraicError("isolation failed: root not located")


def in_omega(p: IntPolynomial, alpha: AlgebraicNumber) -> bool:
    """|alpha| < 1 and |p(alpha)| < 1, decided exactly."""
    if compare_modulus(alpha, 1) >= 0:
        return False
    image = to_algebraic(eval_in_field(p, FieldElement.generator(alpha)))
    return compare_modulus(image, 1) < 0
