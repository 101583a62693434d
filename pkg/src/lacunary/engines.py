"""Block-series constructions driven by finite choice-bit strings.

A series is stored as blocks ``scalar * z**t * factor(z)`` with pairwise
disjoint exponent ranges.  Four builders are provided:

* ``build_thm1`` -- support inside a sumset A + B, blocks ``z^t Q_k B_k`` with
  ``B_k = (P_1...P_k)^k`` so that high derivatives vanish at every enumerated
  algebraic number from some block on;
* ``build_thm2`` -- support inside the partial sumset {a_i + b_j : i < j};
* ``build_thm3`` -- prescribed exceptional set S inside B(0, rho), blocks
  ``floor(rho^-t) z^t P_1...P_k``;
* ``build_thm4`` -- composition ``f(P(z))`` with a polynomial P, P(0) = 0.
"""

from __future__ import annotations

import bisect
import math
import os
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .algebraic import (
    AlgebraicNumber,
    FieldElement,
    check_closed_relative,
    eval_in_field,
    in_omega,
    locate_root,
    preimage_roots,
    same_number,
    to_algebraic,
)
from .bigpoly import IntPolynomial, RationalComplex
from .errors import BoundExceeded, ConstructionError, HorizonError, KernelFitError
from .indexsets import IndexSet
from .intervals import sqrt_upper
from .kernelfit import FitResult, support_fit

DEFAULT_MAX_BITS = int(os.environ.get("LACUNARY_MAX_BITS", str(2 ** 20)))
DEFAULT_MAX_T = int(os.environ.get("LACUNARY_HORIZON", str(10 ** 6)))

Z = IntPolynomial([0, 1])


class ChoiceBitsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Guards:
    max_bits: int = DEFAULT_MAX_BITS
    max_t: int = DEFAULT_MAX_T

    def check_t(self, k: int, t: int):
        if t > self.max_t:
            raise ConstructionError(f"size guard: t_{k} = {t} exceeds the horizon cap {self.max_t}")

    def check_bits(self, k: int, bits: int):
        if bits > self.max_bits:
            raise ConstructionError(f"size guard: block {k} needs ~{bits}-bit coefficients, cap is {self.max_bits}")


def normalize_bits(bits, K: int) -> Tuple[Tuple[int, ...], List[str]]:
    """Choice bits for blocks 2..K; missing bits default to 0, extra bits are dropped."""
    if bits is None:
        bits = ()
    if isinstance(bits, str):
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"choice bits must be a 0/1 string, got {bits!r}")
        bits = [int(ch) for ch in bits]
    bits = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in bits):
        raise ValueError("choice bits must be 0 or 1")
    need = max(K - 1, 0)
    notes = []
    if len(bits) < need:
        notes.append(f"missing choice bits: {need - len(bits)} defaulted to 0")
        warnings.warn(notes[-1], ChoiceBitsWarning, stacklevel=3)
        bits = bits + (0,) * (need - len(bits))
    return bits[:need], notes


@dataclass(frozen=True)
class Block:
    k: int
    t: int
    scalar: int
    factor: IntPolynomial
    D: int
    m: int
    Q: Optional[IntPolynomial] = None

    def __post_init__(self):
        if self.scalar == 0 or self.factor.is_zero():
            raise ConstructionError("blocks must be nonzero")

    @property
    def end(self) -> int:
        return self.t + self.factor.degree

    @property
    def length(self) -> int:
        """L of the whole block polynomial."""
        return abs(self.scalar) * self.factor.length()

    def coefficient(self, n: int) -> int:
        return self.scalar * self.factor[n - self.t] if self.t <= n else 0

    def nonzero(self) -> Iterator[Tuple[int, int]]:
        for e, c in enumerate(self.factor.coeffs):
            if c:
                yield self.t + e, self.scalar * c

    def value(self, x: FieldElement) -> FieldElement:
        """scalar * x^t * factor(x) in the field of x."""
        return eval_in_field(self.factor, x) * (x ** self.t) * self.scalar


class _Blocked:
    """Shared coefficient access for series made of disjoint blocks."""

    blocks: Tuple[Block, ...]
    horizon: Optional[int]

    def _starts(self):
        return [b.t for b in self.blocks]

    def _check(self, n: int):
        if self.horizon is not None and n > self.horizon:
            raise HorizonError(f"horizon: index {n} beyond the built horizon {self.horizon}")

    def coefficient(self, n: int) -> int:
        self._check(n)
        k = bisect.bisect_right(self._starts(), n) - 1
        return self.blocks[k].coefficient(n) if k >= 0 else 0

    def nonzero_upto(self, N: int) -> Iterator[Tuple[int, int]]:
        self._check(N)
        for b in self.blocks:
            if b.t > N:
                return
            for n, a in b.nonzero():
                if n > N:
                    return
                yield n, a

    @property
    def t_sequence(self) -> Tuple[int, ...]:
        return tuple(b.t for b in self.blocks)

    def block_values(self, alpha: AlgebraicNumber) -> List[FieldElement]:
        x = FieldElement.generator(alpha)
        return [b.value(x) for b in self.blocks]


@dataclass(frozen=True, eq=True)
class BlockSeries(_Blocked):
    theorem: str
    blocks: Tuple[Block, ...]
    horizon: int
    rho: Fraction = Fraction(1)
    bits: Tuple[int, ...] = ()
    numbers: Tuple[AlgebraicNumber, ...] = ()
    polys: Tuple[IntPolynomial, ...] = ()
    params: dict = field(default_factory=dict, compare=False, hash=False)
    intermediates: Tuple[dict, ...] = field(default=(), compare=False, hash=False)
    notes: Tuple[str, ...] = field(default=(), compare=False, hash=False)

    def __post_init__(self):
        for a, b in zip(self.blocks, self.blocks[1:]):
            if b.t <= a.end:
                raise ConstructionError(f"blocks {a.k} and {b.k} overlap")

    @property
    def K(self) -> int:
        return len(self.blocks)


@dataclass(frozen=True)
class CoefficientSeries(_Blocked):
    """An imported coefficient list; blocks are its maximal runs of nonzero coefficients.

    ``horizon=None`` marks an exact polynomial (every later coefficient is zero).
    """

    coeffs: Tuple[int, ...]
    horizon: Optional[int]
    theorem: str = "imported"
    rho: Fraction = Fraction(1)

    @classmethod
    def from_pairs(cls, pairs, horizon: Optional[int] = None) -> "CoefficientSeries":
        data = dict(pairs)
        top = max(data, default=-1)
        if horizon is not None and top > horizon:
            raise ValueError("coefficient beyond the declared horizon")
        return cls(tuple(int(data.get(n, 0)) for n in range(top + 1)), horizon)

    @classmethod
    def from_polynomial(cls, p: IntPolynomial) -> "CoefficientSeries":
        return cls(tuple(p.coeffs), None)

    @property
    def blocks(self) -> Tuple[Block, ...]:
        out, n, k = [], 0, 1
        cs = self.coeffs
        while n < len(cs):
            if cs[n] == 0:
                n += 1
                continue
            start = n
            while n < len(cs) and cs[n] != 0:
                n += 1
            out.append(Block(k, start, 1, IntPolynomial(cs[start:n]), n - 1 - start, 0))
            k += 1
        return tuple(out)

    def coefficient(self, n):
        self._check(n)
        return self.coeffs[n] if n < len(self.coeffs) else 0

    def nonzero_upto(self, N):
        self._check(N)
        for n, a in enumerate(self.coeffs[: N + 1]):
            if a:
                yield n, a


Series = Union[BlockSeries, CoefficientSeries]


@dataclass(frozen=True)
class ComposedSeries:
    """psi(z) = f(P(z)) truncated at degree N."""

    P: IntPolynomial
    base: Series
    horizon: int
    d: int
    coeffs: Tuple[int, ...]
    numbers: Tuple[AlgebraicNumber, ...] = ()
    images: Tuple[AlgebraicNumber, ...] = ()
    theorem: str = "thm4"
    rho: Fraction = Fraction(1)
    notes: Tuple[str, ...] = ()

    def coefficient(self, n: int) -> int:
        if n > self.horizon:
            raise HorizonError(f"horizon: index {n} beyond the truncation degree {self.horizon}")
        return self.coeffs[n]

    def nonzero_upto(self, N: int):
        if N > self.horizon:
            raise HorizonError(f"horizon: index {N} beyond the truncation degree {self.horizon}")
        for n, a in enumerate(self.coeffs[: N + 1]):
            if a:
                yield n, a

    @property
    def blocks(self):
        return self.base.blocks

    def block_values(self, alpha: AlgebraicNumber) -> List[FieldElement]:
        """Base blocks evaluated at P(alpha), inside Q(alpha)."""
        gamma = eval_in_field(self.P, FieldElement.generator(alpha))
        return [b.value(gamma) for b in self.base.blocks]


def coefficients(series, N: int, dense: bool = True) -> Iterator[Tuple[int, int]]:
    """(n, a_n) for n <= N; ``dense=False`` emits only the nonzero ones."""
    if N < 0:
        raise ValueError("N must be non-negative")
    if not dense:
        yield from series.nonzero_upto(N)
        return
    nz = dict(series.nonzero_upto(N))
    for n in range(N + 1):
        yield n, nz.get(n, 0)


def block_metadata(series) -> List[dict]:
    """Per-block table: k, t_k, D_k, m_k, L(factor), ratio t_{k+1}/(t_k + D_k + m_k)."""
    rows = []
    blocks = series.blocks
    for i, b in enumerate(blocks):
        ratio = None
        if i + 1 < len(blocks):
            ratio = Fraction(blocks[i + 1].t, b.t + b.D + b.m)
        rows.append({"k": b.k, "t": b.t, "D": b.D, "m": b.m,
                     "L": b.factor.length(), "ratio": ratio})
    return rows


# -- helpers ---------------------------------------------------------------

def _degrees(polys: Sequence[IntPolynomial]) -> List[int]:
    return [p.degree for p in polys]


def _prefix_products(polys: Sequence[IntPolynomial]) -> List[IntPolynomial]:
    out, acc = [], IntPolynomial([1])
    for p in polys:
        acc = acc * p
        out.append(acc)
    return out


def _fit(p: IntPolynomial, s: IndexSet, k: int) -> FitResult:
    try:
        return support_fit(p, s)
    except KernelFitError as exc:
        raise ConstructionError(f"support fit for block {k} failed: {exc}") from exc


def _guard_factor(guards: Guards, k: int, factor: IntPolynomial, scalar: int = 1):
    guards.check_bits(k, factor.height().bit_length() + abs(scalar).bit_length())


def _choice_error(exc: Exception) -> ConstructionError:
    return ConstructionError(f"choice set too small at certification bound ({exc})")


def _take(numbers: Sequence[AlgebraicNumber], K: int) -> List[AlgebraicNumber]:
    if K < 1:
        raise ConstructionError("K must be positive")
    if len(numbers) < K:
        raise ConstructionError(f"enumeration too short: need {K} numbers, got {len(numbers)}")
    return list(numbers[:K])


def _number_params(numbers) -> list:
    return [str(a) for a in numbers]


# -- builders --------------------------------------------------------------

def build_thm1(A: IndexSet, B: IndexSet, enum: Sequence[AlgebraicNumber], K: int,
               bits=None, guards: Guards = Guards()) -> BlockSeries:
    numbers = _take(enum, K)
    bits, notes = normalize_bits(bits, K)
    polys = [a.minpoly for a in numbers]
    prods = _prefix_products(polys)
    fits, D = [], []
    for k in range(1, K + 1):
        Bk = prods[k - 1] ** k
        D.append(Bk.degree)
        fits.append(_fit(Bk, B, k))
        _guard_factor(guards, k, fits[-1].product)
    try:
        t = [A.min()]
    except BoundExceeded as exc:
        raise _choice_error(exc) from exc
    inter = []
    for k in range(1, K):
        i = k - 1
        lower = max(k * (t[i] + D[i] + fits[i].m) + 1, fits[k].product.length() + (k + 1))
        try:
            v = A.next_member(lower)
            w = A.next_member(v + 1)
        except BoundExceeded as exc:
            raise _choice_error(exc) from exc
        nxt = w if bits[i] else v
        guards.check_t(k + 1, nxt)
        t.append(nxt)
        inter.append({"k": k, "lower": lower, "v": v, "w": w, "bit": bits[i]})
    blocks = tuple(Block(k + 1, t[k], 1, fits[k].product, D[k], fits[k].m, fits[k].Q) for k in range(K))
    last = blocks[-1]
    return BlockSeries(
        "thm1", blocks, K * (last.t + last.D + last.m), Fraction(1), bits, tuple(numbers), tuple(polys),
        {"A": A.to_spec(), "B": B.to_spec(), "K": K}, tuple(inter), tuple(notes))


def build_thm2(A: IndexSet, B: IndexSet, enum: Sequence[AlgebraicNumber], K: int,
               bits=None, guards: Guards = Guards()) -> BlockSeries:
    numbers = _take(enum, K)
    bits, notes = normalize_bits(bits, K)
    polys = [a.minpoly for a in numbers]
    prods = _prefix_products(polys)
    fits, D, N = [], [], []
    try:
        for k in range(1, K + 1):
            fits.append(_fit(prods[k - 1], A, k))
            _guard_factor(guards, k, fits[-1].product)
            D.append(prods[k - 1].degree)
            N.append(A.count_upto(fits[-1].m + D[-1]))
        j = [N[0] + 1]
        t = [B.nth(j[0])]
        guards.check_t(1, t[0])
        inter = []
        for k in range(1, K):
            i = k - 1
            lower = max(k * (t[i] + D[i] + fits[i].m) + 1, fits[k].product.length() + (k + 1))
            J = B.count_upto(lower - 1) + 1 if lower > 0 else 1
            idx = max(J, N[k] + 1)
            jj = idx + bits[i]
            nxt = B.nth(jj)
            guards.check_t(k + 1, nxt)
            j.append(jj)
            t.append(nxt)
            inter.append({"J": J, "index": jj, "bit": bits[i], "choices": [B.nth(idx), B.nth(idx + 1)]})
    except BoundExceeded as exc:
        raise _choice_error(exc) from exc
    blocks = tuple(Block(k + 1, t[k], 1, fits[k].product, D[k], fits[k].m, fits[k].Q) for k in range(K))
    # witness bookkeeping: block k uses a_1..a_{N_k} and b_{j_k}, j_k > N_k
    inter = tuple(dict({"block": k + 1, "N": N[k], "j": j[k]}, **(inter[k - 1] if k else {}))
                  for k in range(K))
    last = blocks[-1]
    return BlockSeries(
        "thm2", blocks, K * (last.t + last.D + last.m), Fraction(1), bits, tuple(numbers), tuple(polys),
        {"A": A.to_spec(), "B": B.to_spec(), "K": K}, inter, tuple(notes))


def _floor_inverse_power(rho: Fraction, t: int) -> int:
    return rho.denominator ** t // rho.numerator ** t


def build_thm3(S: Sequence[AlgebraicNumber], rho, K: int, bits=None,
               guards: Guards = Guards()) -> BlockSeries:
    rho = Fraction(rho)
    if not 0 < rho <= 1:
        raise ConstructionError("rho must satisfy 0 < rho <= 1")
    if K < 1:
        raise ConstructionError("K must be positive")
    S = list(S)
    if not any(a.minpoly == Z for a in S):
        raise ConstructionError("S must contain 0")
    ok, witness = check_closed_relative(S, rho)
    if not ok:
        raise ConstructionError(f"closure check failed: witness {witness}")
    bits, notes = normalize_bits(bits, K)
    # finite S: cycle through its members
    polys = [S[i % len(S)].minpoly for i in range(K + 1)]
    prods = _prefix_products(polys)
    D = _degrees(prods)
    t = [0]
    inter = []
    for k in range(1, K):
        i = k - 1
        parts = (k * (t[i] + D[i]) + 1, prods[k].length() + (k + 1), 2 * (k + 1) ** 2 * D[k])
        s = max(parts)
        nxt = s + bits[i]
        guards.check_t(k + 1, nxt)
        t.append(nxt)
        inter.append({"k": k, "s": s, "terms": list(parts), "bit": bits[i]})
    blocks = []
    ratio_bits = math.log2(rho.denominator) - math.log2(rho.numerator)
    for k in range(K):
        guards.check_bits(k + 1, int(t[k] * ratio_bits) + 1 + prods[k].height().bit_length())
        c = _floor_inverse_power(rho, t[k])
        blocks.append(Block(k + 1, t[k], c, prods[k], D[k], 0))
    return BlockSeries(
        "thm3", tuple(blocks), K * (t[-1] + D[K - 1]), rho, bits, tuple(S), tuple(polys[:K]),
        {"S": _number_params(S), "rho": str(rho), "K": K}, tuple(inter), tuple(notes))


def _truncated_power(p: IntPolynomial, k: int, N: int) -> IntPolynomial:
    result, base = IntPolynomial([1]), p.truncate(N)
    while k:
        if k & 1:
            result = (result * base).truncate(N)
        k >>= 1
        if k:
            base = (base * base).truncate(N)
    return result


def compose(base: Series, P: IntPolynomial, N: int) -> Tuple[int, ...]:
    """Coefficients 0..N of base(P(z)); requires P(0) = 0 and enough base horizon."""
    v = min(P.support())
    need = N // v
    if base.horizon is not None and base.horizon < need:
        raise HorizonError(f"horizon: base series known up to {base.horizon}, composition needs {need}")
    acc = IntPolynomial()
    for b in base.blocks:
        if b.t > need:
            break
        term = _truncated_power(P, b.t, N) * b.factor.compose(P, N)
        acc = acc + term.truncate(N) * b.scalar
    cs = list(acc.coeffs) + [0] * (N + 1 - len(acc.coeffs))
    return tuple(cs[: N + 1])


def _dedupe(numbers: Sequence[AlgebraicNumber]) -> List[AlgebraicNumber]:
    out: List[AlgebraicNumber] = []
    for a in numbers:
        if not any(same_number(a, b) for b in out):
            out.append(a)
    out.sort(key=lambda a: a.minpoly != Z)
    return out


def hypothesis_witnesses(P: IntPolynomial, S: Sequence[AlgebraicNumber]) -> List[dict]:
    """For each alpha in S, the roots of P(z) - P(alpha) and the member each one matches."""
    rows = []
    for alpha in S:
        poly, boxes, hits, _ = preimage_roots(P, alpha)
        owner = {}
        for s in S:
            idx = locate_root(s, poly, boxes)
            if idx is not None:
                owner.setdefault(idx, s)
        rows.append({"alpha": alpha, "poly": poly,
                     "roots": [(boxes[h], owner.get(h)) for h in hits]})
    return rows


def build_thm4(P: IntPolynomial, S: Sequence[AlgebraicNumber], N: int,
               base: Optional[Union[Series, IntPolynomial]] = None, K_base: int = 4,
               bits=None, guards: Guards = Guards()) -> ComposedSeries:
    if P.is_zero() or P[0] != 0:
        raise ConstructionError("P must be nonzero with P(0) = 0")
    if N < 0:
        raise ConstructionError("N must be non-negative")
    d, _ = P.exponent_gcd_split()
    S = list(S)
    for alpha in S:
        if not in_omega(P, alpha):
            raise ConstructionError(f"{alpha} lies outside Omega_P")
    for row in hypothesis_witnesses(P, S):
        for box, owner in row["roots"]:
            if owner is None:
                raise ConstructionError(
                    f"hypothesis violated: root of {row['poly']} near {box.center} is not in S "
                    f"(preimage of P({row['alpha']}))")
    images = _dedupe([to_algebraic(eval_in_field(P, FieldElement.generator(a))) for a in S])
    notes: List[str] = []
    if base is None:
        ok, witness = check_closed_relative(images, 1)
        if not ok:
            raise ConstructionError(f"base required: P(S) is not closed (witness {witness})")
        need = N // min(P.support())
        K = K_base
        while True:
            built = build_thm3(images, 1, K, bits if bits is not None else (0,) * (K - 1), guards)
            if built.horizon >= need:
                break
            K += 1
        base = built
    elif isinstance(base, IntPolynomial):
        base = CoefficientSeries.from_polynomial(base)
    coeffs = compose(base, P, N)
    return ComposedSeries(P, base, N, d, coeffs, tuple(S), tuple(images), notes=tuple(notes))


# -- evaluation ------------------------------------------------------------

def _up(q: Fraction, bits: int = 96) -> Fraction:
    """Upper bound for q >= 0 with about ``bits`` significant bits."""
    if q <= 0:
        return Fraction(0)
    shift = bits - (q.numerator.bit_length() - q.denominator.bit_length())
    if shift >= 0:
        return Fraction(-((-q.numerator << shift) // q.denominator), 1 << shift)
    return Fraction(-((-q.numerator) // (q.denominator << -shift)) << -shift)


def _pow_up(r: Fraction, n: int) -> Fraction:
    result, base = Fraction(1), r
    while n:
        if n & 1:
            result = _up(result * base)
        n >>= 1
        if n:
            base = _up(base * base)
    return result


@dataclass(frozen=True)
class Evaluation:
    value: RationalComplex
    tail_bound: Optional[Fraction]
    upto: int


def evaluate(series, z, upto: Optional[int] = None) -> Evaluation:
    """Exact partial sum over n <= upto and a rigorous bound for the rest.

    Beyond the horizon every block starts at some t > horizon and satisfies
    L(block) <= t * rho^-t (the gap recursion puts t_k above the length of
    its factor), so with r >= |z|/rho the unbuilt part is at most
    sum_{t > horizon} t r^t, summed in closed form.
    """
    z = RationalComplex.coerce(z)
    if isinstance(series, ComposedSeries):
        w = series.P.eval_exact(z)
        if w.abs2() >= 1 or z.abs2() >= 1:
            raise ConstructionError("point outside Omega_P")
        return evaluate(series.base, w, None if upto is None else upto)
    rho = Fraction(getattr(series, "rho", 1))
    if z.abs2() >= rho * rho:
        raise ConstructionError(f"point outside the certified radius {rho}")
    H = series.horizon
    if upto is None:
        upto = H if H is not None else len(series.coeffs) - 1
    if H is not None and upto > H:
        raise HorizonError(f"horizon: index {upto} beyond the built horizon {H}")
    total = RationalComplex(0, 0)
    R = sqrt_upper(z.abs2())
    rest = Fraction(0)
    for b in series.blocks:
        if H is not None and b.t > H:
            break
        head = b.factor.truncate(upto - b.t) if b.t <= upto else IntPolynomial()
        if not head.is_zero():
            total = total + head.eval_exact(z) * (z ** b.t) * b.scalar
        for e, c in enumerate(b.factor.coeffs):
            n = b.t + e
            if c and upto < n and (H is None or n <= H):
                rest += abs(c * b.scalar) * _pow_up(R, n)
    if isinstance(series, CoefficientSeries):
        tail = rest if series.horizon is None else None
    else:
        r = _up(R / rho)
        T = H + 1
        tail = rest + _up(_pow_up(r, T) * (T - (T - 1) * r) / ((1 - r) ** 2))
    return Evaluation(total, tail, upto)
