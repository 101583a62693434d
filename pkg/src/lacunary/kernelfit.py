"""Support fitting: find Q in Z[z] with every coefficient of P*Q outside a given set equal to zero.

The coefficients of P*Q are linear forms in the unknown coefficients of Q, so
each forbidden index contributes one homogeneous equation.  Once the set has
more than deg(P) members below L + deg(P), the system in L + 1 unknowns has
a non-trivial integer solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .bigpoly import IntPolynomial
from .errors import BoundExceeded, KernelFitError
from .indexsets import IndexSet

ESCALATION_CAP = 64


@dataclass(frozen=True)
class IntegerMatrix:
    rows: Tuple[Tuple[int, ...], ...]
    ncols: int
    row_labels: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.ncols < 1:
            raise ValueError("matrix needs at least one column")
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: Optional[int] = None, labels=()):
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("cannot infer column count of an empty matrix")
            ncols = len(rows[0])
        return cls(rows, ncols, tuple(labels))

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def apply(self, v: Sequence[int]) -> List[int]:
        return [sum(a * b for a, b in zip(r, v)) for r in self.rows]


@dataclass(frozen=True)
class FitResult:
    Q: IntPolynomial
    L_used: int
    m: int
    product: IntPolynomial
    forbidden_checked: Tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "Q": self.Q.to_strings(),
            "L_used": self.L_used,
            "m": self.m,
            "product": self.product.to_strings(),
            "forbidden_checked": list(self.forbidden_checked),
        }


def minimal_ansatz(d: int, s: IndexSet) -> int:
    """Smallest L >= 0 with #S(L + d) > d."""
    if d < 0:
        raise ValueError("negative degree")
    # the (d+1)-th member decides it: #S(L+d) > d iff s_{d+1} <= L + d
    try:
        target = s.nth(d + 1)
    except BoundExceeded as exc:
        raise KernelFitError(f"set too sparse at bound: fewer than {d + 1} members certified") from exc
    return max(0, target - d)


def build_constraints(p: IntPolynomial, s: IndexSet, L: int) -> IntegerMatrix:
    d = p.degree
    if d is None:
        raise KernelFitError("P must be nonzero")
    top = L + d
    try:
        allowed = set(s.members_upto(top))
    except BoundExceeded as exc:
        raise KernelFitError(f"set too sparse at bound: need membership up to {top}") from exc
    forbidden = [n for n in range(top + 1) if n not in allowed]
    rows = [[p[n - i] if 0 <= n - i <= d else 0 for i in range(L + 1)] for n in forbidden]
    return IntegerMatrix.from_rows(rows, L + 1, forbidden)


def _rref(rows: Sequence[Sequence[int]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q and its pivot columns."""
    a = [[Fraction(x) for x in r] for r in rows]
    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        lead = a[rank][col]
        a[rank] = [x / lead for x in a[rank]]
        for i in range(len(a)):
            if i != rank and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        pivots.append(col)
        rank += 1
        if rank == len(a):
            break
    return a[:rank], pivots


def integer_kernel(m: IntegerMatrix) -> List[Tuple[int, ...]]:
    """Primitive integer vectors spanning {v : M v = 0} over Q, one per free column.

    Each vector comes from the reduced echelon form with a 1 in its own free
    column and 0 in the others; denominators are cleared, the content divided
    out, and the first nonzero entry made positive.
    """
    n = m.ncols
    reduced, pivots = _rref(m.rows, n)
    free = [c for c in range(n) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in v]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if next(x for x in ints if x) < 0:
            g = -g
        basis.append(tuple(x // g for x in ints))
    return basis


def rational_nullity(m: IntegerMatrix) -> int:
    """n - rank(M), by fraction-free (Bareiss) elimination."""
    a = [list(r) for r in m.rows]
    rank = 0
    prev = 1
    for col in range(m.ncols):
        piv = next((i for i in range(rank, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for i in range(rank + 1, len(a)):
            a[i] = [(a[rank][col] * a[i][j] - a[i][col] * a[rank][j]) // prev for j in range(m.ncols)]
        prev = a[rank][col]
        rank += 1
        if rank == len(a):
            break
    return m.ncols - rank


def _l1_key(v: Sequence[int]):
    return (sum(abs(x) for x in v), tuple(v))


def _normalize(v: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    v = [x // g for x in v]
    top = max(i for i, x in enumerate(v) if x)
    if v[top] < 0:
        v = [-x for x in v]
    return tuple(v)


def support_fit(p: IntPolynomial, s: IndexSet, cap: Optional[int] = None) -> FitResult:
    """Nonzero primitive Q of least ansatz degree with support(P*Q) inside S."""
    d = p.degree
    if d is None:
        raise KernelFitError("P must be nonzero")
    try:
        guaranteed = minimal_ansatz(d, s)
    except KernelFitError:
        guaranteed = None
    if cap is None:
        if guaranteed is not None:
            cap = guaranteed + ESCALATION_CAP
        elif s.bound is not None:
            cap = max(0, s.bound - d)
        else:
            raise KernelFitError("set too sparse at bound")
    for L in range(cap + 1):
        if s.bound is not None and L + d > s.bound:
            raise KernelFitError(f"set too sparse at bound: ansatz degree {L} needs membership up to {L + d} > {s.bound}")
        mat = build_constraints(p, s, L)
        if rational_nullity(mat) == 0:
            # past the counting bound this cannot happen; the cap is only a guard
            continue
        basis = integer_kernel(mat)
        assert basis, "rank and lattice kernel disagree"
        best = min((_normalize(v) for v in basis), key=_l1_key)
        q = IntPolynomial(best)
        prod = p * q
        forbidden = mat.row_labels
        # exact re-expansion, independent of the solver
        bad = [n for n in range(prod.degree + 1) if prod[n] != 0 and not s.contains(n)]
        if bad:
            raise KernelFitError(f"internal: coefficient at forbidden index {bad[0]} is nonzero")
        return FitResult(q, L, q.degree, prod, tuple(forbidden))
    if guaranteed is None:
        raise KernelFitError(f"set too sparse at bound: no kernel for L <= {cap} within bound {s.bound}")
    raise KernelFitError(f"escalation cap exceeded: no kernel for L <= {cap} (degree {d}, "
                         f"counting bound {guaranteed})")
