"""Sets of non-negative integers with explicit certification bounds.

Each set knows the largest index up to which its membership answers are
exact (``bound``; ``None`` means exact everywhere).  Queries past the bound
raise :class:`BoundExceeded` instead of guessing.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import BoundExceeded, ConfigError


def _bits_to_list(bits: int) -> List[int]:
    s = bin(bits)[:1:-1]
    return [i for i, c in enumerate(s) if c == "1"]


def _min_bound(*bounds: Optional[int]) -> Optional[int]:
    finite = [b for b in bounds if b is not None]
    return min(finite) if finite else None


class IndexSet:
    """Base class; subclasses provide ``_contains`` and ascending ``_iter``."""

    kind = "abstract"
    bound: Optional[int] = None

    def _check(self, x: int) -> None:
        if self.bound is not None and x > self.bound:
            raise BoundExceeded(f"bound exceeded: {x} > certification bound {self.bound} of {self.kind} set")

    def contains(self, n: int) -> bool:
        self._check(n)
        return n >= 0 and self._contains(n)

    __contains__ = contains

    def iter_members(self) -> Iterator[int]:
        """Ascending members up to the certification bound."""
        for n in self._iter():
            if self.bound is not None and n > self.bound:
                return
            yield n

    def members_upto(self, x: int) -> List[int]:
        self._check(x)
        out = []
        for n in self._iter():
            if n > x:
                break
            out.append(n)
        return out

    def count_upto(self, x: int) -> int:
        return len(self.members_upto(x))

    def nth(self, i: int) -> int:
        """The i-th smallest member, 1-based."""
        if i < 1:
            raise ValueError("members are numbered from 1")
        for k, n in enumerate(self.iter_members(), 1):
            if k == i:
                return n
        raise BoundExceeded(f"bound exceeded: fewer than {i} members certified in {self.kind} set")

    def index_of(self, n: int) -> int:
        """1-based position of a member n."""
        if not self.contains(n):
            raise KeyError(n)
        return self.count_upto(n)

    def min(self) -> int:
        return self.nth(1)

    def next_member(self, x: int) -> int:
        """Smallest member >= x."""
        for n in self.iter_members():
            if n >= x:
                return n
        raise BoundExceeded(f"bound exceeded: no certified member >= {x} in {self.kind} set")

    def is_finite(self) -> bool:
        return False

    def _contains(self, n: int) -> bool:
        raise NotImplementedError

    def _iter(self) -> Iterator[int]:
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    def __repr__(self):
        return f"IndexSet({json.dumps(self.to_spec())})"


class Explicit(IndexSet):
    """A finite list; with ``bound`` set it is read as a certified prefix of a larger set."""

    kind = "list"

    def __init__(self, elements: Iterable[int], bound: Optional[int] = None):
        items = sorted(set(int(e) for e in elements))
        if items and items[0] < 0:
            raise ValueError("index sets hold non-negative integers")
        if bound is not None and items and items[-1] > bound:
            raise ValueError("element beyond the declared bound")
        self.elements = items
        self._set = set(items)
        self.bound = bound

    def _contains(self, n):
        return n in self._set

    def _iter(self):
        return iter(self.elements)

    def members_upto(self, x):
        self._check(x)
        return self.elements[: bisect.bisect_right(self.elements, x)]

    def count_upto(self, x):
        self._check(x)
        return bisect.bisect_right(self.elements, x)

    def index_of(self, n):
        if not self.contains(n):
            raise KeyError(n)
        return bisect.bisect_left(self.elements, n) + 1

    def is_finite(self):
        return self.bound is None

    def to_spec(self):
        spec = {"kind": "list", "elements": self.elements}
        if self.bound is not None:
            spec["bound"] = self.bound
        return spec


class Progression(IndexSet):
    """{offset + k*step : k >= 0}."""

    kind = "progression"

    def __init__(self, offset: int = 0, step: int = 1, bound: Optional[int] = None):
        if offset < 0 or step < 1:
            raise ValueError("progression needs offset >= 0 and step >= 1")
        self.offset, self.step, self.bound = offset, step, bound

    def _contains(self, n):
        return n >= self.offset and (n - self.offset) % self.step == 0

    def _iter(self):
        n = self.offset
        while True:
            yield n
            n += self.step

    def count_upto(self, x):
        self._check(x)
        if x < self.offset:
            return 0
        return (x - self.offset) // self.step + 1

    def members_upto(self, x):
        self._check(x)
        return list(range(self.offset, x + 1, self.step))

    def nth(self, i):
        if i < 1:
            raise ValueError("members are numbered from 1")
        n = self.offset + (i - 1) * self.step
        self._check(n)
        return n

    def index_of(self, n):
        if not self.contains(n):
            raise KeyError(n)
        return (n - self.offset) // self.step + 1

    def next_member(self, x):
        n = self.offset if x <= self.offset else self.offset + -(-(x - self.offset) // self.step) * self.step
        self._check(n)
        return n

    def to_spec(self):
        spec = {"kind": "progression", "offset": self.offset, "step": self.step}
        if self.bound is not None:
            spec["bound"] = self.bound
        return spec


class Materialized(IndexSet):
    """Shared machinery for sets stored as a sorted member list up to their bound."""

    def _store(self, members: Sequence[int]):
        self.elements = list(members)
        self._set = set(self.elements)

    def _contains(self, n):
        return n in self._set

    def _iter(self):
        return iter(self.elements)

    def members_upto(self, x):
        self._check(x)
        return self.elements[: bisect.bisect_right(self.elements, x)]

    def count_upto(self, x):
        self._check(x)
        return bisect.bisect_right(self.elements, x)

    def index_of(self, n):
        if not self.contains(n):
            raise KeyError(n)
        return bisect.bisect_left(self.elements, n) + 1

    def next_member(self, x):
        self._check(max(x, 0))
        k = bisect.bisect_left(self.elements, x)
        if k == len(self.elements):
            raise BoundExceeded(f"bound exceeded: no certified member >= {x} in {self.kind} set")
        return self.elements[k]


class Primes(Materialized):
    kind = "primes"

    def __init__(self, bound: int):
        if bound < 0:
            raise ValueError("negative bound")
        self.bound = bound
        sieve = bytearray([1]) * (bound + 1)
        sieve[0:2] = b"\x00\x00"[: min(2, bound + 1)]
        for p in range(2, int(bound ** 0.5) + 1):
            if sieve[p]:
                sieve[p * p:: p] = bytearray(len(range(p * p, bound + 1, p)))
        self._store([n for n in range(bound + 1) if sieve[n]])

    def to_spec(self):
        return {"kind": "primes", "bound": self.bound}


def _require(parent: IndexSet, bound: int):
    if parent.bound is not None and parent.bound < bound:
        raise BoundExceeded(f"bound exceeded: operand certified only up to {parent.bound}, need {bound}")


class _Lazy(Materialized):
    """Membership answered by direct search; the member list is built on first count."""

    _built = False

    def _materialize(self):
        if not self._built:
            self._store(self._compute())
            self._built = True

    def _compute(self) -> List[int]:
        raise NotImplementedError

    def _iter(self):
        self._materialize()
        return iter(self.elements)

    def members_upto(self, x):
        self._materialize()
        return Materialized.members_upto(self, x)

    def count_upto(self, x):
        self._materialize()
        return Materialized.count_upto(self, x)

    def index_of(self, n):
        self._materialize()
        return Materialized.index_of(self, n)

    def next_member(self, x):
        self._materialize()
        return Materialized.next_member(self, x)


class Sumset(_Lazy):
    """A + B restricted to [0, bound]."""

    kind = "sumset"

    def __init__(self, a: IndexSet, b: IndexSet, bound: int):
        _require(a, bound)
        _require(b, bound)
        self.a, self.b, self.bound = a, b, bound

    def _contains(self, n):
        if self._built:
            return n in self._set
        for x in self.a.iter_members():
            if x > n:
                return False
            if self.b.contains(n - x):
                return True
        return False

    def _compute(self):
        xs, ys = self.a.members_upto(self.bound), self.b.members_upto(self.bound)
        if len(xs) > len(ys):
            xs, ys = ys, xs
        ybits = 0
        for y in ys:
            ybits |= 1 << y
        acc = 0
        for x in xs:
            acc |= ybits << x
        return _bits_to_list(acc & ((1 << (self.bound + 1)) - 1))

    def to_spec(self):
        return {"kind": "sumset", "a": self.a.to_spec(), "b": self.b.to_spec(), "bound": self.bound}


class PartialSumset(_Lazy):
    """{a_i + b_j : i < j} restricted to [0, bound], both sets listed increasingly."""

    kind = "partial"

    def __init__(self, a: IndexSet, b: IndexSet, bound: int):
        _require(a, bound)
        _require(b, bound)
        self.a, self.b, self.bound = a, b, bound

    def _contains(self, n):
        if self._built:
            return n in self._set
        return self._search(n) is not None

    def _search(self, n: int) -> Optional[Tuple[int, int]]:
        for j, y in enumerate(self.b.iter_members(), 1):
            if y > n:
                return None
            x = n - y
            if self.a.contains(x):
                i = self.a.index_of(x)
                if i < j:
                    return i, j
        return None

    def _compute(self):
        xs, ys = self.a.members_upto(self.bound), self.b.members_upto(self.bound)
        prefix = acc = 0
        for j, y in enumerate(ys):
            # prefix holds a_1..a_j (1-based), i.e. exactly the i < j+1 partners of b_{j+1}
            acc |= prefix << y
            if j < len(xs):
                prefix |= 1 << xs[j]
        return _bits_to_list(acc & ((1 << (self.bound + 1)) - 1))

    def witness(self, n: int) -> Tuple[int, int]:
        """(i, j) with n = a_i + b_j, i < j; smallest j first, then smallest i."""
        self._check(n)
        found = self._search(n) if n >= 0 else None
        if found is None:
            raise KeyError(n)
        return found

    def to_spec(self):
        return {"kind": "partial", "a": self.a.to_spec(), "b": self.b.to_spec(), "bound": self.bound}


class Union(IndexSet):
    kind = "union"

    def __init__(self, parts: Sequence[IndexSet]):
        self.parts = list(parts)
        self.bound = _min_bound(*(p.bound for p in self.parts))

    def _contains(self, n):
        return any(p._contains(n) for p in self.parts)

    def _iter(self):
        import heapq
        last = None
        for n in heapq.merge(*(p.iter_members() for p in self.parts)):
            if n != last:
                yield n
                last = n

    def is_finite(self):
        return all(p.is_finite() for p in self.parts)

    def to_spec(self):
        return {"kind": "union", "parts": [p.to_spec() for p in self.parts]}


class Complement(IndexSet):
    """[0, bound] minus a set."""

    kind = "complement"

    def __init__(self, base: IndexSet, bound: int):
        _require(base, bound)
        self.base, self.bound = base, bound

    def _contains(self, n):
        return not self.base._contains(n)

    def _iter(self):
        for n in range(self.bound + 1):
            if not self.base._contains(n):
                yield n

    def count_upto(self, x):
        self._check(x)
        return x + 1 - self.base.count_upto(x)

    def to_spec(self):
        return {"kind": "complement", "base": self.base.to_spec(), "bound": self.bound}


class Intervals(IndexSet):
    """Finite union of closed integer intervals [lo, hi]."""

    kind = "intervals"

    def __init__(self, spans: Iterable[Tuple[int, int]]):
        merged: List[List[int]] = []
        for lo, hi in sorted((int(a), int(b)) for a, b in spans):
            if lo > hi:
                continue
            if merged and lo <= merged[-1][1] + 1:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        self.spans = [tuple(s) for s in merged]
        self._starts = [s[0] for s in self.spans]
        self.bound = None

    def _contains(self, n):
        k = bisect.bisect_right(self._starts, n) - 1
        return k >= 0 and n <= self.spans[k][1]

    def _iter(self):
        for lo, hi in self.spans:
            yield from range(lo, hi + 1)

    def count_upto(self, x):
        total = 0
        for lo, hi in self.spans:
            if lo > x:
                break
            total += min(hi, x) - lo + 1
        return total

    def is_finite(self):
        return True

    def to_spec(self):
        return {"kind": "intervals", "spans": [list(s) for s in self.spans]}


ALL = Progression(0, 1)
EVENS = Progression(0, 2)


# -- operations ------------------------------------------------------------

def sumset(a: IndexSet, b: IndexSet, bound: int) -> Sumset:
    return Sumset(a, b, bound)


def partial_sumset(a: IndexSet, b: IndexSet, bound: int) -> PartialSumset:
    return PartialSumset(a, b, bound)


def count_upto(s: IndexSet, x: int) -> int:
    return s.count_upto(x)


@dataclass(frozen=True)
class DensityProfile:
    checkpoints: tuple   # of (x, count, ratio)

    def to_dict(self) -> dict:
        return {"checkpoints": [{"x": x, "count": c, "ratio": f"{r.numerator}/{r.denominator}"}
                                for x, c, r in self.checkpoints]}


def density_profile(s: IndexSet, checkpoints: Iterable[int]) -> DensityProfile:
    rows = []
    for x in checkpoints:
        if x < 1:
            raise ValueError("density checkpoints must be positive")
        c = s.count_upto(x)
        rows.append((x, c, Fraction(c, x)))
    return DensityProfile(tuple(rows))


def coefficient_level_set(stream: Iterable[Tuple[int, int]], level: int, bound: int) -> Explicit:
    """Indices n <= bound with |a_n| <= level, from a dense (n, a_n) stream."""
    if level is None or level < 0:
        raise ValueError("level must be a finite non-negative integer")
    members = []
    expected = 0
    for n, a in stream:
        if n > bound:
            break
        if n != expected:
            raise ConfigError(f"incomplete stream: expected index {expected}, got {n}")
        if abs(a) <= level:
            members.append(n)
        expected += 1
    if expected <= bound:
        raise ConfigError(f"incomplete stream: stops before index {bound}")
    return Explicit(members, bound=bound)


# -- specs -----------------------------------------------------------------

def from_spec(spec: dict) -> IndexSet:
    """Build an IndexSet from its tagged-object form."""
    kind = spec.get("kind")
    bound = spec.get("bound")
    if kind == "list":
        return Explicit(spec.get("elements", []), bound)
    if kind == "progression":
        return Progression(int(spec.get("offset", 0)), int(spec.get("step", 1)), bound)
    if kind == "all":
        return Progression(0, 1, bound)
    if kind == "primes":
        if bound is None:
            raise ConfigError("primes need a bound")
        return Primes(int(bound))
    if kind in ("sumset", "partial"):
        a, b = from_spec(spec["a"]), from_spec(spec["b"])
        if bound is None:
            bound = _min_bound(a.bound, b.bound)
            if bound is None:
                raise ConfigError(f"{kind} needs an explicit bound")
        cls = Sumset if kind == "sumset" else PartialSumset
        return cls(a, b, int(bound))
    if kind == "union":
        return Union([from_spec(p) for p in spec["parts"]])
    if kind == "complement":
        return Complement(from_spec(spec["base"]), int(bound))
    if kind == "intervals":
        return Intervals(spec["spans"])
    raise ConfigError(f"unknown index set kind {kind!r}")


def _split_top(text: str, sep: str) -> List[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def parse_set(text: str) -> IndexSet:
    """Parse a set from shorthand or a JSON tagged object.

    Shorthand: ``all``, ``evens``, ``odds``, ``primes:N``, ``list:1,4,9``,
    ``progression:OFFSET:STEP`` (``ap:`` also accepted), ``sumset(X; Y; BOUND)``
    and ``partial(X; Y; BOUND)`` where X, Y are nested set texts.
    """
    t = text.strip()
    try:
        if t.startswith("{"):
            return from_spec(json.loads(t))
        low = t.lower()
        if low in ("all", "n", "naturals"):
            return Progression(0, 1)
        if low == "evens":
            return Progression(0, 2)
        if low == "odds":
            return Progression(1, 2)
        if low.startswith("primes:"):
            return Primes(int(t.split(":", 1)[1]))
        if low.startswith("list:"):
            body = t.split(":", 1)[1]
            return Explicit(int(x) for x in body.split(",") if x.strip())
        if low.startswith(("progression:", "ap:")):
            _, offset, step = t.split(":")
            return Progression(int(offset), int(step))
        for name, cls in (("sumset", Sumset), ("partial", PartialSumset)):
            if low.startswith(name + "(") and t.endswith(")"):
                args = _split_top(t[len(name) + 1:-1], ";")
                a, b = parse_set(args[0]), parse_set(args[1])
                bound = int(args[2]) if len(args) > 2 else _min_bound(a.bound, b.bound)
                if bound is None:
                    raise ConfigError(f"{name} needs an explicit bound")
                return cls(a, b, bound)
    except (ValueError, KeyError, IndexError) as exc:
        raise ConfigError(f"cannot parse index set {text!r}: {exc}") from exc
    raise ConfigError(f"cannot parse index set {text!r}")
