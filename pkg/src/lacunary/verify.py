"""Exact checks of the structural claims on built or imported series.

Every pass/fail decision here is made with integers and rationals, except
``check_radius`` which compares interval enclosures (directed rounding) of
real roots against a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import List, Optional, Sequence

import mpmath

from .algebraic import (
    AlgebraicNumber,
    FieldElement,
    _mpf_to_fraction,
    compare_modulus,
    in_omega,
    reduce,
)
from .bigpoly import IntPolynomial, divides
from .engines import Z, BlockSeries, ComposedSeries, hypothesis_witnesses
from .errors import HorizonError, VerificationError
from .indexsets import IndexSet, PartialSumset, Progression


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _field(x: FieldElement):
    return [_q(c) for c in x.coords]


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "witness": self.witness, "details": self.details}


@dataclass
class VerificationReport:
    checks: List[CheckResult] = field(default_factory=list)
    parameters: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def to_dict(self) -> dict:
        return {"passed": self.passed, "parameters": self.parameters,
                "checks": [c.to_dict() for c in self.checks]}


# -- support ---------------------------------------------------------------

def check_support(series, S: IndexSet, N: Optional[int] = None) -> CheckResult:
    N = series.horizon if N is None else N
    if N is None:
        raise HorizonError("horizon: an explicit N is needed for an exact polynomial")
    count = 0
    for n, a in series.nonzero_upto(N):
        count += 1
        if not S.contains(n):
            return CheckResult("support", False, {"index": n, "value": str(a)}, {"N": N})
    return CheckResult("support", True, {}, {"N": N, "nonzero": count, "set": S.to_spec()})


def check_partial_witnesses(series, A: IndexSet, B: IndexSet, N: Optional[int] = None) -> CheckResult:
    """Every nonzero index n <= N is a_i + b_j with i < j."""
    N = series.horizon if N is None else N
    ps = PartialSumset(A, B, N)
    found = []
    for n, a in series.nonzero_upto(N):
        try:
            i, j = ps.witness(n)
        except KeyError:
            return CheckResult("partial_witness", False, {"index": n, "value": str(a)}, {"N": N})
        found.append([n, i, j])
    return CheckResult("partial_witness", True, {}, {"N": N, "witnesses": found})


# -- lacunarity ------------------------------------------------------------

def check_lacunarity(series) -> CheckResult:
    blocks = series.blocks
    if len(blocks) < 3:
        raise VerificationError(f"too few blocks: need at least 3, have {len(blocks)}")
    rows, ok, witness = [], True, {}
    thm3 = getattr(series, "theorem", "") == "thm3"
    for k, (b, nxt) in enumerate(zip(blocks, blocks[1:]), 1):
        end = b.end
        ratio = Fraction(nxt.t, end) if end else None
        good = ratio is None or ratio >= k
        row = {"k": k, "s": end, "t_next": nxt.t, "ratio": None if ratio is None else _q(ratio)}
        if thm3:
            prods = _prefix(series.polys)
            if k < len(prods):
                D_next = prods[k].degree
                terms = (k * (b.t + b.D) + 1, prods[k].length() + (k + 1), 2 * (k + 1) ** 2 * D_next)
                row["lower_terms"] = list(terms)
                good = good and all(nxt.t >= x for x in terms)
        row["ok"] = good
        rows.append(row)
        if not good and ok:
            ok, witness = False, row
    return CheckResult("lacunarity", ok, witness, {"rows": rows})


def _prefix(polys):
    out, acc = [], IntPolynomial([1])
    for p in polys:
        acc = acc * p
        out.append(acc)
    return out


# -- derivatives at enumerated numbers -------------------------------------

def _block_derivative(b, alpha: AlgebraicNumber, m: int) -> FieldElement:
    """(d/dz)^m [scalar z^t factor] at alpha, by Leibniz; z^(t-j) goes through field powers."""
    x = FieldElement.generator(alpha)
    total = FieldElement.constant(alpha, 0)
    falling = 1
    for j in range(min(m, b.t) + 1):
        if j:
            falling *= b.t - j + 1
        total = total + reduce(b.factor.derivative(m - j), alpha) * (x ** (b.t - j)) * (comb(m, j) * falling)
    return total * b.scalar


def check_derivative_algebraic(series, i: int, m: int) -> CheckResult:
    """Tail divisibility and exact head value of f^(m) at the i-th enumerated number."""
    numbers = getattr(series, "numbers", ())
    if i < 1 or i > len(numbers):
        raise VerificationError(f"enum too short: index {i} with {len(numbers)} numbers")
    if m < 0:
        raise VerificationError("derivative order must be non-negative")
    alpha = numbers[i - 1]
    p = alpha.minpoly
    divisor = p ** (m + 1)
    blocks = series.blocks
    start = max(i, m + 1)
    tail_ok, witness, tail = True, {}, []
    for b in blocks:
        if b.k < start:
            continue
        if p == Z:
            good = b.t + min(b.factor.support()) >= m + 1
        else:
            good = divides(divisor, b.factor)
        tail.append(b.k)
        if not good:
            tail_ok, witness = False, {"k": b.k}
            break
    head = FieldElement.constant(alpha, 0)
    upto = min(len(blocks), max(i, m))
    for b in blocks[:upto]:
        head = head + _block_derivative(b, alpha, m)
    details = {"i": i, "m": m, "alpha": str(alpha), "tail_blocks": tail,
               "head_blocks": upto, "head_value": _field(head), "head_rational": head.is_rational()}
    return CheckResult(f"derivative[i={i},m={m}]", tail_ok, witness, details)


# -- block criterion -------------------------------------------------------

def check_mahler_blocks(series, alpha: AlgebraicNumber, expect: Optional[str] = None) -> CheckResult:
    """Exact block values F_k(alpha) and the finite-depth classification."""
    rho = getattr(series, "rho", Fraction(1))
    if compare_modulus(alpha, rho) >= 0:
        raise VerificationError(f"{alpha} is not inside B(0, {rho})")
    if isinstance(series, ComposedSeries) and not in_omega(series.P, alpha):
        raise VerificationError(f"{alpha} is outside Omega_P")
    values = series.block_values(alpha)
    zero = [v.is_zero() for v in values]
    depth = None
    for k in range(len(zero), 0, -1):
        if not zero[k - 1]:
            break
        depth = k
    if depth is not None:
        label = "eventually-zero"
        wording = f"consistent with an algebraic value at depth {len(values)}"
    else:
        label = "no-vanishing-tail"
        wording = f"consistent with a transcendental value at depth {len(values)}"
    passed = expect is None or expect == label
    details = {"alpha": str(alpha), "classification": label, "depth": depth, "wording": wording,
               "values": [_field(v) for v in values]}
    witness = {} if passed else {"classification": label, "expected": expect}
    return CheckResult(f"mahler[{alpha}]", passed, witness, details)


# -- densities -------------------------------------------------------------

def block_union_count(series, x: int) -> int:
    """#A(x) for A = union over blocks of {t_k, ..., t_k + D_k}."""
    total = 0
    for b in series.blocks:
        if b.t > x:
            break
        total += min(b.t + b.D, x) - b.t + 1
    return total


def check_density_claims(series, strict: bool = False) -> List[CheckResult]:
    """Block-union density bounds (block series) or the zero-count bound (compositions).

    For block series each k contributes #A(x)/x <= 1/k at x = t_k and
    x = t_k + D_k.  The argument behind the bound assumes t_k >= 2 k^2 D_k;
    rows where that fails (always the first block, t_1 = 0) are reported but
    only count against the result when ``strict`` is set.
    """
    if isinstance(series, ComposedSeries):
        N, d = series.horizon, series.d
        zeros = sum(1 for a in series.coeffs[: N + 1] if a == 0)
        bound = Fraction(d - 1, d) * N - d
        ok = zeros >= bound
        det = {"N": N, "d": d, "zeros": zeros, "bound": _q(bound)}
        return [CheckResult("density[zeros]", ok, {} if ok else det, det)]
    results = []
    for b in series.blocks:
        k = b.k
        pre = b.t >= 2 * k * k * b.D
        for label, x in (("t", b.t), ("t+D", b.t + b.D)):
            row = {"k": k, "x": x, "precondition": pre}
            if x == 0:
                row["status"] = "undefined"
                ok = not strict
            else:
                c = block_union_count(series, x)
                ratio = Fraction(c, x)
                row.update(count=c, ratio=_q(ratio), bound=_q(Fraction(1, k)))
                holds = ratio <= Fraction(1, k)
                row["status"] = "pass" if holds else ("fail" if pre else "precondition unmet")
                ok = holds or (not strict and not pre)
            results.append(CheckResult(f"density[k={k},x={label}]", ok, {} if ok else row, row))
    return results


def zero_density(series, x: int) -> Fraction:
    """#L_0(x)/x, counted exactly from the nonzero coefficients."""
    if x < 1:
        raise ValueError("x must be positive")
    nonzero = sum(1 for _ in series.nonzero_upto(x))
    return Fraction(x + 1 - nonzero, x)


# -- radius ----------------------------------------------------------------

def _iv_root(value: int, t: int):
    iv = mpmath.iv
    return iv.exp(iv.log(iv.mpf(value)) / t)


def _ends(x):
    """Exact rational endpoints of an mpmath interval."""
    return tuple(_mpf_to_fraction(mpmath.mp.make_mpf(e)) for e in x._mpi_)


def _decimal(q: Fraction, digits: int, up: bool) -> str:
    scale = 10 ** digits
    n = -((-q.numerator * scale) // q.denominator) if up else (q.numerator * scale) // q.denominator
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _fmt(x, digits: int = 20) -> List[str]:
    """Interval as [lower rounded down, upper rounded up]."""
    lo, hi = _ends(x)
    return [_decimal(lo, digits, False), _decimal(hi, digits, True)]


def default_tolerance(K: int) -> float:
    return 0.05 if K >= 6 else 0.15


def check_radius(series: BlockSeries, tolerance: Optional[float] = None, dps: int = 40) -> CheckResult:
    """Trend of c_k^(1/t_k) toward 1/rho and H(P_1...P_k)^(1/t_k) toward 1."""
    if len(series.blocks) < 2:
        raise VerificationError("too few blocks: radius proxies need at least 2")
    rho = Fraction(series.rho)
    K = len(series.blocks)
    tol = default_tolerance(K) if tolerance is None else tolerance
    rows = []
    with mpmath.workdps(dps):
        iv = mpmath.iv
        iv.dps = dps
        target = iv.mpf(rho.denominator) / iv.mpf(rho.numerator)
        for b in series.blocks:
            if b.t == 0:
                continue
            H = b.factor.height()
            c_root = _iv_root(b.scalar, b.t)
            h_root = _iv_root(H, b.t)
            rows.append({"k": b.k, "t": b.t, "H": H, "c_root": _fmt(c_root), "H_root": _fmt(h_root),
                         "t_root": _fmt(_iv_root(b.t, b.t)), "H_le_t": H <= b.t,
                         "_c": c_root, "_h": h_root})
        last = rows[-1]
        c_err = max(abs(e) for e in _ends(last["_c"] - target))
        h_err = max(abs(e) for e in _ends(last["_h"] - 1))
        ok = c_err <= Fraction(tol) and h_err <= Fraction(tol)
    exact = rho.numerator == 1 and series.blocks[-1].scalar == rho.denominator ** series.blocks[-1].t
    for r in rows:
        r.pop("_c")
        r.pop("_h")
    details = {"rho": _q(rho), "tolerance": tol, "rows": rows, "c_error_upper": _decimal(c_err, 20, True),
               "H_error_upper": _decimal(h_err, 20, True), "exact_hit": exact,
               "exact_value": _q(Fraction(rho.denominator, rho.numerator)) if exact else None}
    return CheckResult("radius", ok, {} if ok else {"k": last["k"]}, details)


# -- composition hypothesis ------------------------------------------------

def check_thm4_hypothesis(P: IntPolynomial, S: Sequence[AlgebraicNumber]) -> CheckResult:
    S = list(S)
    for alpha in S:
        if not in_omega(P, alpha):
            return CheckResult("thm4_hypothesis", False, {"outside_omega": str(alpha)}, {})
    rows = []
    for row in hypothesis_witnesses(P, S):
        matched = []
        for box, owner in row["roots"]:
            if owner is None:
                w = {"alpha": str(row["alpha"]), "poly": str(row["poly"]),
                     "enclosure": [_q(box.re_lo), _q(box.re_hi), _q(box.im_lo), _q(box.im_hi)],
                     "approx": str(complex(box.center))}
                return CheckResult("thm4_hypothesis", False, w, {"rows": rows})
            matched.append(str(owner))
        rows.append({"alpha": str(row["alpha"]), "poly": str(row["poly"]), "matched": matched})
    return CheckResult("thm4_hypothesis", True, {}, {"rows": rows})


# -- orchestration ---------------------------------------------------------

def verify_series(series, checks: Optional[Sequence[str]] = None, alphas: Sequence[AlgebraicNumber] = (),
                  max_derivative: int = 1, tolerance: Optional[float] = None,
                  sets: Optional[dict] = None) -> VerificationReport:
    """Run the checks that apply to the series' construction.

    ``sets`` maps "A"/"B" to IndexSets for the support checks of sumset
    builds; ``alphas`` are extra points for the block criterion.
    """
    from .indexsets import Sumset, from_spec

    theorem = getattr(series, "theorem", "imported")
    report = VerificationReport(parameters={"theorem": theorem, "checks": list(checks or []),
                                            "alphas": [str(a) for a in alphas],
                                            "max_derivative": max_derivative, "tolerance": tolerance})
    if checks is None:
        checks = {"thm1": ["support", "lacunarity", "derivative", "mahler"],
                  "thm2": ["support", "lacunarity"],
                  "thm3": ["lacunarity", "mahler", "density", "radius"],
                  "thm4": ["hypothesis", "support", "density", "mahler"]}.get(theorem, ["lacunarity"])
    sets = dict(sets or {})
    params = getattr(series, "params", {}) or {}
    for key in ("A", "B"):
        if key not in sets and key in params:
            sets[key] = from_spec(params[key])
    for name in checks:
        if name == "support":
            if isinstance(series, ComposedSeries):
                report.add(check_support(series, Progression(0, series.d)))
            elif theorem == "thm1":
                N = series.horizon
                report.add(check_support(series, Sumset(sets["A"], sets["B"], N), N))
            elif theorem == "thm2":
                report.add(check_partial_witnesses(series, sets["A"], sets["B"]))
        elif name == "lacunarity":
            if len(series.blocks) >= 3:
                report.add(check_lacunarity(series))
        elif name == "derivative":
            numbers = getattr(series, "numbers", ())
            for i in range(1, min(len(series.blocks), len(numbers)) + 1):
                for m in range(max_derivative + 1):
                    report.add(check_derivative_algebraic(series, i, m))
        elif name == "mahler":
            members = list(getattr(series, "numbers", ())) if theorem in ("thm3", "thm4") else []
            for a in members:
                report.add(check_mahler_blocks(series, a, "eventually-zero"))
            for a in alphas:
                report.add(check_mahler_blocks(series, a))
        elif name == "density":
            for r in check_density_claims(series):
                report.add(r)
        elif name == "radius":
            if theorem == "thm3" and len(series.blocks) >= 2:
                report.add(check_radius(series, tolerance))
        elif name == "hypothesis":
            if isinstance(series, ComposedSeries):
                report.add(check_thm4_hypothesis(series.P, series.numbers))
        else:
            raise VerificationError(f"unknown check {name!r}")
    return report
