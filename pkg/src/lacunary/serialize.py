"""Line-oriented JSON for series, algebraic numbers and input specs.

A serialized series is a header document followed by one document per
coefficient, ``{"n": 17, "a": "-1"}``.  Integers that can grow without bound
are written as decimal strings and rationals as ``"p/q"``; keys are sorted so
equal inputs give byte-identical output.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import IO, Iterable, Iterator, List, Optional

from .algebraic import AlgebraicNumber, make_algebraic, rational
from .bigpoly import IntPolynomial
from .engines import Block, BlockSeries, CoefficientSeries, ComposedSeries, block_metadata, coefficients
from .errors import AlgebraicError, ConfigError
from .intervals import Box

FORMAT = "lacunary-series/1"


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def q_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def number_to_dict(alpha: AlgebraicNumber) -> dict:
    e = alpha.enclosure
    return {"minpoly": alpha.minpoly.to_strings(),
            "enclosure": [q_str(e.re_lo), q_str(e.re_hi), q_str(e.im_lo), q_str(e.im_hi)]}


def number_from_dict(doc: dict) -> AlgebraicNumber:
    p = IntPolynomial.from_strings(doc["minpoly"])
    if "enclosure" in doc:
        lo_re, hi_re, lo_im, hi_im = (Fraction(x) for x in doc["enclosure"])
        return AlgebraicNumber(p, Box(lo_re, hi_re, lo_im, hi_im))
    return make_algebraic(p, _parse_complex(doc.get("hint", "0")))


def _block_to_dict(b: Block) -> dict:
    doc = {"k": b.k, "t": b.t, "scalar": str(b.scalar), "factor": b.factor.to_strings(), "D": b.D, "m": b.m}
    if b.Q is not None:
        doc["Q"] = b.Q.to_strings()
    return doc


def _block_from_dict(doc: dict) -> Block:
    q = IntPolynomial.from_strings(doc["Q"]) if "Q" in doc else None
    return Block(doc["k"], doc["t"], int(doc["scalar"]), IntPolynomial.from_strings(doc["factor"]),
                 doc["D"], doc["m"], q)


def _metadata(series) -> list:
    rows = []
    for row in block_metadata(series):
        row = dict(row)
        row["ratio"] = None if row["ratio"] is None else q_str(row["ratio"])
        rows.append(row)
    return rows


def header(series) -> dict:
    if isinstance(series, ComposedSeries):
        return {"type": "header", "format": FORMAT, "theorem": "thm4", "horizon": series.horizon,
                "P": series.P.to_strings(), "d": series.d,
                "numbers": [number_to_dict(a) for a in series.numbers],
                "images": [number_to_dict(a) for a in series.images],
                "base": header(series.base), "notes": list(series.notes)}
    if isinstance(series, CoefficientSeries):
        return {"type": "header", "format": FORMAT, "theorem": "imported", "horizon": series.horizon,
                "coeffs": [str(c) for c in series.coeffs]}
    return {"type": "header", "format": FORMAT, "theorem": series.theorem, "horizon": series.horizon,
            "rho": q_str(series.rho), "bits": "".join(map(str, series.bits)),
            "numbers": [number_to_dict(a) for a in series.numbers],
            "polys": [p.to_strings() for p in series.polys],
            "params": series.params, "intermediates": list(series.intermediates),
            "notes": list(series.notes),
            "blocks": [_block_to_dict(b) for b in series.blocks],
            "metadata": _metadata(series)}


def series_from_header(doc: dict):
    if doc.get("format") != FORMAT:
        raise ConfigError(f"unknown series format {doc.get('format')!r}")
    theorem = doc["theorem"]
    if theorem == "thm4":
        base = series_from_header(doc["base"])
        from .engines import compose
        P = IntPolynomial.from_strings(doc["P"])
        coeffs = compose(base, P, doc["horizon"])
        return ComposedSeries(P, base, doc["horizon"], doc["d"], coeffs,
                              tuple(number_from_dict(a) for a in doc["numbers"]),
                              tuple(number_from_dict(a) for a in doc["images"]),
                              notes=tuple(doc.get("notes", ())))
    if theorem == "imported":
        return CoefficientSeries(tuple(int(c) for c in doc["coeffs"]), doc["horizon"])
    return BlockSeries(
        theorem, tuple(_block_from_dict(b) for b in doc["blocks"]), doc["horizon"], Fraction(doc["rho"]),
        tuple(int(c) for c in doc["bits"]), tuple(number_from_dict(a) for a in doc["numbers"]),
        tuple(IntPolynomial.from_strings(p) for p in doc["polys"]), doc["params"],
        tuple(doc["intermediates"]), tuple(doc["notes"]))


def write_series(series, out: IO[str], N: Optional[int] = None, dense: bool = False) -> None:
    head = header(series)
    if N is not None:
        head["emitted_upto"] = N
        head["emit"] = "dense" if dense else "sparse"
    out.write(dumps(head) + "\n")
    if N is not None:
        for n, a in coefficients(series, N, dense):
            out.write(dumps({"n": n, "a": str(a)}) + "\n")


def default_emit_limit(series) -> int:
    """Last exponent of the built blocks (or the truncation degree)."""
    if isinstance(series, ComposedSeries):
        return series.horizon
    if not series.blocks:
        return 0
    end = series.blocks[-1].end
    return end if series.horizon is None else min(end, series.horizon)


def read_series(lines: Iterable[str]):
    """Rebuild a series from its serialized form.

    Without a header the coefficient lines become an imported series whose
    horizon is the largest index listed.  With a header, any coefficient lines
    are checked against the blocks.
    """
    docs = [json.loads(line) for line in lines if line.strip()]
    if not docs:
        raise ConfigError("empty series input")
    if docs[0].get("type") == "header":
        series = series_from_header(docs[0])
        for doc in docs[1:]:
            n, a = int(doc["n"]), int(doc["a"])
            if series.coefficient(n) != a:
                raise ConfigError(f"coefficient stream disagrees with blocks at n = {n}")
        return series
    pairs = [(int(d["n"]), int(d["a"])) for d in docs]
    ns = [n for n, _ in pairs]
    if sorted(ns) != list(range(len(ns))):
        raise ConfigError("incomplete stream: headerless input must list every index from 0")
    return CoefficientSeries.from_pairs(pairs, horizon=max(ns))


# -- algebraic number lists ------------------------------------------------

def _parse_complex(text: str) -> complex:
    t = str(text).strip().replace(" ", "").replace("i", "j")
    try:
        return complex(t)
    except ValueError as exc:
        raise ConfigError(f"cannot parse complex hint {text!r}") from exc


_POLY_TOKEN = re.compile(r"^\[([^\]]*)\]@(.+)$")


def parse_number(token: str) -> AlgebraicNumber:
    """``"1/2"`` for a rational, ``"[1 2 4]@-0.25+0.43i"`` for a root of 1 + 2z + 4z^2 near a hint."""
    t = token.strip()
    m = _POLY_TOKEN.match(t)
    try:
        if m:
            coeffs = [int(c) for c in re.split(r"[\s,]+", m.group(1).strip()) if c]
            return make_algebraic(IntPolynomial(coeffs), _parse_complex(m.group(2)))
        return rational(Fraction(t))
    except (ValueError, ZeroDivisionError, AlgebraicError) as exc:
        raise ConfigError(f"cannot parse algebraic number {token!r}: {exc}") from exc


def parse_numbers(text: str) -> List[AlgebraicNumber]:
    """Comma-separated tokens (see ``parse_number``) or a JSON list of number documents."""
    t = text.strip()
    if t.startswith("[{") or t.startswith("{"):
        docs = json.loads(t)
        if isinstance(docs, dict):
            docs = [docs]
        return [number_from_dict(d) for d in docs]
    tokens, depth, cur = [], 0, ""
    for ch in t:
        depth += ch == "["
        depth -= ch == "]"
        if ch == "," and depth == 0:
            tokens.append(cur)
            cur = ""
        else:
            cur += ch
    tokens.append(cur)
    return [parse_number(x) for x in tokens if x.strip()]


def parse_poly(text: str) -> IntPolynomial:
    """Exponent-indexed integer coefficients separated by commas or spaces."""
    try:
        return IntPolynomial(int(c) for c in re.split(r"[\s,]+", text.strip().strip("[]")) if c)
    except ValueError as exc:
        raise ConfigError(f"cannot parse polynomial {text!r}") from exc


def iter_json_lines(stream: IO[str]) -> Iterator[dict]:
    for line in stream:
        if line.strip():
            yield json.loads(line)
