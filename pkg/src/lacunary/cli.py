"""Command-line front end.

Every command writes one JSON document per line.  Exit status: 0 success,
1 verification failure, 2 construction error, 3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from fractions import Fraction
from typing import List, Optional

from . import algebraic, engines
from .bigpoly import RationalComplex
from .errors import (
    AlgebraicError,
    BoundExceeded,
    ConfigError,
    ConstructionError,
    HorizonError,
    KernelFitError,
    LacunaryError,
    PolynomialError,
    VerificationError,
)
from .indexsets import coefficient_level_set, density_profile, parse_set
from .kernelfit import support_fit
from .serialize import (
    default_emit_limit,
    dumps,
    number_to_dict,
    parse_numbers,
    parse_poly,
    q_str,
    read_series,
    write_series,
)

EXIT_OK, EXIT_VERIFY, EXIT_BUILD, EXIT_CONFIG = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _positive(kind=int):
    def parse(text):
        try:
            value = kind(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
        return value
    return parse


def _non_negative(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lacunary", description="Build and verify gap power series with integer coefficients.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file whose keys override the command-line flags")
        p.add_argument("--output", "-o", help="output path (default: stdout)")
        p.add_argument("--precision", type=_positive(), default=algebraic.DEFAULT_PRECISION,
                       help="decimal digits for root enclosures")
        return p

    b = common(sub.add_parser("build", help="construct a series"))
    b.add_argument("--theorem", type=int, choices=[1, 2, 3, 4], required=False)
    b.add_argument("--set-a", default="all")
    b.add_argument("--set-b", default="all")
    b.add_argument("--set-s", help="algebraic numbers, e.g. \"0,1/2,-1/2\" or \"[1 2 4]@-0.25+0.43i\"")
    b.add_argument("--enum", help="explicit algebraic numbers for theorems 1 and 2")
    b.add_argument("--enum-degree", type=_positive(), default=1)
    b.add_argument("--enum-height", type=_positive(), default=64)
    b.add_argument("--rho", default="1")
    b.add_argument("--blocks", type=_positive(), default=3)
    b.add_argument("--bits", default=None)
    b.add_argument("--poly", help="P for theorem 4, exponent-indexed coefficients")
    b.add_argument("--horizon", type=_non_negative, default=None,
                   help="emit coefficients up to this index (theorem 4: truncation degree)")
    b.add_argument("--emit", choices=["sparse", "dense"], default="sparse")
    b.add_argument("--base", help="serialized base series for theorem 4")
    b.add_argument("--max-bits", type=_positive(), default=engines.DEFAULT_MAX_BITS)
    b.add_argument("--max-t", type=_positive(), default=engines.DEFAULT_MAX_T)

    v = common(sub.add_parser("verify", help="check a serialized series"))
    v.add_argument("--input", "-i", default="-")
    v.add_argument("--checks", default=None, help="comma list: support,lacunarity,derivative,mahler,density,radius,hypothesis")
    v.add_argument("--alpha", default=None, help="extra points for the block criterion")
    v.add_argument("--max-derivative", type=_non_negative, default=1)
    v.add_argument("--tolerance", type=_positive(float), default=None)
    v.add_argument("--set-a", default=None)
    v.add_argument("--set-b", default=None)

    k = common(sub.add_parser("kernel", help="support fit of a polynomial to an index set"))
    k.add_argument("--poly", required=False)
    k.add_argument("--set", dest="set_s", default=None)

    d = common(sub.add_parser("density", help="exact density profile"))
    d.add_argument("--input", "-i", default=None)
    d.add_argument("--set", dest="set_s", default=None)
    d.add_argument("--checkpoints", default=None)
    d.add_argument("--level", type=_non_negative, default=0, help="M in L(f, M) for series input")

    e = common(sub.add_parser("eval", help="evaluate a series at a rational complex point"))
    e.add_argument("--input", "-i", default="-")
    e.add_argument("--point", default=None)
    e.add_argument("--imag", default="0")
    e.add_argument("--digits", type=_positive(), default=20)
    e.add_argument("--upto", type=_non_negative, default=None)

    n = common(sub.add_parser("enumerate", help="list algebraic numbers in the unit disc"))
    n.add_argument("--count", type=_positive(), default=None)
    n.add_argument("--max-degree", type=int, default=1)
    n.add_argument("--max-height", type=_positive(), default=2)
    return parser


def _apply_config(args, parser):
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    for key, value in data.items():
        dest = key.replace("-", "_")
        if dest in ("command", "config") or not hasattr(args, dest):
            raise ConfigError(f"unknown config key {key!r}")
        setattr(args, dest, value)
    return args


def _validate(args):
    for name in ("blocks", "precision", "max_bits", "max_t", "digits", "count", "enum_height", "max_height"):
        value = getattr(args, name, None)
        if value is not None and (not isinstance(value, int) or value <= 0):
            raise ConfigError(f"{name} must be a positive integer")
    for name in ("horizon", "upto", "max_derivative", "level"):
        value = getattr(args, name, None)
        if value is not None and (not isinstance(value, int) or value < 0):
            raise ConfigError(f"{name} must be a non-negative integer")


def _fraction(text, what) -> Fraction:
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"cannot parse {what} {text!r}") from exc


def _read_input(path: str):
    if path == "-":
        return read_series(sys.stdin)
    try:
        with open(path) as fh:
            return read_series(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc


def _render(q: Fraction, digits: int) -> str:
    scale = 10 ** digits
    n = round(q * scale)
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    return f"{sign}{whole}.{frac:0{digits}d}" if digits else f"{sign}{whole}"


def _render_up(q: Fraction, digits: int) -> str:
    scale = 10 ** digits
    n = -((-q.numerator * scale) // q.denominator)
    whole, frac = divmod(n, scale)
    return f"{whole}.{frac:0{digits}d}"


def cmd_build(args, out) -> int:
    if args.theorem is None:
        raise ConfigError("--theorem is required")
    guards = engines.Guards(args.max_bits, args.max_t)
    K = args.blocks
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", engines.ChoiceBitsWarning)
        if args.theorem in (1, 2):
            A, B = parse_set(args.set_a), parse_set(args.set_b)
            if args.enum:
                enum = parse_numbers(args.enum)
            else:
                found = algebraic.enumerate_unit_ball(K, args.enum_degree, args.enum_height, args.precision)
                enum = found.numbers
            build = engines.build_thm1 if args.theorem == 1 else engines.build_thm2
            series = build(A, B, enum, K, args.bits, guards)
        elif args.theorem == 3:
            if not args.set_s:
                raise ConfigError("--set-s is required for theorem 3")
            S = parse_numbers(args.set_s)
            series = engines.build_thm3(S, _fraction(args.rho, "rho"), K, args.bits, guards)
        else:
            if not args.poly or not args.set_s:
                raise ConfigError("--poly and --set-s are required for theorem 4")
            if args.horizon is None:
                raise ConfigError("--horizon (truncation degree) is required for theorem 4")
            base = _read_input(args.base) if args.base else None
            series = engines.build_thm4(parse_poly(args.poly), parse_numbers(args.set_s), args.horizon,
                                        base=base, K_base=K, bits=args.bits, guards=guards)
    for w in caught:
        sys.stderr.write(dumps({"warning": str(w.message)}) + "\n")
    N = args.horizon if args.horizon is not None else default_emit_limit(series)
    write_series(series, out, N, args.emit == "dense")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import verify_series

    series = _read_input(args.input)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else None
    alphas = parse_numbers(args.alpha) if args.alpha else []
    sets = {}
    if args.set_a:
        sets["A"] = parse_set(args.set_a)
    if args.set_b:
        sets["B"] = parse_set(args.set_b)
    report = verify_series(series, checks, alphas, args.max_derivative, args.tolerance, sets)
    out.write(dumps(report.to_dict()) + "\n")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_kernel(args, out) -> int:
    if not args.poly or not args.set_s:
        raise ConfigError("--poly and --set are required")
    result = support_fit(parse_poly(args.poly), parse_set(args.set_s))
    out.write(dumps(result.to_dict()) + "\n")
    return EXIT_OK


def _checkpoints(text) -> List[int]:
    if text is None:
        raise ConfigError("--checkpoints is required")
    if isinstance(text, list):
        values = [int(x) for x in text]
    else:
        try:
            values = [int(x) for x in str(text).split(",") if x.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse checkpoints {text!r}") from exc
    if not values or any(x < 1 for x in values):
        raise ConfigError("checkpoints must be positive integers")
    return values


def cmd_density(args, out) -> int:
    xs = _checkpoints(args.checkpoints)
    if (args.input is None) == (args.set_s is None):
        raise ConfigError("give exactly one of --input and --set")
    if args.set_s is not None:
        profile = density_profile(parse_set(args.set_s), xs)
        source = {"set": parse_set(args.set_s).to_spec()}
    else:
        series = _read_input(args.input)
        top = max(xs)
        level = coefficient_level_set(engines.coefficients(series, top), args.level, top)
        profile = density_profile(level, xs)
        source = {"series": series.theorem, "level": args.level}
    out.write(dumps(dict(profile.to_dict(), source=source)) + "\n")
    return EXIT_OK


def cmd_eval(args, out) -> int:
    if args.point is None:
        raise ConfigError("--point is required")
    z = RationalComplex(_fraction(args.point, "point"), _fraction(args.imag, "imaginary part"))
    series = _read_input(args.input)
    result = engines.evaluate(series, z, args.upto)
    doc = {"point": [q_str(z.re), q_str(z.im)], "upto": result.upto, "digits": args.digits,
           "re": _render(result.value.re, args.digits), "im": _render(result.value.im, args.digits),
           "tail_bound": None if result.tail_bound is None else _render_up(result.tail_bound, args.digits),
           "tail_bound_exact": None if result.tail_bound is None else q_str(result.tail_bound)}
    if result.tail_bound is None:
        doc["note"] = "imported stream: no bound beyond its last index"
    out.write(dumps(doc) + "\n")
    return EXIT_OK


def cmd_enumerate(args, out) -> int:
    if args.count is None:
        raise ConfigError("--count is required")
    if args.max_degree < 1:
        raise ConfigError("degree must be >= 1")
    found = algebraic.enumerate_unit_ball(args.count, args.max_degree, args.max_height, args.precision)
    for i, alpha in enumerate(found.numbers, 1):
        out.write(dumps({"index": i, "number": str(alpha), **number_to_dict(alpha)}) + "\n")
    out.write(dumps({"count": len(found.numbers), "shortfall": found.shortfall}) + "\n")
    return EXIT_OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "kernel": cmd_kernel,
            "density": cmd_density, "eval": cmd_eval, "enumerate": cmd_enumerate}


def _fail(kind: str, exc: Exception, code: int) -> int:
    sys.stderr.write(dumps({"error": kind, "message": str(exc)}) + "\n")
    return code


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser)
        _validate(args)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    out = sys.stdout
    try:
        if args.output:
            out = open(args.output, "w")
        return COMMANDS[args.command](args, out)
    except ConfigError as exc:
        return _fail("config", exc, EXIT_CONFIG)
    except VerificationError as exc:
        return _fail("verification", exc, EXIT_VERIFY)
    except (ConstructionError, KernelFitError, HorizonError, AlgebraicError, BoundExceeded,
            PolynomialError) as exc:
        return _fail("construction", exc, EXIT_BUILD)
    except LacunaryError as exc:
        return _fail("construction", exc, EXIT_BUILD)
    except (ValueError, OSError) as exc:
        return _fail("config", exc, EXIT_CONFIG)
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
