"""Command-line front end.

Exit codes: 0 success/equal, 1 unequal/rejected, 2 usage or parse error,
3 capability error (e.g. ``integ`` over Z).
"""

from __future__ import annotations

import argparse
import json
import sys

from .expr import ParseError, evaluate, parse
from .freemodule import Vector
from .normalform import (
    NormalSeries,
    family_check,
    first_difference,
    normalize,
    parse_family_pattern,
    star,
    umbral,
)
from .ring import CapabilityError, Polynomial, PowerSeries1, RingError, parse_ring
from .sheffer import ShefferPair, sheffer_sequence

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_CAPABILITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _ring(args):
    try:
        return parse_ring(args.ring)
    except (ValueError, RingError) as exc:
        raise UsageError(str(exc)) from None


def _operator(text: str, ring):
    try:
        e = parse(text)
    except ParseError as exc:
        raise UsageError(f"parse error in {text!r}: {exc}") from None
    return evaluate(e, ring)


def _emit(args, text: str, payload) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def cmd_nf(args) -> int:
    ring = _ring(args)
    s = normalize(_operator(args.expr, ring))
    _emit(args, s.format(args.order), s.to_json(args.order))
    return EXIT_OK


def cmd_apply(args) -> int:
    ring = _ring(args)
    phi = _operator(args.expr, ring)
    try:
        if args.vector.lstrip().startswith("{"):
            v = Vector.from_json(ring, args.vector)
        else:
            v = Vector.parse(ring, args.vector)
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad vector: {exc}") from None
    out = phi(v)
    _emit(args, str(out), out.to_json())
    return EXIT_OK


def cmd_eq(args) -> int:
    ring = _ring(args)
    s = normalize(_operator(args.expr1, ring))
    t = normalize(_operator(args.expr2, ring))
    n = first_difference(s, t, args.order)
    if n is None:
        _emit(args, f"equal up to order {args.order}", {"equal": True, "order": args.order})
        return EXIT_OK
    _emit(
        args,
        f"differ at P{n}: {s.coeff(n).format()} != {t.coeff(n).format()}",
        {"equal": False, "index": n, "left": s.coeff(n).to_json(), "right": t.coeff(n).to_json()},
    )
    return EXIT_FALSE


def cmd_summable(args) -> int:
    ring = _ring(args)
    try:
        fam = parse_family_pattern(args.pattern, ring)
        verdict = family_check(fam, args.upto)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    payload = {"accepted": verdict.accepted, "upto": verdict.upto}
    if not verdict.accepted:
        payload.update(index=verdict.index, ydeg=verdict.ydeg)
    _emit(args, str(verdict), payload)
    return EXIT_OK if verdict.accepted else EXIT_FALSE


def _series_arg(text: str, ring, order: int) -> PowerSeries1:
    try:
        if text.lstrip().startswith("["):
            return PowerSeries1(ring, [ring(str(c)) for c in json.loads(text)], order)
        return PowerSeries1.from_polynomial(Polynomial.parse(ring, text, var="y"), order)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad series {text!r}: {exc}") from None


def cmd_sheffer(args) -> int:
    ring = _ring(args)
    ring.require_rationals("sheffer")
    mu = _series_arg(args.mu, ring, args.order)
    sigma = _series_arg(args.sigma, ring, args.order)
    try:
        pair = ShefferPair(mu, sigma)
    except ValueError as exc:
        raise UsageError(f"invalid pair: {exc}") from None
    seq = sheffer_sequence(pair, args.order)
    text = "\n".join(f"p{n} = {p.format()}" for n, p in enumerate(seq.polys))
    _emit(args, text, seq.to_json())
    return EXIT_OK


def _read_series(path: str, ring) -> NormalSeries:
    try:
        with open(path) as fh:
            return NormalSeries.from_json(ring, json.load(fh))
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"cannot read series from {path}: {exc}") from None


def cmd_product(args) -> int:
    ring = _ring(args)
    s = _read_series(args.sfile, ring)
    t = _read_series(args.tfile, ring)
    out = star(s, t) if args.command == "star" else umbral(s, t)
    # series JSON is the output format for these commands
    print(json.dumps(out.to_json(args.order)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="opcalc", description="Normal forms of linear operators on R^(N).")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=True):
        sp.add_argument("--ring", default="Q", help="Q (default), Z or Zmod:m")
        sp.add_argument("--json", action="store_true", help="emit JSON")
        if order:
            sp.add_argument("--order", type=int, required=True, help="highest coefficient to observe")

    sp = sub.add_parser("nf", help="normal form P_0..P_N of an operator expression")
    sp.add_argument("expr")
    common(sp)
    sp.set_defaults(func=cmd_nf)

    sp = sub.add_parser("apply", help="apply an operator expression to a vector")
    sp.add_argument("expr")
    sp.add_argument("vector", help='e.g. "3*e0 + 1/2*e5" or vector JSON')
    common(sp, order=False)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("eq", help="compare two operators through their normal forms")
    sp.add_argument("expr1")
    sp.add_argument("expr2")
    common(sp)
    sp.set_defaults(func=cmd_eq)

    sp = sub.add_parser("summable", help="check the grading of a word-family pattern")
    sp.add_argument("pattern", help='e.g. "x^{n} y^{n}"')
    sp.add_argument("--upto", type=int, required=True)
    common(sp, order=False)
    sp.set_defaults(func=cmd_summable)

    sp = sub.add_parser("sheffer", help="Sheffer sequence from (mu, sigma)")
    sp.add_argument("--mu", required=True, help='polynomial in y, e.g. "1 + y", or JSON array')
    sp.add_argument("--sigma", required=True)
    common(sp)
    sp.set_defaults(func=cmd_sheffer)

    for name in ("star", "umbral"):
        sp = sub.add_parser(name, help=f"{name} product of two series JSON files")
        sp.add_argument("sfile")
        sp.add_argument("tfile")
        common(sp)
        sp.set_defaults(func=cmd_product)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "order", 0) is not None and getattr(args, "order", 0) < 0:
        parser.error("--order must be non-negative")
    if getattr(args, "upto", 0) < 0:
        parser.error("--upto must be non-negative")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"opcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapabilityError as exc:
        print(f"opcalc: capability error: {exc}", file=sys.stderr)
        return EXIT_CAPABILITY
    except RingError as exc:
        print(f"opcalc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
