"""Command-line interface: ``ssmass <subcommand> ...``.

Exit codes: 0 success, 1 falsification or lifting obstruction, 2 usage error.
JSON and CSV go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from importlib import resources
from typing import Sequence

from ._tower import is_prime
from .lifting import LiftObstruction, PreconditionError, lift_sl2, parse_matrix
from .mass import IntegralityError, census, hecke_orbit_size, mass_superspecial, mass_superspecial_fkernel
from .suites import SUITES, run_suite
from .xi import classify, parse_xi

CSV_HEADER = ("degree", "count", "mass_num", "mass_den", "orbit_size")


class UsageError(Exception):
    pass


def load_schema(name: str) -> dict:
    """JSON schema for the output of subcommand ``name``."""
    return json.loads(resources.files("ssmass").joinpath("schemas", f"{name}.json").read_text())


def _prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not is_prime(p):
        raise argparse.ArgumentTypeError(f"p must be prime, got {p}")
    return p


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {n}")
    return n


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _default_m(xi_text: str, m: int | None) -> int:
    if m is not None:
        return m
    if xi_text.strip().startswith("generic:"):
        try:
            return int(xi_text.split(":", 1)[1])
        except ValueError:
            raise UsageError(f"malformed generic point {xi_text!r}") from None
    return 1


def _parse_xi(text: str, p: int, m: int):
    try:
        return parse_xi(text, p, m)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_mass(args) -> tuple[int, str]:
    try:
        res = mass_superspecial_fkernel(args.g, args.p) if args.star else mass_superspecial(args.g, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        out = res.to_json()
        if args.g == 2:
            out["over_5760"] = _frac(res.value * 5760) if (res.value * 5760).denominator != 1 \
                else str(res.value * 5760)
        return 0, _dump(out)
    if args.g == 2 and (res.value * 5760).denominator == 1:
        return 0, f"{res.value * 5760}/5760 = {_frac(res.value)}"
    return 0, _frac(res.value)


def cmd_classify(args) -> tuple[int, str]:
    m = _default_m(args.xi, args.m)
    xi = _parse_xi(args.xi, args.p, m)
    out = classify(xi).to_json()
    out.update(p=args.p, m=m, xi=xi.to_json())
    return 0, _dump(out)


def cmd_lift(args) -> tuple[int, str]:
    try:
        phibar = parse_matrix(args.phibar, args.p)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        res = lift_sl2(phibar, args.prec)
    except PreconditionError as exc:
        raise UsageError(str(exc)) from None
    except LiftObstruction as exc:
        return 1, _dump({"obstruction": exc.to_json()})
    return 0, _dump(res.to_json())


def cmd_census(args) -> tuple[int, str]:
    try:
        rows = census(args.p, args.m, args.level)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except IntegralityError as exc:
        print(str(exc), file=sys.stderr)
        return 1, ""
    if args.format == "json":
        return 0, _dump({"p": args.p, "m": args.m, "level": args.level, "rows": [r.to_json() for r in rows]})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([r.degree, r.count, r.mass.numerator, r.mass.denominator,
                         "" if r.orbit_size is None else r.orbit_size])
    return 0, buf.getvalue().rstrip("\n")


def cmd_hecke(args) -> tuple[int, str]:
    m = _default_m(args.xi, args.m)
    xc = classify(_parse_xi(args.xi, args.p, m))
    try:
        size = hecke_orbit_size(args.p, args.level, xc)
    except IntegralityError as exc:
        print(str(exc), file=sys.stderr)
        return 1, ""
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        return 0, _dump({"p": args.p, "level": args.level, "case": xc.case.value, "orbit_size": size})
    return 0, str(size)


def cmd_verify(args) -> tuple[int, str]:
    try:
        report = run_suite(args.suite, args.p, args.seed, args.samples)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    code = 0 if report["passed"] else 1
    if args.format == "json":
        return code, _dump(report)
    return code, f"{args.suite}: {report['summary']}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ssmass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mass", help="superspecial mass M_g or M_g^* (--star)")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--g", type=_positive, required=True)
    p.add_argument("--star", action="store_true", help="ker(lambda) = A[F] variant, g even")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_mass)

    p = sub.add_parser("classify", help="case and data of a point xi of P^1")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=_positive, default=None, help="xi lives in F_{p^{2m}}")
    p.add_argument("--xi", required=True, help='"a0.a1,b0.b1" or "generic:d"')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("lift", help="lift phibar in SL_2(F_{p^2}) to the hermitian group")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--phibar", required=True, help='"a,b;c,d", entries "c0.c1" over F_{p^2}')
    p.add_argument("--prec", type=_positive, default=12, help="Pi-adic precision")
    p.set_defaults(func=cmd_lift)

    p = sub.add_parser("census", help="points of P^1(F_{p^{2m}}) by degree with masses")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--m", type=_positive, required=True)
    p.add_argument("--level", type=_positive, default=None, help="also give Hecke orbit sizes at level N")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("hecke", help="Hecke orbit size |Sp_4(Z/N)| * Mass(Lambda_x)")
    p.add_argument("--p", type=_prime, required=True)
    p.add_argument("--level", type=_positive, required=True)
    p.add_argument("--xi", required=True)
    p.add_argument("--m", type=_positive, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_hecke)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, required=True)
    p.add_argument("--p", type=_prime, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=_positive, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, out = args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"ssmass {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if out:
        print(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
