"""Command-line front end: ``hcn <subcommand> ...``.

Data goes to stdout, progress and errors to stderr.  Exit status is 2 for
usage errors, 1 when a verification fails, 0 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional, Sequence

from . import cusp as cusp_mod
from . import verify
from .arith import is_prime
from .gauss import gauss_brute, gauss_closed
from .hurwitz import CACHE_ENV, TableTooLarge, build_table, hurwitz, write_table
from .moments import (
    bracket_u4_series,
    brown_calkin,
    closed_second_m3,
    closed_zeroth_m3,
    lambda_series,
    moment_brute,
    zeroth_moment_all,
)
from .qseries import PrecisionError, e2_series, eta_quotient_pow8_v3, hurwitz_series, theta_series

log = logging.getLogger("hcn")

SIG = 12


class UsageError(ValueError):
    pass


# -- formatting ---------------------------------------------------------------


def fmt_rational(x: Fraction, exact: bool = False, decimal: bool = False) -> str:
    x = Fraction(x)
    if decimal:
        with localcontext() as ctx:
            ctx.prec = SIG
            return format(Decimal(x.numerator) / Decimal(x.denominator), "g")
    if exact:
        return f"{x.numerator}/{x.denominator}"
    return str(x)


def fmt_complex(z: complex) -> str:
    return f"{z.real:.{SIG}g}{z.imag:+.{SIG}g}i"


# -- subcommands ----------------------------------------------------------------


def cmd_hurwitz(args) -> int:
    if args.n < 0:
        raise UsageError("n must be non-negative")
    print(fmt_rational(hurwitz(args.n), args.exact, args.decimal))
    return 0


def cmd_table(args) -> int:
    if args.max < 0:
        raise UsageError("--max must be non-negative")
    table = build_table(args.max, jobs=args.jobs)
    if args.out:
        write_table(table, args.out)
        print(f"wrote H(0..{args.max}) to {args.out}", file=sys.stderr)
    else:
        print(f"HURWITZ v1 max={table.max_n}")
        for n, v in enumerate(table.twelve):
            print(f"{n},{int(v)}")
    return 0


def _closed_moment(kappa: int, m: int, M: int, n: int) -> Optional[Fraction]:
    """Closed value where one is implemented, else None."""
    if M == 3 and kappa == 0:
        return closed_zeroth_m3(m, n)
    if M == 3 and kappa == 2:
        return closed_second_m3(m, n)
    if M == 1 and kappa == 0:
        return Fraction(zeroth_moment_all(n))
    if M == 5 and kappa == 0 and m % 5 in (1, 4) and is_prime(n) and n != 5:
        return brown_calkin(n)
    return None


def cmd_moment(args) -> int:
    if args.M < 1 or args.n < 1 or args.kappa < 0:
        raise UsageError("need --M >= 1, --n >= 1 and --kappa >= 0")
    mode = args.mode or "brute"
    closed = None
    if mode in ("closed", "both"):
        closed = _closed_moment(args.kappa, args.m % args.M, args.M, args.n)
        if closed is None:
            raise UsageError(
                "closed forms exist for kappa in {0, 2} with M = 3, kappa = 0 with M = 1, "
                "and kappa = 0, m = +-1 mod 5, M = 5 at primes n")
    f = lambda x: fmt_rational(x, args.exact, args.decimal)  # noqa: E731
    if mode == "closed":
        print(f(closed))
        return 0
    brute = moment_brute(args.kappa, args.m, args.M, args.n)
    if mode == "brute":
        print(f(brute))
    else:
        print(f"brute={f(brute)} closed={f(closed)} match={str(brute == closed).lower()}")
    return 0


def cmd_gauss(args) -> int:
    if args.c < 1:
        raise UsageError("c must be positive")
    s = gauss_brute(args.a, args.b, args.c)
    print("multiplicity=" + ",".join(map(str, s.mult)))
    print("value=" + fmt_complex(s.value()))
    print("closed=" + fmt_complex(gauss_closed(args.a, args.b, args.c)))
    return 0


def cmd_cusp(args) -> int:
    if args.M < 1:
        raise UsageError("--M must be positive")
    try:
        p = cusp_mod.CuspPoint(args.h, args.k).check()
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    m, M = args.m, args.M
    rows = [
        ("hhat_growth", cusp_mod.hhat_growth(p)),
        ("theta_growth", cusp_mod.theta_growth(p, m, M)),
        ("c_mM", cusp_mod.c_mM(p, m, M)),
        ("push_u4", cusp_mod.push_u(4, lambda q: cusp_mod.product_growth(q, m, M), p)),
    ]
    for name, z in rows:
        print(f"{name}={fmt_complex(z)}")
    for name, val in cusp_mod.BRANCHES.items():
        print(f"branch {name}={val}")
    print("kronecker=standard")
    return 0


SERIES_HELP = ("H, E2, eta8 (eta(3 tau)^8), theta:m:M[:kappa], lambda:ell:m:M, "
               "bracket:k:m:M (bracket of H and theta, then U_4), g1m3:m, e2lhs")


def _series(series_id: str, prec: int):
    parts = series_id.split(":")
    name, nums = parts[0], parts[1:]
    try:
        ints = [int(x) for x in nums]
    except ValueError:
        raise UsageError(f"bad series id {series_id!r}") from None
    arity = {"H": (0,), "E2": (0,), "eta8": (0,), "e2lhs": (0,), "g1m3": (1,),
             "theta": (2, 3), "lambda": (3,), "bracket": (3,)}
    if name not in arity or len(ints) not in arity[name]:
        raise UsageError(f"bad series id {series_id!r}; known: {SERIES_HELP}")
    if name == "H":
        return hurwitz_series(build_table(prec - 1), prec)
    if name == "E2":
        return e2_series(prec)
    if name == "eta8":
        return eta_quotient_pow8_v3(prec)
    if name == "e2lhs":
        return verify.e2_identity_lhs(prec)
    if name == "g1m3":
        return verify.g1m3_series(ints[0], prec)
    if name == "theta":
        m, M, *k = ints
        return theta_series(k[0] if k else 0, m, M, prec)
    if name == "lambda":
        return lambda_series(*ints, prec)
    k, m, M = ints
    return bracket_u4_series(k, m, M, prec, build_table(4 * (prec - 1)))


def cmd_qexp(args) -> int:
    if args.prec < 1:
        raise UsageError("--prec must be positive")
    f = _series(args.series_id, args.prec)
    if args.format == "json":
        print(f.to_json())
    elif args.decimal:
        print(" + ".join(f"{fmt_rational(c, decimal=True)}*q^{n}" for n, c in f.items())
              + f" + O(q^{f.prec})")
    else:
        print(f)
    return 0


def cmd_verify(args) -> int:
    ids = None if args.check == "all" else [args.check]
    params = {"max": args.max, "prec": args.prec, "kmax": args.kmax, "cmax": args.cmax,
              "samples": args.samples, "seed": args.seed}
    print(f"running {args.check} ({args.profile} profile)", file=sys.stderr)
    reports = verify.run_suite(ids, params, profile=args.profile, jobs=args.jobs)
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"  {r.check_id}: {status} ({r.elapsed:.2f}s)", file=sys.stderr)
    out = verify.reports_csv(reports) if args.format == "csv" else verify.reports_json(reports)
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    return 0 if all(r.passed for r in reports) else 1


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hcn", description=__doc__.splitlines()[0])
    ap.add_argument("--decimal", action="store_true",
                    help="print rationals with 12 significant digits (display only)")
    ap.add_argument("--cache-dir", help=f"Hurwitz table cache directory (overrides ${CACHE_ENV})")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    # --decimal is also accepted after the subcommand
    dec = argparse.ArgumentParser(add_help=False)
    dec.add_argument("--decimal", action="store_true", default=argparse.SUPPRESS,
                     help="print rationals with 12 significant digits")

    p = sub.add_parser("hurwitz", parents=[dec], help="class number H(n)")
    p.add_argument("n", type=int)
    p.add_argument("--exact", action="store_true", help="always print p/q")
    p.set_defaults(func=cmd_hurwitz)

    p = sub.add_parser("table", help="table of 12*H(n) in cache-file format")
    p.add_argument("--max", type=int, required=True)
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("moment", parents=[dec], help="moment H_{kappa,m,M}(n)")
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="always print p/q")
    g = p.add_mutually_exclusive_group()
    for mode in ("closed", "brute", "both"):
        g.add_argument(f"--{mode}", dest="mode", action="store_const", const=mode)
    p.set_defaults(func=cmd_moment)

    p = sub.add_parser("gauss", help="Gauss sum G(a, b; c)")
    p.add_argument("a", type=int)
    p.add_argument("b", type=int)
    p.add_argument("c", type=int)
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("cusp", help="growth constants at the cusp h/k")
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(func=cmd_cusp)

    p = sub.add_parser("qexp", parents=[dec], help="q-expansion of a named series")
    p.add_argument("series_id", help=SERIES_HELP)
    p.add_argument("--prec", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_qexp)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("check", choices=["all", *verify.CHECKS])
    p.add_argument("--profile", choices=verify.PROFILES, default="default")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--max", type=int, help="upper end of the n or prime range")
    p.add_argument("--prec", type=int, help="series precision")
    p.add_argument("--kmax", type=int, help="largest cusp denominator")
    p.add_argument("--cmax", type=int, help="largest Gauss sum modulus")
    p.add_argument("--samples", type=int, help="sampled cusp points")
    p.add_argument("--seed", type=int, help="sampling seed (default 0)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(name)s: %(message)s")
    if args.cache_dir:
        os.environ[CACHE_ENV] = args.cache_dir
    if getattr(args, "jobs", 1) < 1:
        print("hcn: error: --jobs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (UsageError, PrecisionError, TableTooLarge, ValueError) as exc:
        print(f"hcn: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
