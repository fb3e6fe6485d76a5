"""Command-line entry point: ``permcomm <subcommand> ...``.

Exit status is 0 on success, 1 on a domain error (printed as
``TypeName: message`` on stderr) and 2 on a usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import secrets
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import counting
from .decomposer import (
    DEFAULT_TRIAL_CAP,
    DecompositionCertificate,
    prime_in_window,
    run_pipeline,
    sample_coverage,
    verify_certificate,
)
from .errors import PermcommError
from .perm import parse_cycles
from .t2 import PairCensus, alternating_census

TABLE_PRIME_RANGE = [n for n in range(14, 34) if n != 19]
TABLE_T2_DEGREES = (3, 4, 5, 6)


def _seed(args, err) -> int:
    if args.seed is None:
        args.seed = secrets.randbelow(2**31)
        print(f"seed: {args.seed}", file=err)
    return args.seed


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


# --------------------------------------------------------------------------
# subcommands


def cmd_decompose(args, out, err) -> int:
    mu = parse_cycles(args.mu, args.n)
    seed = _seed(args, err)
    cert = run_pipeline(
        mu,
        seed=seed,
        force_p=args.p,
        verify_closure=args.deep_verify,
        trial_cap=args.cap or DEFAULT_TRIAL_CAP,
    )
    if args.format == "json":
        out.write(cert.to_json() + "\n")
    else:
        out.write(
            f"n={cert.n} p={cert.p} seed={cert.seed}\n"
            f"mu       = {cert.to_dict()['mu']}\n"
            f"sigma    = {cert.to_dict()['sigma']}\n"
            f"tau_even = {cert.to_dict()['tau_even']}\n"
            f"tau_odd  = {cert.to_dict()['tau_odd']}\n"
        )
        for name, ok in cert.checks.items():
            out.write(f"  {'ok  ' if ok else 'FAIL'} {name}\n")
    return 0 if all(cert.checks.values()) else 1


def cmd_verify(args, out, err) -> int:
    text = sys.stdin.read() if args.cert == "-" else open(args.cert, encoding="utf-8").read()
    cert = DecompositionCertificate.from_json(text)
    report = verify_certificate(cert, deep=args.deep_verify)
    if args.format == "json":
        out.write(_dump({"seed": cert.seed, "passed": all(report.values()), "checks": report}))
    else:
        for name, ok in report.items():
            out.write(f"{'ok  ' if ok else 'FAIL'} {name}\n")
    return 0 if all(report.values()) else 1


def cmd_primes(args, out, err) -> int:
    w = prime_in_window(args.n)
    if args.format == "json":
        out.write(_dump({"n": w.n, "lo": w.lo, "hi": w.hi, "p": w.p}))
    else:
        out.write(f"p={w.p if w.p is not None else 'none'}\n")
    return 0


def cmd_count(args, out, err) -> int:
    n, what = args.n, args.what
    if what == "partitions":
        result = {"P": counting.partition_p(n), "Q": counting.partition_q(n), "R": counting.partition_r(n)}
    elif what == "classes":
        result = {"c": counting.class_count_alternating(n)}
    elif what == "derangements":
        a, b, c = counting.derangement_counts(n)
        result = {"all": a, "even": b, "odd": c}
    elif what == "even-fixing":
        k = args.k if args.k is not None else 0
        result = {"k": k, "count": counting.even_fixing_at_most(n, k)}
    elif what == "t2-bound":
        result = {"r": str(args.r), "bound": counting.t2_lower_bound(n, args.r)}
    elif what == "probability":
        result = {"bound": _frac(counting.generation_probability_bound(n))}
    else:  # hardy-ramanujan
        est, ratio = counting.hardy_ramanujan_diagnostic(n)
        result = {"estimate": est, "ratio": ratio}
    if args.format == "json":
        out.write(_dump({"n": n, "what": what, **result}))
    else:
        out.write(" ".join(f"{k}={v}" for k, v in {"n": n, **result}.items()) + "\n")
    return 0


def _census_rows(degrees, args):
    return [alternating_census(n, long_running_ok=args.long, workers=args.workers) for n in degrees]


def _write_census(rows: Sequence[PairCensus], args, out) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(PairCensus.CSV_FIELDS)
        for row in rows:
            writer.writerow(row.csv_row(with_time=args.timings))
        out.write(buf.getvalue())
    elif args.format == "json":
        fields = PairCensus.CSV_FIELDS if args.timings else PairCensus.CSV_FIELDS[:-1]
        out.write(_dump([{f: getattr(r, f) for f in fields} for r in rows]))
    else:
        out.write(f"{'G':<4}{'order':>7}{'gen pairs':>11}{'comm(G)':>9}{'comm(Sn)':>10}{'T2':>5}{'Aut-orb':>9}{'time/s':>9}\n")
        for r in rows:
            out.write(
                f"{r.group:<4}{r.order:>7}{r.gen_pairs:>11}{r.comm_classes_G:>9}"
                f"{r.comm_classes_ambient:>10}{r.t2_systems:>5}{r.aut_orbits:>9}{r.wall_time:>9.2f}\n"
            )


def cmd_t2(args, out, err) -> int:
    _write_census(_census_rows([args.n], args), args, out)
    return 0


def cmd_sample(args, out, err) -> int:
    seed = _seed(args, err)
    res = sample_coverage(args.n, args.trials, seed, deep=args.deep_verify)
    payload = {
        "n": res.n,
        "p": res.p,
        "seed": seed,
        "trials": res.trials,
        "covered": res.covered,
        "certificates_ok": res.certificates_ok,
        "fraction_covered": _frac(res.fraction_covered),
        "exact_fraction": _frac(res.exact_fraction),
    }
    if args.format == "json":
        out.write(_dump(payload))
    else:
        payload["exact_fraction"] = f"{float(res.exact_fraction):.6f}"
        payload["fraction_covered"] = f"{float(res.fraction_covered):.6f}"
        out.write("\n".join(f"{k}={v}" for k, v in payload.items()) + "\n")
    return 0 if res.all_certified else 1


def cmd_tables(args, out, err) -> int:
    if args.which == "primes":
        rows = [prime_in_window(n) for n in TABLE_PRIME_RANGE]
        if args.format == "json":
            out.write(_dump([{"n": w.n, "floor_3n_4": w.lo, "p": w.p} for w in rows]))
        elif args.format == "csv":
            out.write("n,floor_3n_4,p\n" + "".join(f"{w.n},{w.lo},{w.p}\n" for w in rows))
        else:
            out.write(f"{'n':>3} {'[3n/4]':>6} {'p':>3}\n")
            out.write("".join(f"{w.n:>3} {w.lo:>6} {w.p:>3}\n" for w in rows))
        return 0
    degrees = TABLE_T2_DEGREES + ((7,) if args.long else ())
    _write_census(_census_rows(degrees, args), args, out)
    return 0


# --------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="permcomm",
        description="Even permutations as commutators of generating pairs of A_n and S_n.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p, choices=("text", "json"), default="text"):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("decompose", help="build and certify a commutator decomposition")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mu", required=True, help='cycle string, e.g. "(1 2 3)(4 5 6 7 8)"')
    p.add_argument("--p", type=int, help="force this prime instead of the smallest in the window")
    p.add_argument("--seed", type=int)
    p.add_argument("--deep-verify", action="store_true", help="also enumerate both groups (n <= 10)")
    p.add_argument("--cap", type=int, help="trial cap for the two-cycle search")
    fmt(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="re-check a certificate JSON file ('-' for stdin)")
    p.add_argument("cert")
    p.add_argument("--deep-verify", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("primes", help="smallest prime in [floor(3n/4), n-3]")
    p.add_argument("--n", type=int, required=True)
    fmt(p)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("count", help="exact counting functions")
    p.add_argument(
        "what",
        choices=("partitions", "classes", "derangements", "even-fixing", "t2-bound", "probability", "hardy-ramanujan"),
    )
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, help="fixed-point bound for even-fixing")
    p.add_argument("--r", type=Fraction, default=Fraction(5), help="ratio r > 4 for t2-bound, e.g. 5 or 9/2")
    fmt(p)
    p.set_defaults(func=cmd_count)

    census_flags = argparse.ArgumentParser(add_help=False)
    census_flags.add_argument("--workers", type=int, default=1)
    census_flags.add_argument("--long", action="store_true", help="allow censuses beyond 10^6 pairs (A7)")
    census_flags.add_argument("--timings", action="store_true", help="fill wall_time in csv/json output")

    p = sub.add_parser("t2", parents=[census_flags], help="T2-system census of A_n")
    p.add_argument("--n", type=int, required=True)
    fmt(p, ("text", "json", "csv"))
    p.set_defaults(func=cmd_t2)

    p = sub.add_parser("sample", help="coverage of random elements of A_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--deep-verify", action="store_true")
    fmt(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("tables", parents=[census_flags], help="prime-window table or T2 table")
    p.add_argument("which", choices=("primes", "t2"))
    fmt(p, ("text", "json", "csv"))
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out, err)
    except PermcommError as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return 1
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=err)
        return 1


def main_entry() -> None:
    sys.exit(main())
