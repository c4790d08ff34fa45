"""Command-line front end.

Subcommands: coeffs, zeros, local, twist, verify, rankin.  Reports are
deterministic: identical config and build give byte-identical output
(sorted keys, repr-exact floats, no timestamps).
"""

import argparse
import csv
import io
import json
import math
import sys
from fractions import Fraction

import numpy as np

from .characters import character_table
from .dirichlet import detector_coefficients, log_l_coefficients
from .errors import LfunlabError
from .evaluate import l_value
from .local import local_factor, local_zeros, rankin_average
from .newforms import load_newform, ramanujan_delta, twist_newform
from .twists import detector_additive_value
from .verify import SUITES, funceq_max_residual, run_suites, suite_inherit
from .zeros import records_to_json, scan_zeros


def _add_global_flags(p):
    src = p.add_mutually_exclusive_group()
    src.add_argument("--delta", action="store_true",
                     help="use the built-in weight-12 level-1 form")
    src.add_argument("--newform", metavar="PATH", help="load a newform file")
    p.add_argument("--nmax", type=int, default=4096,
                   help="coefficient range for the built-in form")
    p.add_argument("--out", metavar="PATH", help="write the report to PATH")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap for independent checks (report assembly "
                        "is always ordered; 1 keeps runs bit-reproducible)")
    p.add_argument("--tol", type=float, default=None,
                   help="override the default target tolerance")


def _get_form(args):
    if args.newform:
        return load_newform(args.newform)
    return ramanujan_delta(max(args.nmax, 64))


def _emit(args, payload, csv_rows=None, csv_header=None):
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if csv_header:
            w.writerow(csv_header)
        w.writerows(csv_rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2,
                          separators=(",", ": ")) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_coeffs(args):
    f = _get_form(args)
    n = min(args.nmax, f.n_max)
    if args.series == "a":
        vals = f.coeffs[:n + 1]
    elif args.series == "c":
        vals = detector_coefficients(f, n).values
    elif args.series == "l":
        vals = log_l_coefficients(f, n).values
    rows = [[m, vals[m].real, vals[m].imag] for m in range(1, n + 1)]
    payload = {"schema": 1, "form": f.label, "series": args.series,
               "rows": rows}
    _emit(args, payload, csv_rows=rows, csv_header=["n", "re", "im"])
    return 0


def cmd_zeros(args):
    if args.tmax < 0:
        raise LfunlabError("--tmax must be nonnegative")
    f = _get_form(args)
    recs = scan_zeros(f, args.tmin, args.tmax, step=args.step)
    payload = {"schema": 1, "form": f.label,
               "note": "simplicity is numerically certified (winding number),"
                       " not rigorous",
               "zeros": records_to_json(recs)}
    rows = [[r.t, r.refinement_error, r.winding] for r in recs]
    _emit(args, payload, csv_rows=rows,
          csv_header=["t", "refinement_error", "winding"])
    return 0


def cmd_local(args):
    f = _get_form(args)
    if args.rankin:
        return cmd_rankin(args)
    lf = local_factor(f, args.q)
    zs = local_zeros(lf, 0.0, args.tmax)
    payload = {
        "schema": 1, "form": f.label, "q": args.q,
        "a_q": [lf.a_q.real, lf.a_q.imag],
        "theta": lf.theta, "is_square": lf.is_square,
        "local_zeros": [z["ordinate"] for z in zs],
    }
    if args.inherit:
        checks = suite_inherit(f, (args.q,))
        payload["inherit_checks"] = checks
        payload["all_pass"] = all(c["passed"] for c in checks)
    rows = [[args.q, lf.a_q.real, lf.theta, lf.is_square,
             zs[0]["ordinate"] if zs else ""]]
    _emit(args, payload, csv_rows=rows,
          csv_header=["q", "a_q", "theta", "is_square", "first_zero_ordinate"])
    return 0 if payload.get("all_pass", True) else 1


def cmd_rankin(args):
    f = _get_form(args)
    X = min(args.X, f.n_max)
    payload = {"schema": 1, "form": f.label, "X": X,
               "rankin_average": rankin_average(f, X)}
    _emit(args, payload, csv_rows=[[X, payload["rankin_average"]]],
          csv_header=["X", "rankin_average"])
    return 0


def cmd_twist(args):
    f = _get_form(args)
    chars = character_table(args.q)
    if not 1 <= args.index < len(chars):
        raise LfunlabError(
            f"--index must be in [1, {len(chars) - 1}] (nontrivial characters)")
    ft = twist_newform(f, chars[args.index])
    residual = funceq_max_residual(ft)
    n_show = min(args.nmax, 50, ft.n_max)
    ser = complex(np.dot(ft.coeffs[1:2001],
                         np.arange(1, 2001, dtype=float) ** -9.0))
    overlap = abs(l_value(ft, 9.0) - ser)
    payload = {
        "schema": 1, "form": ft.label, "weight": ft.weight, "level": ft.level,
        "root_number": [ft.root_number.real, ft.root_number.imag],
        "funceq_residual": residual,
        "series_overlap_s9": overlap,
        "coeffs": [[n, ft.coeffs[n].real, ft.coeffs[n].imag]
                   for n in range(1, n_show + 1)],
    }
    _emit(args, payload, csv_rows=payload["coeffs"],
          csv_header=["n", "re", "im"])
    return 0


def cmd_verify(args):
    f = _get_form(args)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    if args.suite == "all":
        names.remove("gdecay")  # slow; run it by name
    kwargs = {}
    if args.alpha is not None:
        alpha = Fraction(args.alpha)
        kwargs["identity"] = {"alpha": alpha}
        kwargs["lemmas"] = {"alpha": alpha}
        kwargs["gdecay"] = {"alpha": alpha}
    if args.T is not None:
        kwargs.setdefault("identity", {})["T_pair"] = (args.T - 10.0, args.T)
        kwargs.setdefault("gdecay", {})["T"] = args.T
    if args.M is not None:
        kwargs.setdefault("gdecay", {})["M"] = args.M
    report = run_suites(f, names, **kwargs)
    _emit(args, report)
    return 0 if report["all_pass"] else 1


def build_parser():
    p = argparse.ArgumentParser(
        prog="lfunlab",
        description="numerical laboratory for degree-2 L-functions")
    sub = p.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("coeffs", help="emit a(n), detector c(n) or log-L l(n)")
    _add_global_flags(pc)
    pc.add_argument("--series", choices=("a", "c", "l"), default="a")
    pc.set_defaults(fn=cmd_coeffs)

    pz = sub.add_parser("zeros", help="scan critical-line zeros")
    _add_global_flags(pz)
    pz.add_argument("--tmin", type=float, default=0.0)
    pz.add_argument("--tmax", type=float, required=True)
    pz.add_argument("--step", type=float, default=0.05)
    pz.set_defaults(fn=cmd_zeros)

    pl = sub.add_parser("local", help="local Euler factor analysis")
    _add_global_flags(pl)
    pl.add_argument("--q", type=int, default=2)
    pl.add_argument("--tmax", type=float, default=10.0)
    pl.add_argument("--inherit", action="store_true",
                    help="run the pole-inheritance window check")
    pl.add_argument("--rankin", action="store_true")
    pl.add_argument("--X", type=int, default=10000)
    pl.set_defaults(fn=cmd_local)

    pr = sub.add_parser("rankin", help="Rankin-Selberg prime average")
    _add_global_flags(pr)
    pr.add_argument("--X", type=int, default=10000)
    pr.set_defaults(fn=cmd_rankin)

    pt = sub.add_parser("twist", help="build and validate a character twist")
    _add_global_flags(pt)
    pt.add_argument("--q", type=int, required=True)
    pt.add_argument("--index", type=int, default=1,
                    help="index into the character table mod q (1-based "
                         "nontrivial)")
    pt.set_defaults(fn=cmd_twist)

    pv = sub.add_parser("verify", help="run verification suites")
    _add_global_flags(pv)
    pv.add_argument("--suite", default="all",
                    help="one of: %s, or 'all'" % ", ".join(sorted(SUITES)))
    pv.add_argument("--alpha", help="rational alpha like 1/3")
    pv.add_argument("--T", type=float, help="residue truncation height")
    pv.add_argument("--M", type=int, help="expansion order")
    pv.set_defaults(fn=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.suite != "all" and args.suite not in SUITES:
        parser.error(f"unknown suite '{args.suite}'; "
                     f"available: {', '.join(sorted(SUITES))}, all")
    try:
        return args.fn(args)
    except LfunlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
