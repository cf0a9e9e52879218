"""Command-line interface.

Exit codes: 0 success, 1 verification or identity failure, 2 usage or parse
error, 3 domain error.  Data goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import __version__
from .exactpoly import Polynomial, parse_poly, poly_qderiv_n, poly_theorem_value
from .expr import ParseError, parse, to_pointfn, to_polynomial
from .identities import KINDS, run_identity
from .qoperator import (
    PointFn,
    cancellation_profile,
    default_start,
    qderiv_n_value,
    qlimit_estimate,
    theorem_verify,
    DEFAULT_LEVELS,
)
from .qseries import PowerSeries, series_qderiv_n
from .qsymbols import q_binomial, q_pochhammer
from .scalar import DomainError, QCalcError, format_scalar, parse_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3
FORMATS = ("plain", "csv", "json")

GRAMMAR_HELP = """\
expression grammar (one variable x):
  numbers     integers or decimals, read exactly (0.25 is 1/4)
  operators   + - * /, unary -, and ^ with an integer exponent (x^-2)
  precedence  ^ (right-assoc) > unary - > * / > + - (left-assoc)
  functions   exp(u) log(u) sin(u) cos(u)
  examples    "exp(x)*sin(x)"  "1/(1-x)"  "log(1+x)"  "x^3-2*x+5"
expressions with 1/u, u^-k or log(u) for u depending on x need --radius.

polynomial text (--poly): terms c*x^m with rational c, e.g. 1/2*x^3-2*x+5.
q values: p/q, decimals, or complex a+bi; q = 1 is rejected.
"""


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


class UsageError(QCalcError):
    pass


# ------------------------------------------------------------ arg helpers


def q_arg(text: str):
    try:
        q = parse_scalar(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None
    if q == 1:
        raise argparse.ArgumentTypeError(
            "q = 1 is excluded: D_q f(x) = (f(x) - f(qx)) / ((1 - q) x) is undefined for q = 1"
        )
    return q


def q_list_arg(text: str) -> list:
    return [q_arg(part) for part in text.split(",") if part.strip()]


def scalar_arg(text: str):
    try:
        return parse_scalar(text)
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def real_arg(text: str):
    v = scalar_arg(text)
    if isinstance(v, complex):
        raise argparse.ArgumentTypeError(f"expected a real number, got {text!r}")
    return v


def ratio_arg(text: str):
    v = real_arg(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("ratio must lie strictly between 0 and 1")
    return v


def n_range_arg(text: str) -> list[int]:
    """``3``, ``1..5`` or comma-joined mixtures like ``1..3,6``."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid n range {text!r}") from None
    if not out or min(out) < 1:
        raise argparse.ArgumentTypeError("n must be positive integers")
    return out


def positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def radius_arg(text: str) -> float:
    try:
        r = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid radius {text!r}") from None
    if not r > 0:
        raise argparse.ArgumentTypeError("radius must be positive")
    return r


# ---------------------------------------------------------------- output


def _render_json(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = format_scalar(value)
        return text if text not in ("nan", "inf", "-inf") else json.dumps(text)
    if isinstance(value, (Fraction, complex)):
        return json.dumps(format_scalar(value))
    return json.dumps(value)


def _render_text(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Fraction, float, complex)):
        return format_scalar(value)
    return str(value)


def emit(records: list[dict], fmt: str, out) -> None:
    if not records:
        return
    if fmt == "json":
        for rec in records:
            out.write("{" + ", ".join(f"{json.dumps(k)}: {_render_json(v)}" for k, v in rec.items()) + "}\n")
        return
    header = list(records[0])
    rows = [[_render_text(rec[k]) for k in header] for rec in records]
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        out.write(buf.getvalue())
        return
    if header == ["value"]:
        for row in rows:
            out.write(row[0] + "\n")
        return
    widths = [max(len(h), *(len(r[i]) for r in rows)) for i, h in enumerate(header)]
    out.write("  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip() + "\n")
    for row in rows:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


# ------------------------------------------------------------- functions


def _source(args) -> tuple[str, PointFn]:
    """(label, PointFn) from --expr or --poly."""
    if args.poly is not None:
        try:
            p = parse_poly(args.poly)
        except ValueError as err:
            raise UsageError(str(err)) from None
        return str(p), PointFn.from_polynomial(p, str(p))
    e = parse(args.expr)
    try:
        return args.expr, to_pointfn(e, args.radius)
    except ValueError as err:
        raise UsageError(f"{err} (pass --radius)") from None


def _source_polynomial(args) -> Polynomial:
    if args.poly is not None:
        return parse_poly(args.poly)
    try:
        return to_polynomial(parse(args.expr))
    except ValueError as err:
        raise UsageError(f"--exact needs a polynomial: {err}") from None


# ------------------------------------------------------------ subcommands


def cmd_qpoch(args) -> tuple[list[dict], int]:
    return [{"value": q_pochhammer(args.a, args.q, args.n)}], EXIT_OK


def cmd_qbinom(args):
    return [{"value": q_binomial(args.n, args.k, args.q)}], EXIT_OK


def cmd_deriv(args):
    _, f = _source(args)
    return [{"value": qderiv_n_value(f, args.q, args.n, args.x)}], EXIT_OK


def cmd_limit(args):
    label, f = _source(args)
    rep = qlimit_estimate(f, args.q, args.n, **_limit_opts(args))
    rec = {
        "expr": label,
        "q": args.q,
        "n": args.n,
        "estimate": rep.estimate,
        "uncertainty": rep.uncertainty,
        "samples": len(rep.samples),
        "converged": rep.converged,
    }
    return [rec], EXIT_OK


def _limit_opts(args) -> dict:
    opts = {"levels": args.levels, "max_steps": args.max_steps, "ratio": args.ratio}
    if args.tol is not None:
        opts["tol"] = args.tol
    if args.x0 is not None:
        opts["x0"] = args.x0
    return opts


def cmd_verify(args):
    if args.exact:
        p = _source_polynomial(args)
        label = args.expr if args.poly is None else str(p)
        for q in args.q:
            if not isinstance(q, Fraction):
                raise UsageError("--exact needs rational q values")
        records = []
        for q in args.q:
            for n in args.n:
                estimate = poly_qderiv_n(p, q, n).coeff(0)
                predicted = poly_theorem_value(p, q, n)
                err = abs(estimate - predicted)
                rel = err / abs(predicted) if predicted else err
                records.append(_verify_record(label, q, n, estimate, predicted, err, rel, True, err == 0))
        return records, EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL

    label, f = _source(args)
    grid = [(q, n) for q in args.q for n in args.n]
    opts = _limit_opts(args)

    def one(case):
        q, n = case
        return theorem_verify(f, q, n, rel_tol=args.rel_tol, **opts)

    with ThreadPoolExecutor(max_workers=args.jobs) as pool:
        reports = list(pool.map(one, grid))
    records = [
        _verify_record(label, r.q, r.n, r.limit.estimate, r.predicted, r.abs_err, r.rel_err, r.limit.converged, r.passed)
        for r in reports
    ]
    return records, EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


def _verify_record(label, q, n, estimate, predicted, abs_err, rel_err, converged, passed) -> dict:
    return {
        "expr": label,
        "q": q,
        "n": n,
        "x": Fraction(0),
        "estimate": estimate,
        "predicted": predicted,
        "abs_err": abs_err,
        "rel_err": rel_err,
        "converged": converged,
        "pass": passed,
    }


def cmd_series(args):
    label, f = _source(args)
    s = PowerSeries(f.jet(args.order), f.domain_radius)
    out = series_qderiv_n(s, args.q, args.n)
    return [{"m": m, "coefficient": c, "radius": out.radius} for m, c in enumerate(out.coeffs)], EXIT_OK


def cmd_identity(args):
    failures = run_identity(args.which, args.seed, args.trials)
    for fail in failures:
        print(f"identity {args.which} trial {fail.trial} failed: {fail.detail}", file=args.err)
    rec = {
        "which": args.which,
        "seed": args.seed,
        "trials": args.trials,
        "failures": len(failures),
        "pass": not failures,
    }
    return [rec], EXIT_OK if not failures else EXIT_FAIL


def cmd_bench(args):
    _, f = _source(args)
    x0 = args.x0 if args.x0 is not None else default_start(f.domain_radius, args.q, args.n)
    # floating sample points on purpose: the table measures binary64 cancellation
    xs = [float(x0) * 10.0**-j for j in range(args.steps)]
    rows = cancellation_profile(f, args.q, args.n, xs)
    best = min(rows, key=lambda r: r.abs_err)
    print(f"smallest error {format_scalar(best.abs_err)} at x = {format_scalar(best.x)}", file=args.err)
    return [
        {"x": r.x, "value": r.value, "reference": r.reference, "abs_err": r.abs_err, "rel_err": r.rel_err} for r in rows
    ], EXIT_OK


# ----------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    default_fmt = os.environ.get("QCALC_FORMAT", "plain")
    if default_fmt not in FORMATS:
        default_fmt = "plain"
    common.add_argument("--format", choices=FORMATS, default=default_fmt, help="output format (env QCALC_FORMAT)")

    source = argparse.ArgumentParser(add_help=False)
    group = source.add_mutually_exclusive_group(required=True)
    group.add_argument("--expr", help="function of x (see grammar below)")
    group.add_argument("--poly", help="polynomial text, e.g. 1/2*x^3-2*x+5")
    source.add_argument("--radius", type=radius_arg, help="domain radius rho (required for 1/u and log(u))")

    limit = argparse.ArgumentParser(add_help=False)
    limit.add_argument("--tol", type=float, help="stopping tolerance of the limit estimator")
    limit.add_argument("--x0", type=real_arg, help="largest sample point")
    limit.add_argument("--ratio", type=ratio_arg, default=Fraction(1, 2), help="geometric step between sample points")
    limit.add_argument("--max-steps", type=positive_int, default=40)
    limit.add_argument("--levels", type=positive_int, default=DEFAULT_LEVELS, help="Richardson levels")

    parser = argparse.ArgumentParser(
        prog="qcalc",
        description="q-derivative calculus: evaluate D_q^n, check its limit at 0, sweep exact identities.",
        epilog=GRAMMAR_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, parents, help_text):
        p = sub.add_parser(
            name,
            parents=[common, *parents],
            help=help_text,
            description=help_text,
            epilog=GRAMMAR_HELP,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        p.set_defaults(func=func)
        # accept -1/2, -0.5+1i, -1,-1/2 as values, not option flags
        p._negative_number_matcher = _NEGATIVE_VALUE
        return p

    p = add("qpoch", cmd_qpoch, [], "q-Pochhammer symbol (a; q)_n")
    p.add_argument("a", type=scalar_arg)
    p.add_argument("q", type=scalar_arg)
    p.add_argument("n", type=int)

    p = add("qbinom", cmd_qbinom, [], "q-binomial coefficient [n k]_q")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("q", type=scalar_arg)

    p = add("deriv", cmd_deriv, [source], "value of D_q^n f at x (x = 0 uses f^(n)(0))")
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--n", type=positive_int, default=1)
    p.add_argument("--x", type=scalar_arg, required=True)

    p = add("limit", cmd_limit, [source, limit], "numeric limit of D_q^n f(x) as x -> 0")
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--n", type=positive_int, default=1)

    p = add("verify", cmd_verify, [source, limit], "numeric limit against c_n(q) f^(n)(0) over a (q, n) grid")
    p.add_argument("--q", type=q_list_arg, required=True, help="comma-separated q values")
    p.add_argument("--n", type=n_range_arg, required=True, help="n, a..b, or a comma list")
    p.add_argument("--rel-tol", type=float, help="override the n-dependent tolerance ladder")
    p.add_argument("--exact", action="store_true", help="exact rational check (polynomials only)")
    p.add_argument("--jobs", type=positive_int, default=1, help="worker threads for the grid")

    p = add("series", cmd_series, [source], "coefficients of D_q^n applied to the jet at 0")
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--n", type=positive_int, default=1)
    p.add_argument("--order", type=int, required=True, help="truncation order of the input jet")

    p = add("identity", cmd_identity, [], "seeded randomized sweep of an exact identity")
    p.add_argument("--which", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=positive_int, default=500)

    p = add("bench", cmd_bench, [source], "error of the closed-form k-sum versus x")
    p.add_argument("--q", type=q_arg, required=True)
    p.add_argument("--n", type=positive_int, default=1)
    p.add_argument("--x0", type=real_arg, help="largest x (default min(rho,1)/4, shrunk for |q| > 1)")
    p.add_argument("--steps", type=positive_int, default=12, help="number of decades below x0")
    return parser


def run_cli(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.err = err
    try:
        records, code = args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"qcalc {args.command}: {exc}", file=err)
        return EXIT_USAGE
    except (DomainError, ZeroDivisionError, OverflowError) as exc:
        print(f"qcalc {args.command}: domain error: {exc}", file=err)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"qcalc {args.command}: {exc}", file=err)
        return EXIT_USAGE
    emit(records, args.format, out)
    return code


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
