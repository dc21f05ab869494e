"""Command-line front end: weights, series, verification batches, lemma
grids, and the Rayleigh minimizer as reproducible subcommands.

Exit codes: 0 all checks passed, 1 a mathematical check failed, 2 usage
error.  Every JSON report echoes its configuration under a "config" key so
tables can be reproduced without a lab notebook.  p is accepted as an exact
rational string ("3/2") or a decimal ("2.5"); decimals are parsed as exact
rationals so the exact-arithmetic path is used whenever possible.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import proof_machinery as pm
from .laplacian import ground_state_grid, weight_from_supersolution
from .numerics import ExponentPair, required_precision, rational_to_str
from .series import (
    DEFAULT_ORDER,
    InvariantViolation,
    correction_positivity_report,
    expand_correction,
    expand_w_integer_p,
)
from .verify import minimize_rayleigh, run_hardy_trials
from .weights import WeightKind, compare_weights, eval_w

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


class UsageError(ValueError):
    pass


def _parse_p(text: str) -> Fraction:
    try:
        p = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse p from {text!r}: {exc}") from None
    if not p > 1:
        raise UsageError(f"p must exceed 1, got {text}")
    return p


def _parse_n_range(text: str) -> tuple:
    try:
        lo, hi = text.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise UsageError(
            f"cannot parse n-range {text!r}; expected LO..HI") from None
    if not 1 <= lo <= hi:
        raise UsageError(f"need 1 <= lo <= hi in n-range, got {text}")
    return lo, hi


def _parse_grid(text: str) -> list:
    try:
        start, stop, step = (Fraction(part) for part in text.split(":"))
    except (ValueError, ZeroDivisionError):
        raise UsageError(
            f"cannot parse grid {text!r}; expected START:STOP:STEP") from None
    if step <= 0 or stop < start:
        raise UsageError(f"degenerate grid {text!r}")
    values = []
    v = start
    while v <= stop:
        values.append(v)
        v += step
    return values


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _json_report(config: dict, body: dict) -> str:
    return json.dumps({"config": config, **body}, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_weight(args) -> int:
    p = _parse_p(args.p)
    n_min, n_max = _parse_n_range(args.n)
    pair = ExponentPair(p)
    table = compare_weights(pair, n_min, n_max, args.digits)
    if args.format == "csv":
        _emit(table.to_csv(), args.out)
    else:
        config = {"subcommand": "weight", "p": str(p), "n": args.n,
                  "digits": args.digits, "format": args.format}
        _emit(_json_report(config, {"rows": json.loads(table.to_json())}),
              args.out)
    return EXIT_OK if table.all_verified_positive() else EXIT_CHECK_FAILED


def cmd_series(args) -> int:
    p = _parse_p(args.p)
    if args.order < 0:
        raise UsageError(f"order must be nonnegative, got {args.order}")
    config = {"subcommand": "series", "p": str(p), "order": args.order,
              "correction": bool(args.correction), "format": args.format}
    if args.correction:
        pair = ExponentPair(p)
        series = expand_correction(pair, args.order)
        coeffs = [rational_to_str(c) for c in series.coeffs]
        positivity = correction_positivity_report(pair, args.order)
        if args.format == "csv":
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["k", "c_k"])
            for k, c in enumerate(coeffs):
                writer.writerow([k, c])
            _emit(buf.getvalue(), args.out)
        else:
            _emit(_json_report(config, {
                "coefficients": coeffs,
                "all_even_positive": positivity["all_even_positive"],
                "nonpositive_positions": positivity["nonpositive_positions"],
            }), args.out)
        # Positivity for non-integer p is a conjecture: reported, not gated.
        return EXIT_OK
    if p.denominator != 1 or p < 2:
        raise UsageError(
            f"the coefficient table requires an integer p >= 2, got {args.p}; "
            f"use --correction for non-integer p")
    try:
        expansion = expand_w_integer_p(int(p), args.order)
    except InvariantViolation:
        return EXIT_CHECK_FAILED
    if args.format == "csv":
        _emit(expansion.to_csv(), args.out)
    else:
        _emit(_json_report(config, json.loads(expansion.to_json())), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    p = _parse_p(args.p)
    pair = ExponentPair(p)
    if args.supersolution:
        n_min, n_max = _parse_n_range(args.n)
        digits = args.digits
        bits = required_precision(pair, n_max, digits)
        u = ground_state_grid(pair, n_max + 1, bits)
        tolerance = 10.0 ** (-(digits - 12))
        worst = 0.0
        for n in range(n_min, n_max + 1):
            lhs = weight_from_supersolution(u, pair, n, bits)
            rhs = eval_w(pair, n, digits)
            worst = max(worst, abs(float(lhs - rhs.value)))
        config = {"subcommand": "verify", "mode": "supersolution",
                  "p": str(p), "n": args.n, "digits": digits}
        passed = worst < tolerance
        _emit(_json_report(config, {
            "max_residual": worst,
            "tolerance": tolerance,
            "pass": passed,
        }), args.out)
        return EXIT_OK if passed else EXIT_CHECK_FAILED
    if args.trials < 1:
        raise UsageError(f"trials must be positive, got {args.trials}")
    if args.support < 1:
        raise UsageError(f"support must be positive, got {args.support}")
    summary = run_hardy_trials(pair, args.trials, args.support, args.seed)
    config = {"subcommand": "verify", "mode": "trials", "p": str(p),
              "trials": args.trials, "support": args.support,
              "seed": args.seed}
    _emit(_json_report(config, summary), args.out)
    passed = summary["all_pass"] and summary["improved_slack_below_classical"]
    return EXIT_OK if passed else EXIT_CHECK_FAILED


_LEMMA_NAMES = ("g_bounds", "gpm", "ak_lower", "binom_upper", "g_linear",
                "pairwise", "ef", "decomposition", "n1")


def _run_lemma(name: str, pairs, x_grid) -> pm.GridCheckReport:
    if name == "g_bounds":
        return pm.merge_reports("g-bound chain",
                                (pm.check_g_bounds(pr, x_grid) for pr in pairs))
    if name == "gpm":
        return pm.merge_reports("even-part bound",
                                (pm.check_lemma_gpm(pr, x_grid) for pr in pairs))
    if name == "ak_lower":
        return pm.merge_reports("coefficient floor",
                                (pm.check_lemma_ak_lower(pr) for pr in pairs))
    if name == "binom_upper":
        return pm.merge_reports("binomial-coefficient cap",
                                (pm.check_lemma_binom_upper(pr) for pr in pairs))
    if name == "g_linear":
        return pm.merge_reports("linear cap",
                                (pm.check_lemma_g_linear(pr, x_grid) for pr in pairs))
    if name == "pairwise":
        qualifying = [pr for pr in pairs
                      if pm._between_odd_and_even(pr.p_float())]
        if not qualifying:
            raise UsageError(
                "pairwise positivity needs at least one p between an odd "
                "and an even integer")
        return pm.merge_reports(
            "paired positivity (qualifying p only)",
            (pm.check_pairwise_positivity(pr, x_grid) for pr in qualifying))
    if name == "ef":
        return pm.merge_reports("positivity of E + F",
                                (pm.check_EF_positive(pr, x_grid) for pr in pairs))
    if name == "decomposition":
        return pm.merge_reports(
            "bracket decomposition",
            (pm.check_decomposition_identity(pr, x_grid) for pr in pairs))
    if name == "n1":
        return pm.check_n1_case()
    raise UsageError(f"unknown lemma {name!r}; choose from {_LEMMA_NAMES}")


def cmd_lemmas(args) -> int:
    if args.p is not None:
        p_values = [_parse_p(args.p)]
    elif args.p_grid is not None:
        p_values = [v for v in _parse_grid(args.p_grid) if v > 1]
        if not p_values:
            raise UsageError(f"p-grid {args.p_grid!r} has no points above 1")
    else:
        p_values = list(pm.DEFAULT_P_GRID)
    if args.x_grid is not None:
        x_values = [v for v in _parse_grid(args.x_grid)
                    if 0 < v <= Fraction(1, 2)]
        if not x_values:
            raise UsageError(f"x-grid {args.x_grid!r} has no points in (0, 1/2]")
    else:
        x_values = list(pm.DEFAULT_X_GRID)
    names = [args.only] if args.only else list(_LEMMA_NAMES)
    pairs = [ExponentPair(p) for p in p_values]
    reports = {}
    for name in names:
        reports[name] = _run_lemma(name, pairs, x_values)
    config = {"subcommand": "lemmas",
              "p": args.p, "p_grid": args.p_grid, "x_grid": args.x_grid,
              "only": args.only}
    _emit(_json_report(config, {
        "reports": {name: rep.to_json_dict() for name, rep in reports.items()},
    }), args.out)
    all_pass = all(rep.passed for rep in reports.values())
    return EXIT_OK if all_pass else EXIT_CHECK_FAILED


def cmd_rayleigh(args) -> int:
    p = _parse_p(args.p)
    if args.N < 2:
        raise UsageError(f"N must be at least 2, got {args.N}")
    pair = ExponentPair(p)
    kind = WeightKind(args.weight)
    result = minimize_rayleigh(pair, kind, args.N, max_iters=args.max_iters,
                               tol=args.tol, seed=args.seed)
    config = {"subcommand": "rayleigh", "p": str(p), "weight": args.weight,
              "N": args.N, "seed": args.seed, "max_iters": args.max_iters,
              "tol": args.tol}
    _emit(_json_report(config, {
        "quotient": result.quotient,
        "iterations": result.iterations,
        "converged": result.converged,
        "grad_norm": result.grad_norm,
    }), args.out)
    if args.phi_out:
        with open(args.phi_out, "w", newline="") as handle:
            handle.write(result.minimizer.to_csv())
    return EXIT_OK if result.quotient >= 1 - args.tol else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="json",
                        help="output format (default: json)")
    common.add_argument("--out", default=None, metavar="PATH",
                        help="write output to PATH instead of stdout")
    common.add_argument("--digits", type=int, default=30, metavar="D",
                        help="decimal digits for high-precision values "
                             "(default: 30)")
    common.add_argument("--seed", type=int, default=0, metavar="S",
                        help="master RNG seed (default: 0)")

    parser = argparse.ArgumentParser(
        prog="phardy",
        description="Improved discrete Hardy weights: evaluation, exact "
                    "series, and verification.")
    sub = parser.add_subparsers(dest="command", required=True)

    w = sub.add_parser("weight", parents=[common],
                       help="tabulate improved vs classical weights")
    w.add_argument("--p", required=True, help='exponent, e.g. "2" or "3/2"')
    w.add_argument("--n", default="1..10", metavar="LO..HI",
                   help="index range (default: 1..10)")
    w.set_defaults(handler=cmd_weight)

    s = sub.add_parser("series", parents=[common],
                       help="exact expansion coefficients")
    s.add_argument("--p", required=True,
                   help="integer >= 2 for the coefficient table; any "
                        "rational > 1 with --correction")
    s.add_argument("--order", type=int, default=DEFAULT_ORDER,
                   help=f"truncation order (default: {DEFAULT_ORDER})")
    s.add_argument("--correction", action="store_true",
                   help="expand the relative correction series instead; "
                        "positivity of its even coefficients is reported, "
                        "never asserted (open conjecture for non-integer p)")
    s.set_defaults(handler=cmd_series)

    v = sub.add_parser("verify", parents=[common],
                       help="Hardy inequality on random test functions, or "
                            "the supersolution identity")
    v.add_argument("--p", required=True)
    v.add_argument("--trials", type=int, default=1000)
    v.add_argument("--support", type=int, default=50,
                   help="maximum support size of random test functions")
    v.add_argument("--supersolution", action="store_true",
                   help="check the ground-state identity instead of trials")
    v.add_argument("--n", default="1..1000", metavar="LO..HI",
                   help="index range for --supersolution (default: 1..1000)")
    v.set_defaults(handler=cmd_verify, digits=40)

    l = sub.add_parser("lemmas", parents=[common],
                       help="grid checks of every proof lemma")
    l.add_argument("--p", default=None, help="single exponent")
    l.add_argument("--p-grid", default=None, metavar="START:STOP:STEP")
    l.add_argument("--x-grid", default=None, metavar="START:STOP:STEP")
    l.add_argument("--only", default=None, choices=_LEMMA_NAMES,
                   help="run a single check")
    l.set_defaults(handler=cmd_lemmas)

    r = sub.add_parser("rayleigh", parents=[common],
                       help="minimize the Rayleigh quotient")
    r.add_argument("--p", required=True)
    r.add_argument("--weight", choices=("improved", "classical"),
                   default="improved")
    r.add_argument("--N", type=int, required=True, help="support size")
    r.add_argument("--max-iters", type=int, default=20000)
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--phi-out", default=None, metavar="PATH",
                   help="write the minimizer as CSV (n,phi_n)")
    r.set_defaults(handler=cmd_rayleigh)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
