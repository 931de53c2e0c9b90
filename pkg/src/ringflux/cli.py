"""Command-line entry point.

Exit codes: 0 success/PASS, 1 violations or mismatches found, 2 usage or
runtime error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import asymptotic_report, certify_conserved
from .dynamics import DynamicsError, parse_rule
from .lab import (
    PREDICTORS,
    adjudicate,
    emit_csv,
    emit_findings,
    emit_plot_script,
    render_spacetime,
    sweep,
    verify_rule1,
)
from .lattice import LatticeError, make_state


def _cmd_evolve(args) -> int:
    out = render_spacetime(parse_rule(args.rule), make_state(args.init), args.steps, args.format)
    if args.out:
        Path(args.out).write_bytes(out if isinstance(out, bytes) else out.encode())
    elif isinstance(out, bytes):
        sys.stdout.buffer.write(out)
    else:
        sys.stdout.write(out)
    return 0


def _cmd_analyze(args) -> int:
    rule = parse_rule(args.rule)
    report = asymptotic_report(rule, make_state(args.init), args.budget)
    print(f"rule: {rule.serialize()} ({rule.label})")
    print(f"init: {args.init}")
    print(report.describe())
    return 0


def _cmd_sweep(args) -> int:
    rule = parse_rule(args.rule)
    kwargs = {"seed": args.seed}
    if args.mode == "random":
        kwargs["samples"] = args.samples if args.samples is not None else 100
        if args.p_grid:
            kwargs["p_grid"] = [Fraction(p) for p in args.p_grid.split(",")]
    elif args.mode == "constructed":
        kwargs["seeds_per_target"] = args.samples if args.samples is not None else 3
    points = sweep(rule, args.L, args.mode, args.predictor, **kwargs)
    meta = {
        "rule": rule.serialize(),
        "rule_name": rule.label,
        "L": args.L,
        "mode": args.mode,
        "predictor": args.predictor or "default",
        "seed": args.seed,
        "samples": kwargs.get("samples", kwargs.get("seeds_per_target", "")),
    }
    emit_csv(points, args.out, meta)
    if args.plot:
        emit_plot_script(args.out, args.plot)
    mismatched = sum(1 for p in points if p.q_predicted is not None and not p.agrees)
    print(f"{len(points)} points written to {args.out}; {mismatched} prediction mismatches")
    return 1 if mismatched else 0


def _cmd_verify(args) -> int:
    report = verify_rule1(args.lmin, args.lmax, parse_rule(args.rule), workers=args.workers)
    print(report.text(timing=True), end="")
    if args.out:
        Path(args.out).write_text(report.text())
    return 0 if report.passed else 1


def _cmd_adjudicate(args) -> int:
    rule = parse_rule(args.rule)
    report = adjudicate(rule, args.lmin, args.lmax, workers=args.workers)
    print(report.text(timing=True), end="")
    if report.theorem2_mismatches:
        findings = args.findings or f"findings-{rule.label}-L{args.lmin}-{args.lmax}.csv"
        emit_findings(report, findings, {"rule_table": rule.serialize()})
        print(f"counterexamples written to {findings}")
    return 0 if report.passed else 1


def _cmd_conserve(args) -> int:
    report = certify_conserved(parse_rule(args.rule), args.quantity, args.lmin, args.lmax)
    print(report.text())
    return 0 if report.verdict == "conserved" else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ringflux", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"ringflux {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="render a space-time diagram")
    p.add_argument("--rule", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--format", choices=("ascii", "pbm"), default="ascii")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("analyze", help="asymptotic report for one initial state")
    p.add_argument("--rule", required=True)
    p.add_argument("--init", required=True)
    p.add_argument("--budget", type=int, help="step cap for cycle detection (default 2^L+1)")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="fundamental-diagram sweep to CSV")
    p.add_argument("--rule", required=True)
    p.add_argument("-L", type=int, required=True)
    p.add_argument("--mode", choices=("exhaustive", "random", "constructed"), required=True)
    p.add_argument("--samples", type=int,
                   help="random: total samples (default 100); constructed: seeds per target (default 3)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--predictor", choices=PREDICTORS)
    p.add_argument("--p-grid", help="random mode: comma-separated probabilities, e.g. 1/4,1/2")
    p.add_argument("--out", required=True)
    p.add_argument("--plot", help="also write a plot script (.py matplotlib, .gp gnuplot)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="exhaustive check of the rule1 diagram and phases")
    p.add_argument("--rule", default="rule1")
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the report text here")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("adjudicate", help="test the ex1/ex2 conjectured diagrams")
    p.add_argument("--rule", required=True, choices=("ex1", "ex2"))
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--findings", help="counterexample CSV (default findings-RULE-LA-B.csv)")
    p.set_defaults(func=_cmd_adjudicate)

    p = sub.add_parser("conserve", help="certify a quantity conserved by one step")
    p.add_argument("--rule", required=True)
    p.add_argument("--quantity", required=True,
                   help="site-sum, odd-runs, one-star-zero or pattern:WORD")
    p.add_argument("--lmin", type=int, required=True)
    p.add_argument("--lmax", type=int, required=True)
    p.set_defaults(func=_cmd_conserve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (LatticeError, DynamicsError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
