"""Command-line front end.

Subcommands: bounds, analytic, oracle, simulate, sweep, threshold, table1.
Output is a human-readable table by default; --format json emits one JSON
document, --format csv emits CSV. Exit codes: 0 success, 1 internal
numerical failure, 2 invalid flags or values.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import secrets
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analytics import analytic_report, greedy_revenue, incentive_bounds, threshold_alpha
from .errors import NoThresholdError, ReproductionError, SolveError
from .experiments import (
    DEFAULT_SWEEP_ALPHAS,
    DEFAULT_SWEEP_GAMMAS,
    SWEEP_MODES,
    SweepRecord,
    TABLE_ALPHAS,
    TABLE_GAMMAS,
    TABLE_RER_PCT,
    TABLE_TOL_PCT,
    ThresholdRecord,
    reproduce_table1,
    sweep_revenue,
    threshold_curve,
    write_csv,
    write_json,
)
from .oracle import DEFAULT_DEPTH, absorption_bounds
from .params import DEFAULT_R_LEADER, StrategyParams
from .simulate import DEFAULT_GIVEUP_DEPTH, DEFAULT_TRIALS, SimConfig, estimate

DEFAULT_TOL = 1e-6


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"{value} is outside [0, 1]")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def _depth(text: str) -> int:
    value = _positive_int(text)
    if value < 2:
        raise argparse.ArgumentTypeError(f"depth must be >= 2, got {value}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a number") from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"{value} is not positive")
    return value


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"{value} is not a 64-bit unsigned integer")
    return value


def _probability_list(text: str) -> list[float]:
    return [_probability(part) for part in text.split(",") if part.strip() != ""]


def _fmt(value) -> str:
    if value is None:
        return "undefined"
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def _render_human(payload: dict) -> str:
    lines = []
    for key, value in payload.items():
        if key == "records":
            continue
        lines.append(f"{key}: {_fmt(value)}")
    records = payload.get("records")
    if records:
        names = list(records[0].keys())
        widths = [max(len(n), *(len(_fmt(r[n])) for r in records)) for n in names]
        lines.append("  ".join(n.ljust(w) for n, w in zip(names, widths)))
        for r in records:
            lines.append("  ".join(_fmt(r[n]).ljust(w) for n, w in zip(names, widths)))
    return "\n".join(lines) + "\n"


def _render_csv(payload: dict) -> str:
    records = payload.get("records")
    rows = records if records else [{k: v for k, v in payload.items() if k != "records"}]
    names = list(rows[0].keys())
    out = [",".join(names)]
    for row in rows:
        out.append(",".join("" if row[n] is None else _fmt(row[n]) for n in names))
    return "\n".join(out) + "\n"


def _emit(args, payload: dict, records=None, record_type=None) -> int:
    """Render the payload and write it to stdout or --out; returns exit 0."""
    if records is not None:
        names = [fld.name for fld in dataclasses.fields(record_type)]
        payload = dict(payload)
        payload["records"] = [{n: getattr(rec, n) for n in names} for rec in records]
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    elif args.format == "csv":
        text = _render_csv(payload)
    else:
        text = _render_human(payload)

    if args.out:
        if records is not None and args.format in ("csv", "json"):
            writer = write_csv if args.format == "csv" else write_json
            nbytes = writer(records, args.out, record_type=record_type)
        else:
            data = text.encode("utf-8")
            Path(args.out).write_bytes(data)
            nbytes = len(data)
        print(f"wrote {nbytes} bytes to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_bounds(args) -> int:
    if args.alpha >= 1.0:
        raise ValueError("--alpha must be < 1 for the fee-split bounds")
    b = incentive_bounds(args.alpha)
    payload = {
        "alpha": args.alpha,
        "r_min_inclusion": b.r_min_inclusion,
        "r_max_extension": b.r_max_extension,
        "r_min_modified": b.r_min_modified,
        "window_low": b.window[0] if b.window else None,
        "window_high": b.window[1] if b.window else None,
    }
    return _emit(args, payload)


def _cmd_analytic(args) -> int:
    params = StrategyParams(alpha=args.alpha, gamma=args.gamma, r_leader=args.r_leader)
    report = analytic_report(params)
    payload = {
        "alpha": params.alpha,
        "gamma": params.gamma,
        "r_leader": params.r_leader,
        "revenue_honest": report.revenue_honest,
        "revenue_greedy": report.revenue_greedy,
        "rer": report.rer,
        "p_h0": report.probs.p_h0,
        "p_h10": report.probs.p_h10,
        "p_a2": report.probs.p_a2,
        "p_a20": report.probs.p_a20,
    }
    return _emit(args, payload)


def _cmd_oracle(args) -> int:
    params = StrategyParams(alpha=args.alpha, gamma=args.gamma)
    bounds = absorption_bounds(params, args.depth)
    closed = greedy_revenue(params)
    payload = {
        "alpha": params.alpha,
        "gamma": params.gamma,
        "depth": args.depth,
        "lower": bounds.lower,
        "upper": bounds.upper,
        "residual": bounds.residual,
        "revenue_greedy_closed": closed,
        "gap_lower_minus_closed": bounds.lower - closed,
    }
    return _emit(args, payload)


def _cmd_simulate(args) -> int:
    seed = args.seed
    if seed is None:
        if not args.nondeterministic:
            raise ValueError("--seed is required (or pass --nondeterministic)")
        seed = secrets.randbits(64)
    params = StrategyParams(alpha=args.alpha, gamma=args.gamma, r_leader=args.r_leader)
    config = SimConfig(params, trials=args.trials, master_seed=seed, giveup_depth=args.giveup_depth)
    stats = estimate(config)
    payload = {
        "alpha": params.alpha,
        "gamma": params.gamma,
        "r_leader": params.r_leader,
        "trials": args.trials,
        "seed": stats.seed_echo,
        "giveup_depth": args.giveup_depth,
        "greedy_wins": stats.greedy_wins,
        "honest_wins": stats.honest_wins,
        "truncated": stats.truncated,
        "p_hat": stats.p_hat,
        "ci95_half_width": stats.ci95_half_width,
        "mean_steps": stats.mean_steps,
    }
    return _emit(args, payload)


def _cmd_sweep(args) -> int:
    seed = args.seed
    if args.mode in ("mc", "all") and seed is None:
        if not args.nondeterministic:
            raise ValueError("--seed is required for Monte Carlo sweeps (or pass --nondeterministic)")
        seed = secrets.randbits(64)
    records = sweep_revenue(
        args.alphas,
        args.gammas,
        mode=args.mode,
        depth=args.depth,
        trials=args.trials,
        master_seed=seed if seed is not None else 0,
        giveup_depth=args.giveup_depth,
    )
    payload = {"mode": args.mode, "depth": args.depth, "trials": args.trials, "giveup_depth": args.giveup_depth}
    if args.mode in ("mc", "all"):
        payload["seed"] = seed
    return _emit(args, payload, records=records, record_type=SweepRecord)


def _cmd_threshold(args) -> int:
    if args.gammas is not None:
        records = threshold_curve(args.gammas, tol=args.tol)
        return _emit(args, {"tol": args.tol}, records=records, record_type=ThresholdRecord)
    if args.gamma is None:
        raise ValueError("--gamma (or --gammas) is required")
    alpha_star = threshold_alpha(args.gamma, tol=args.tol)
    payload = {"gamma": args.gamma, "tol": args.tol, "alpha_star": alpha_star}
    return _emit(args, payload)


def _cmd_table1(args) -> int:
    records = reproduce_table1(check=False)
    failures = []
    for rec in records:
        got = rec.rer_closed * 100.0
        want = TABLE_RER_PCT[(rec.gamma, rec.alpha)]
        if abs(got - want) > TABLE_TOL_PCT:
            failures.append(f"(gamma={rec.gamma}, alpha={rec.alpha}): got {got:.6f}, want {want:.4f}")
    payload = {
        "cells": len(records),
        "tolerance_pct": TABLE_TOL_PCT,
        "failures": len(failures),
        "status": "PASS" if not failures else "FAIL",
    }
    _emit(args, payload, records=records, record_type=SweepRecord)
    if failures:
        for f in failures:
            print(f"MISMATCH {f}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ng-greedy",
        description="Greedy-Mine incentive analysis for Bitcoin-NG: closed forms, exact chain oracle, Monte Carlo.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--format", choices=("human", "json", "csv"), default="human")
        p.add_argument("--out", metavar="PATH", default=None)

    p = sub.add_parser("bounds", help="fee-split bounds on the leader's share")
    p.add_argument("--alpha", type=_probability, required=True)
    add_common(p)
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("analytic", help="closed-form revenues and RER at one parameter point")
    p.add_argument("--alpha", type=_probability, required=True)
    p.add_argument("--gamma", type=_probability, required=True)
    p.add_argument("--r-leader", type=_probability, default=DEFAULT_R_LEADER, dest="r_leader")
    add_common(p)
    p.set_defaults(func=_cmd_analytic)

    p = sub.add_parser("oracle", help="truncated-chain win-probability bracket")
    p.add_argument("--alpha", type=_probability, required=True)
    p.add_argument("--gamma", type=_probability, required=True)
    p.add_argument("--depth", type=_depth, default=DEFAULT_DEPTH)
    add_common(p)
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("simulate", help="seeded Monte Carlo estimate")
    p.add_argument("--alpha", type=_probability, required=True)
    p.add_argument("--gamma", type=_probability, required=True)
    p.add_argument("--r-leader", type=_probability, default=DEFAULT_R_LEADER, dest="r_leader")
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--giveup-depth", type=_depth, default=DEFAULT_GIVEUP_DEPTH, dest="giveup_depth")
    p.add_argument("--nondeterministic", action="store_true", help="draw a fresh seed instead of requiring --seed")
    add_common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="parameter sweep over (alpha, gamma) grids")
    p.add_argument("--mode", choices=SWEEP_MODES, default="closed")
    p.add_argument("--alphas", type=_probability_list, default=list(DEFAULT_SWEEP_ALPHAS), help="comma-separated alphas")
    p.add_argument("--gammas", type=_probability_list, default=list(DEFAULT_SWEEP_GAMMAS), help="comma-separated gammas")
    p.add_argument("--depth", type=_depth, default=DEFAULT_DEPTH)
    p.add_argument("--trials", type=_positive_int, default=DEFAULT_TRIALS)
    p.add_argument("--seed", type=_seed, default=None)
    p.add_argument("--giveup-depth", type=_depth, default=DEFAULT_GIVEUP_DEPTH, dest="giveup_depth")
    p.add_argument("--nondeterministic", action="store_true")
    add_common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("threshold", help="profitability threshold alpha* by bisection")
    p.add_argument("--gamma", type=_probability, default=None)
    p.add_argument("--gammas", type=_probability_list, default=None, help="comma-separated gammas for a curve")
    p.add_argument("--tol", type=_positive_float, default=DEFAULT_TOL)
    add_common(p)
    p.set_defaults(func=_cmd_threshold)

    p = sub.add_parser("table1", help="reproduce the golden RER table and verify every cell")
    add_common(p)
    p.set_defaults(func=_cmd_table1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoThresholdError, ReproductionError, SolveError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
