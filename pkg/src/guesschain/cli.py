"""Command-line front end: solves, sweeps, simulations, threshold search.

Subcommands
-----------
optimize   solve one instance, print the strategy as JSON (optionally with
           the serialized measurement stages)
sweep      tabulate strategies over an overlap and/or prior grid as CSV
simulate   build a chain, run the seeded Monte Carlo check, print the report
find-sb    locate the equal-prior validity threshold of the symmetric formula

Exit codes: 0 success, 1 statistical acceptance failure (simulate only),
2 usage/validation error, 3 output I/O error.

All JSON carries a top-level ``"schema_version": 1``. Floats are emitted in
shortest round-trip decimal form in both JSON and CSV, so outputs are
bit-stable across runs; CSV uses UTF-8, comma separators, a header row, and
LF line endings. Diagnostics go to stderr only.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import (
    DiscriminationInstance,
    Strategy,
    StrategyResult,
    boundary_solution,
    equal_prior_jbg,
    individual_greedy,
)
from .optimize import OptimizerConfig, find_sb, optimize_reduced
from .povm import MeasurementStage, build_chain
from .simulate import SimConfig, run_chain_simulation

__all__ = ["main"]

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_STAT_FAIL = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(ValueError):
    """Flag validation failure; maps to exit code 2."""


def _solve(inst: DiscriminationInstance, strategy: Strategy) -> StrategyResult:
    if strategy is Strategy.JBG_OPTIMAL:
        return optimize_reduced(inst)
    if strategy is Strategy.JBG_SYMMETRIC_ANALYTIC:
        symmetric = equal_prior_jbg(inst.overlap, inst.n_receivers)
        # Same symmetric stages; the joint is reweighted by the true priors
        # (numerically identical to p**N since p1 = p2).
        return StrategyResult(
            stages=symmetric.stages,
            overlaps=symmetric.overlaps,
            joint_success=symmetric.recompute_joint(inst.prior_1, inst.prior_2),
            strategy=Strategy.JBG_SYMMETRIC_ANALYTIC,
        )
    if strategy is Strategy.INDIVIDUAL_GREEDY:
        return individual_greedy(inst)
    if strategy is Strategy.BOUNDARY:
        return boundary_solution(inst)
    raise UsageError(f"unsupported strategy {strategy!r}")


def _parse_strategy(name: str) -> Strategy:
    try:
        return Strategy[name.upper().replace("-", "_")]
    except KeyError:
        valid = ", ".join(s.name for s in Strategy)
        raise UsageError(f"unknown strategy {name!r} (expected one of: {valid})") from None


def _instance_from_args(args: argparse.Namespace) -> DiscriminationInstance:
    try:
        return DiscriminationInstance(
            overlap=args.overlap,
            prior_1=args.prior,
            n_receivers=args.receivers,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _complex_cell(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _matrix_json(matrix) -> list[list[list[float]]]:
    return [[_complex_cell(z) for z in row] for row in matrix.tolist()]


def _stage_json(stage: MeasurementStage) -> dict:
    return {
        "detector_1": _matrix_json(stage.detectors[0]),
        "detector_2": _matrix_json(stage.detectors[1]),
        "output_1": [_complex_cell(z) for z in stage.outputs[0].amplitudes],
        "output_2": [_complex_cell(z) for z in stage.outputs[1].amplitudes],
        "p1": stage.success.p1,
        "p2": stage.success.p2,
        "in_overlap": stage.in_overlap,
        "out_overlap": stage.out_overlap,
    }


def _result_json(inst: DiscriminationInstance, result: StrategyResult) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "overlap": inst.overlap,
        "prior_1": inst.prior_1,
        "prior_2": inst.prior_2,
        "receivers": inst.n_receivers,
        "strategy": result.strategy.name,
        "stages": [{"p1": s.p1, "p2": s.p2} for s in result.stages],
        "overlaps": list(result.overlaps),
        "joint_success": result.joint_success,
    }


def _emit(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def cmd_optimize(args: argparse.Namespace) -> int:
    inst = _instance_from_args(args)
    result = _solve(inst, _parse_strategy(args.strategy))
    payload = _result_json(inst, result)
    if args.emit_stages:
        payload["measurement_stages"] = [_stage_json(s) for s in build_chain(inst, result)]
    _emit(payload)
    return EXIT_OK


def _float_cell(x: float) -> str:
    return repr(float(x))


def cmd_sweep(args: argparse.Namespace) -> int:
    strategies = [_parse_strategy(name) for name in args.strategies.split(",") if name]
    if not strategies:
        raise UsageError("at least one strategy must be requested")
    if args.points < 2:
        raise UsageError(f"--points must be >= 2, got {args.points}")
    if not (0.0 <= args.start <= 1.0 and 0.0 <= args.stop <= 1.0):
        raise UsageError("--start/--stop must lie in [0, 1]")

    def grid(start: float, stop: float, points: int) -> list[float]:
        if points == 1:
            return [start]
        step = (stop - start) / (points - 1)
        return [start + k * step for k in range(points)]

    if args.variable == "overlap":
        axes = [("overlap", grid(args.start, args.stop, args.points))]
        fixed = {"prior_1": args.prior}
    elif args.variable == "prior":
        axes = [("prior_1", grid(args.start, args.stop, args.points))]
        fixed = {"overlap": args.overlap}
    else:  # both
        if args.prior_points < 2:
            raise UsageError(f"--prior-points must be >= 2, got {args.prior_points}")
        if not (0.0 <= args.prior_start <= 1.0 and 0.0 <= args.prior_stop <= 1.0):
            raise UsageError("--prior-start/--prior-stop must lie in [0, 1]")
        axes = [
            ("overlap", grid(args.start, args.stop, args.points)),
            ("prior_1", grid(args.prior_start, args.prior_stop, args.prior_points)),
        ]
        fixed = {}

    header = [name for name, _ in axes]
    for strategy in strategies:
        prefix = strategy.name.lower()
        header += [f"{prefix}_joint_success", f"{prefix}_p1", f"{prefix}_p2"]

    rows = []
    points = [[value] for value in axes[0][1]]
    if len(axes) == 2:
        points = [[a, b] for a in axes[0][1] for b in axes[1][1]]  # row-major
    for coords in points:
        params = dict(fixed)
        for (name, _), value in zip(axes, coords):
            params[name] = value
        try:
            inst = DiscriminationInstance(
                overlap=params["overlap"],
                prior_1=params["prior_1"],
                n_receivers=args.receivers,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        row = [_float_cell(c) for c in coords]
        for strategy in strategies:
            result = _solve(inst, strategy)
            row += [
                _float_cell(result.joint_success),
                _float_cell(result.stages[0].p1),
                _float_cell(result.stages[0].p2),
            ]
        rows.append(row)

    try:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(",".join(header) + "\n")
            for row in rows:
                handle.write(",".join(row) + "\n")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    inst = _instance_from_args(args)
    try:
        cfg = SimConfig(seed=args.seed, trials=args.trials, record_per_receiver=True)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    result = _solve(inst, _parse_strategy(args.strategy))
    stages = build_chain(inst, result)
    report = run_chain_simulation(inst, stages, cfg)
    payload = {
        "schema_version": SCHEMA_VERSION,
        "overlap": inst.overlap,
        "prior_1": inst.prior_1,
        "prior_2": inst.prior_2,
        "receivers": inst.n_receivers,
        "strategy": result.strategy.name,
        "trials": report.trials,
        "seed": report.seed,
        "prng": report.prng,
        "joint_successes": report.joint_successes,
        "empirical_joint": report.empirical_joint,
        "std_error": report.std_error,
        "predicted_joint": report.predicted_joint,
        "z_score": report.z_score,
        "per_state_counts": list(report.per_state_counts),
        "per_receiver_success": [list(pair) for pair in report.per_receiver_success],
        "predicted_per_receiver": [[s.p1, s.p2] for s in result.stages],
    }
    _emit(payload)
    return EXIT_OK if abs(report.z_score) <= 4.0 else EXIT_STAT_FAIL


def cmd_find_sb(args: argparse.Namespace) -> int:
    if args.receivers < 2:
        raise UsageError("the threshold is only defined for 2 or more receivers")
    value = find_sb(args.receivers, OptimizerConfig())
    _emit({"schema_version": SCHEMA_VERSION, "n": args.receivers, "s_b": value})
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="guesschain",
        description="Optimal joint-guess strategies for sequential qubit discrimination chains.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_instance_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--overlap", type=float, required=True, help="prepared-pair overlap in [0, 1]")
        p.add_argument("--prior", type=float, required=True, help="prior probability of state 1")
        p.add_argument("--receivers", type=int, required=True, help="number of receivers in the chain")

    p_opt = sub.add_parser("optimize", help="solve one instance and print JSON")
    add_instance_flags(p_opt)
    p_opt.add_argument("--strategy", default="JBG_OPTIMAL", help="strategy to compute")
    p_opt.add_argument(
        "--emit-stages",
        action="store_true",
        help="include the serialized measurement stages in the JSON",
    )
    p_opt.set_defaults(func=cmd_optimize)

    p_sweep = sub.add_parser("sweep", help="tabulate strategies over a parameter grid as CSV")
    p_sweep.add_argument("--variable", choices=("overlap", "prior", "both"), required=True)
    p_sweep.add_argument("--start", type=float, default=0.0, help="swept-variable start (overlap axis for 'both')")
    p_sweep.add_argument("--stop", type=float, default=1.0, help="swept-variable stop")
    p_sweep.add_argument("--points", type=int, default=101, help="swept-variable point count")
    p_sweep.add_argument("--prior-start", type=float, default=0.0, help="prior axis start ('both' only)")
    p_sweep.add_argument("--prior-stop", type=float, default=1.0, help="prior axis stop ('both' only)")
    p_sweep.add_argument("--prior-points", type=int, default=101, help="prior axis point count ('both' only)")
    p_sweep.add_argument("--overlap", type=float, default=0.5, help="fixed overlap when sweeping the prior")
    p_sweep.add_argument("--prior", type=float, default=0.5, help="fixed prior when sweeping the overlap")
    p_sweep.add_argument("--receivers", type=int, required=True)
    p_sweep.add_argument(
        "--strategies",
        default="JBG_OPTIMAL",
        help="comma-separated strategies to tabulate",
    )
    p_sweep.add_argument("--out", required=True, help="output CSV path")
    p_sweep.set_defaults(func=cmd_sweep)

    p_sim = sub.add_parser("simulate", help="Monte Carlo check of a built chain")
    add_instance_flags(p_sim)
    p_sim.add_argument("--trials", type=int, default=1_000_000)
    p_sim.add_argument("--seed", type=int, required=True, help="PRNG seed (mandatory for reproducibility)")
    p_sim.add_argument("--strategy", default="JBG_OPTIMAL")
    p_sim.set_defaults(func=cmd_simulate)

    p_sb = sub.add_parser("find-sb", help="equal-prior validity threshold of the symmetric formula")
    p_sb.add_argument("--receivers", type=int, required=True)
    p_sb.set_defaults(func=cmd_find_sb)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
