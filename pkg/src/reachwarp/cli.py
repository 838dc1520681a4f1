"""Command-line interface.

Subcommands: optimize (select the input matrix), boundary (sweep boundary
points to CSV), metric (print one growth metric), verify (sampled
optimality check), fixtures (list or emit built-in problems).  Every
computing command writes a manifest.json next to its outputs recording the
configuration echo, package version, assumption regime, wall-clock time
and produced files.

Exit codes: 0 success, 1 failed verification in the theorem regime,
2 malformed configuration or dimension mismatch, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .config import ProblemConfig, load_config
from .errors import ConfigError, NumericError, ReachwarpError
from .fixtures import fixture_config, fixture_description, fixture_names
from .model import FrobeniusBall
from .reach import boundary_sweep, direction_fan, growth_metric
from .verify import verify_optimality
from .warp import REGIME_THEOREM, WarpResult, check_assumptions, optimize_B


def _fmt(value: float) -> str:
    return format(float(value), ".17g")


def _jsonable(obj):
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def _warn(message: str) -> None:
    print(f"warning: {message}", file=sys.stderr)


def _load_problem(args) -> ProblemConfig:
    if not args.config:
        raise ConfigError("--config is required for this command")
    problem = load_config(args.config)
    if not problem.control.contains_zero:
        _warn("control set does not contain the zero input; the growth metric "
              "may be negative even without optimization")
    return problem


def _regime_warning(report) -> None:
    if report.regime == REGIME_THEOREM:
        return
    reasons = []
    if not report.assumption1_holds:
        reasons.append("the system matrix has complex eigenvalues")
    if not report.assumption2_holds:
        reasons.append("the direction is not an eigenvector of the transposed "
                       "system matrix")
    print("THEOREM REGIME NOT SATISFIED: result is heuristic "
          f"({'; '.join(reasons)})", file=sys.stderr)


def _out_dir(args) -> Path:
    out = Path(args.out) if args.out else Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _manifest(out: Path, command: str, problem: ProblemConfig, regime: str,
              started: float, outputs: list[str], extras: dict | None = None) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "config": problem.echo,
        "regime": regime,
        "wall_clock_s": round(time.perf_counter() - started, 6),
        "outputs": outputs,
    }
    if extras:
        payload["extras"] = extras
    _write_json(out / "manifest.json", payload)


def _candidate_entry(cand) -> dict:
    return {"index": cand.index, "B": cand.B, "objective": cand.objective}


def _warp_payload(result: WarpResult, steps: int) -> dict:
    report = result.report
    return {
        "sense": result.sense,
        "steps": steps,
        "regime": report.regime,
        "assumptions": {
            "eigenvalues": [list(ev) for ev in report.spectrum.eigenvalues],
            "max_abs_imag": report.spectrum.max_abs_imag,
            "all_real": report.spectrum.all_real,
            "eigvec_mu": report.eigvec_mu,
            "eigvec_residual": report.eigvec_residual,
            "assumption1_holds": report.assumption1_holds,
            "assumption2_holds": report.assumption2_holds,
        },
        "P0": result.P0,
        "i_star": result.i_star,
        "B_star": result.B_star,
        "degenerate": result.degenerate,
        "G_nominal": result.G_nominal,
        "G_optimized": result.G_optimized,
        "candidates": [_candidate_entry(c) for c in result.candidates],
    }


def _run_optimize(problem: ProblemConfig, steps: int) -> WarpResult:
    result = optimize_B(problem.system, problem.control, problem.ball,
                        problem.direction, problem.sense, steps,
                        problem.tolerances.tol_spec, problem.tolerances.tol_ev)
    _regime_warning(result.report)
    return result


def _resolve_B(args, problem: ProblemConfig, steps: int):
    """Input matrix selected by --B: the ball center, the optimizer output,
    or a matrix file; returns (B, tag, warp_result_or_None)."""
    choice = args.B
    if choice == "nominal":
        return problem.ball.center, "nominal", None
    if choice == "optimized":
        result = _run_optimize(problem, steps)
        return result.B_star, "optimized", result
    path = Path(choice)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read matrix file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"matrix file {path} is not valid JSON: {exc.msg} "
                          f"(line {exc.lineno}, column {exc.colno})") from exc
    if isinstance(data, dict):
        if "B" not in data:
            raise ConfigError(f"matrix file {path}: expected a 'B' field")
        data = data["B"]
    try:
        B = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"matrix file {path}: not a numeric matrix ({exc})") from exc
    expected = (problem.system.n, problem.system.m)
    if B.ndim != 2 or B.shape != expected:
        raise ConfigError(f"matrix file {path}: expected shape {expected}, got "
                          f"{B.shape if B.ndim == 2 else B.shape}")
    if not np.all(np.isfinite(B)):
        raise ConfigError(f"matrix file {path}: non-finite entries")
    return B, "custom", None


def cmd_optimize(args) -> int:
    started = time.perf_counter()
    problem = _load_problem(args)
    steps = args.steps if args.steps is not None else problem.steps
    out = _out_dir(args)
    result = _run_optimize(problem, steps)
    _write_json(out / "warp_result.json", _warp_payload(result, steps))
    print(f"G_nominal = {_fmt(result.G_nominal)}")
    print(f"G_optimized = {_fmt(result.G_optimized)}")
    print(f"i_star = {result.i_star}")
    _manifest(out, "optimize", problem, result.report.regime, started,
              ["warp_result.json"])
    return 0


def cmd_boundary(args) -> int:
    started = time.perf_counter()
    problem = _load_problem(args)
    steps = args.steps if args.steps is not None else problem.steps
    count = args.directions if args.directions is not None else problem.directions
    seed = args.seed if args.seed is not None else problem.seed
    out = _out_dir(args)
    B, tag, result = _resolve_B(args, problem, steps)
    fan = direction_fan(problem.system.n, count, seed)
    points = boundary_sweep(problem.system, B, problem.control, fan, steps)
    name = f"boundary_{tag}.csv"
    _write_boundary_csv(out / name, points)
    extras = {"directions_total": len(fan), "steps": steps, "seed": seed}
    if result is not None:
        nominal = boundary_sweep(problem.system, problem.ball.center,
                                 problem.control, fan, steps)
        grown = sum(1 for p, q in zip(points, nominal)
                    if p.support_value > q.support_value)
        extras["directions_grown"] = grown
    regime = (result.report.regime if result is not None
              else check_assumptions(problem.system, problem.direction,
                                     problem.tolerances.tol_spec,
                                     problem.tolerances.tol_ev).regime)
    _manifest(out, "boundary", problem, regime, started, [name], extras)
    return 0


def _write_boundary_csv(path: Path, points) -> None:
    n = points[0].d.shape[0]
    header = (["dir_index"] + [f"d_{i + 1}" for i in range(n)]
              + [f"x_{i + 1}" for i in range(n)] + ["support_value"])
    lines = [",".join(header)]
    for idx, p in enumerate(points):
        row = ([str(idx)] + [_fmt(v) for v in p.d] + [_fmt(v) for v in p.X_dB]
               + [_fmt(p.support_value)])
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_metric(args) -> int:
    started = time.perf_counter()
    problem = _load_problem(args)
    steps = args.steps if args.steps is not None else problem.steps
    out = _out_dir(args)
    B, tag, result = _resolve_B(args, problem, steps)
    report = growth_metric(problem.system, B, problem.control,
                           problem.direction, steps)
    print(f"G_d = {_fmt(report.G_d)}")
    payload = {
        "G_d": report.G_d,
        "direction": problem.direction,
        "c0": report.c0,
        "X_dB": report.X_dB,
        "B": report.B,
        "B_source": tag,
        "steps": steps,
    }
    _write_json(out / "metric.json", payload)
    regime = (result.report.regime if result is not None
              else check_assumptions(problem.system, problem.direction,
                                     problem.tolerances.tol_spec,
                                     problem.tolerances.tol_ev).regime)
    _manifest(out, "metric", problem, regime, started, ["metric.json"])
    return 0


def cmd_verify(args) -> int:
    started = time.perf_counter()
    problem = _load_problem(args)
    steps = args.steps if args.steps is not None else problem.steps
    seed = args.seed if args.seed is not None else problem.seed
    samples = args.samples
    out = _out_dir(args)
    result = _run_optimize(problem, steps)
    verdict = verify_optimality(problem.system, problem.control, problem.ball,
                                problem.direction, problem.sense, samples, seed,
                                steps, problem.tolerances.tol_verify, result)
    required = result.report.regime == REGIME_THEOREM
    payload = {
        "samples": verdict.samples,
        "seed": seed,
        "steps": steps,
        "sense": problem.sense,
        "regime": result.report.regime,
        "G_star": verdict.G_star,
        "best_sampled_G": verdict.best_sampled_G,
        "best_sampled_B": verdict.best_sampled_B,
        "margin": verdict.margin,
        "tol_verify": verdict.tol_verify,
        "pass": verdict.passed,
        "pass_required": required,
    }
    _write_json(out / "verdict.json", payload)
    print(f"margin = {_fmt(verdict.margin)}")
    if not required:
        print("pass: not-required (heuristic regime)")
        code = 0
    elif verdict.passed:
        print("pass")
        code = 0
    else:
        print("FAIL: a sampled matrix beat the selected one in the theorem regime")
        code = 1
    _manifest(out, "verify", problem, result.report.regime, started,
              ["verdict.json"], {"exit_code": code})
    return code


def cmd_fixtures(args) -> int:
    out = _out_dir(args)
    if args.emit is None:
        for name in fixture_names():
            print(f"{name}: {fixture_description(name)}")
        return 0
    payload = fixture_config(args.emit)
    path = out / f"{args.emit}.json"
    _write_json(path, payload)
    print(str(path))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reachwarp",
        description="Directional reachable-set growth analysis for linear systems")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_b=False):
        p.add_argument("--config", help="problem configuration JSON file")
        p.add_argument("--steps", type=int, help="override the integration step count")
        p.add_argument("--out", help="output directory (default: current directory)")
        if with_b:
            p.add_argument("--B", default="nominal",
                           help="input matrix: 'nominal', 'optimized', or a JSON "
                                "matrix file")

    p_opt = sub.add_parser("optimize", help="select the input matrix from the ball")
    add_common(p_opt)
    p_opt.set_defaults(func=cmd_optimize)

    p_bnd = sub.add_parser("boundary", help="sweep boundary points to CSV")
    add_common(p_bnd, with_b=True)
    p_bnd.add_argument("--directions", type=int, help="number of sweep directions")
    p_bnd.add_argument("--seed", type=int, help="seed for direction generation")
    p_bnd.set_defaults(func=cmd_boundary)

    p_met = sub.add_parser("metric", help="print the growth metric for one direction")
    add_common(p_met, with_b=True)
    p_met.set_defaults(func=cmd_metric)

    p_ver = sub.add_parser("verify", help="sampled optimality check")
    add_common(p_ver)
    p_ver.add_argument("--samples", type=int, default=1000,
                       help="number of sampled matrices (default 1000)")
    p_ver.add_argument("--seed", type=int, help="seed for ball sampling")
    p_ver.set_defaults(func=cmd_verify)

    p_fix = sub.add_parser("fixtures", help="list or emit built-in problems")
    p_fix.add_argument("--emit", help="fixture name to write as <name>.json")
    p_fix.add_argument("--out", help="output directory (default: current directory)")
    p_fix.set_defaults(func=cmd_fixtures)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ReachwarpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
