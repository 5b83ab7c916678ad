"""Command-line front end: candidate-time sweeps, synthesis, switching-curve
export and schedule verification.

All data files are deterministic for a given configuration (17-significant-
digit decimals, no timestamps); provenance lives in a sidecar ``.meta.json``
next to each written file.  Exit codes: 0 ok, 2 usage or parse error,
3 internal infeasibility, 4 verification failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import Bang, ControlBounds, Point
from .oracle import VerifyTolerances, ermakov_check, pmp_check
from .switching import switching_curves
from .synthesis import (
    Arc,
    ControlSchedule,
    NoSolution,
    SynthesisResult,
    max_turns,
    sample_trajectory,
    solve_turn_ratio,
    synthesize,
    time_n_turns,
    time_one_switch,
)

__all__ = ["main", "schedule_from_json", "schedule_to_json"]

SCHEMA = "bbcool/1"

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY_FAILED = 4


class ConfigError(ValueError):
    """Invalid run configuration; reported on stderr with exit code 2."""


@dataclass
class RunConfig:
    """Validated CLI configuration shared by all subcommands."""

    u1: float
    u2: float
    gammas: list[float]
    gamma_range: tuple[float, float, int] | None
    n_max_override: int | None
    tol: float | None  # None = per-command default
    step: float
    output_format: str
    output_path: Path | None

    @property
    def bounds(self) -> ControlBounds:
        return ControlBounds(self.u1, self.u2)

    @property
    def ratio_tol(self) -> float:
        return 1e-13 if self.tol is None else self.tol

    @property
    def endpoint_tol(self) -> float:
        return 1e-6 if self.tol is None else self.tol


def _fmt(x: float) -> str:
    """Full 17-significant-digit decimal rendering (round-trips binary64)."""
    return format(x, ".17g")


def _parse_gamma_range(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--gamma-range must be lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"cannot parse --gamma-range {text!r}: {exc}") from exc
    if count < 1:
        raise ConfigError(f"--gamma-range count must be >= 1, got {count}")
    if not (1.0 < lo <= hi):
        raise ConfigError(f"--gamma-range needs 1 < lo <= hi, got {lo}:{hi}")
    return lo, hi, count


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    try:
        bounds = ControlBounds(args.u1, args.u2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    gammas: list[float] = []
    if getattr(args, "gamma", None):
        for chunk in args.gamma.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                g = float(chunk)
            except ValueError as exc:
                raise ConfigError(f"cannot parse --gamma value {chunk!r}") from exc
            if not g > 1.0:
                raise ConfigError(f"gamma must be > 1, got {g}")
            gammas.append(g)
    gamma_range = None
    if getattr(args, "gamma_range", None):
        gamma_range = _parse_gamma_range(args.gamma_range)
    if args.tol is not None and not (args.tol > 0.0 and math.isfinite(args.tol)):
        raise ConfigError(f"--tol must be > 0, got {args.tol}")
    if not (args.step > 0.0 and math.isfinite(args.step)):
        raise ConfigError(f"--step must be > 0, got {args.step}")
    n_max_override = getattr(args, "n_max", None)
    if n_max_override is not None and n_max_override < 0:
        raise ConfigError(f"--n-max must be >= 0, got {n_max_override}")
    return RunConfig(
        u1=bounds.u1,
        u2=bounds.u2,
        gammas=gammas,
        gamma_range=gamma_range,
        n_max_override=n_max_override,
        tol=args.tol,
        step=args.step,
        output_format=getattr(args, "format", "csv"),
        output_path=Path(args.output) if getattr(args, "output", None) else None,
    )


def _grid(gamma_range: tuple[float, float, int]) -> np.ndarray:
    lo, hi, count = gamma_range
    return np.linspace(lo, hi, count)


def _write_with_meta(path: Path, payload: str, argv: list[str]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(payload, encoding="utf-8")
    meta = {
        "tool": "bbcool",
        "version": __version__,
        "command": argv,
        "written_at": datetime.now(timezone.utc).isoformat(),
    }
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


def _emit(cfg: RunConfig, payload: str, argv: list[str]) -> None:
    if cfg.output_path is None:
        sys.stdout.write(payload)
    else:
        _write_with_meta(cfg.output_path, payload, argv)


# ---------------------------------------------------------------------------
# schedule (de)serialization


def schedule_to_json(result: SynthesisResult) -> dict:
    """JSON document for a synthesis result (schema ``bbcool/1``)."""
    sched = result.schedule
    arcs = [
        {
            "control": arc.ctrl.value,
            "u": arc.ctrl.control(sched.bounds),
            "duration": arc.duration,
            "start": [arc.start.x1, arc.start.x2],
            "end": [arc.end.x1, arc.end.x2],
            "c": arc.c,
        }
        for arc in sched.arcs
    ]
    candidates = []
    for n in sorted(result.candidates):
        cand = result.candidates[n]
        row = {
            "n": cand.n,
            "feasible": cand.feasible,
            "s": cand.s,
            "T": cand.T,
        }
        if cand.breakdown is not None:
            row["breakdown"] = {
                "T_I": cand.breakdown.T_I,
                "T_X": cand.breakdown.T_X,
                "T_Y": cand.breakdown.T_Y,
                "T_F": cand.breakdown.T_F,
            }
        if cand.note:
            row["note"] = cand.note
        candidates.append(row)
    return {
        "schema": SCHEMA,
        "bounds": {"u1": sched.bounds.u1, "u2": sched.bounds.u2},
        "gamma": sched.gamma,
        "optimal_n": result.optimal_n,
        "n_max": result.n_max,
        "cut_locus_tie": result.cut_locus_tie,
        "total_time": sched.total_time,
        "arcs": arcs,
        "boundary_jumps": {
            "u0": sched.boundary_jumps.u0,
            "uT": sched.boundary_jumps.uT,
        },
        "candidates": candidates,
    }


def schedule_from_json(doc: dict) -> ControlSchedule:
    """Rebuild a schedule from its JSON document.

    Validates structure only (schema tag, field types, alternating controls);
    geometric consistency is the verification oracle's job, so hand-edited
    durations load fine and then fail verification.
    """
    if not isinstance(doc, dict):
        raise ValueError("schedule document must be a JSON object")
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    try:
        bounds = ControlBounds(float(doc["bounds"]["u1"]), float(doc["bounds"]["u2"]))
        gamma = float(doc["gamma"]) if doc.get("gamma") is not None else None
        arcs = []
        for item in doc["arcs"]:
            ctrl = Bang(item["control"])
            arcs.append(
                Arc(
                    ctrl=ctrl,
                    duration=float(item["duration"]),
                    start=Point(*[float(v) for v in item["start"]]),
                    end=Point(*[float(v) for v in item["end"]]),
                    c=float(item["c"]),
                )
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed schedule document: {exc}") from exc
    return ControlSchedule(bounds=bounds, arcs=tuple(arcs), gamma=gamma)


# ---------------------------------------------------------------------------
# subcommands


def _times_rows(cfg: RunConfig, gammas: np.ndarray) -> list[dict]:
    rows: list[dict] = []
    for g in gammas:
        g = float(g)
        n_hi = cfg.n_max_override
        if n_hi is None:
            n_hi = max_turns(g, cfg.bounds)
        t0, _ = time_one_switch(g, cfg.bounds)
        rows.append({"gamma": g, "n": 0, "feasible": True, "s": None, "T": t0})
        for n in range(1, n_hi + 1):
            try:
                s = solve_turn_ratio(g, cfg.bounds, n, tol=cfg.ratio_tol)
                t_n, _, _ = time_n_turns(g, cfg.bounds, n, s=s)
                rows.append({"gamma": g, "n": n, "feasible": True, "s": s, "T": t_n})
            except NoSolution:
                rows.append({"gamma": g, "n": n, "feasible": False, "s": None, "T": None})
    return rows


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write("gamma,n,feasible,s,T\n")
    for r in rows:
        s = "" if r["s"] is None else _fmt(r["s"])
        t = "" if r["T"] is None else _fmt(r["T"])
        buf.write(f"{_fmt(r['gamma'])},{r['n']},{str(r['feasible']).lower()},{s},{t}\n")
    return buf.getvalue()


def cmd_times(cfg: RunConfig, argv: list[str]) -> int:
    if cfg.gamma_range is not None:
        gammas = _grid(cfg.gamma_range)
    elif cfg.gammas:
        gammas = np.array(cfg.gammas)
    else:
        raise ConfigError("times needs --gamma or --gamma-range")
    rows = _times_rows(cfg, gammas)
    if cfg.output_format == "json":
        payload = json.dumps({"schema": SCHEMA, "rows": rows}, indent=2) + "\n"
    else:
        payload = _rows_to_csv(rows)
    _emit(cfg, payload, argv)
    return EXIT_OK


def cmd_synthesize(cfg: RunConfig, argv: list[str]) -> int:
    if len(cfg.gammas) != 1 or cfg.gamma_range is not None:
        raise ConfigError("synthesize needs exactly one --gamma")
    gamma = cfg.gammas[0]
    try:
        result = synthesize(gamma, cfg.bounds, n_max_override=cfg.n_max_override)
    except NoSolution as exc:  # pragma: no cover - n = 0 is always feasible
        print(f"bbcool: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    doc = schedule_to_json(result)
    payload = json.dumps(doc, indent=2) + "\n"
    _emit(cfg, payload, argv)
    sched = result.schedule
    print(
        f"gamma = {gamma:g}: optimal n = {result.optimal_n} "
        f"({sched.n_switchings} switchings, structure {sched.structure()}), "
        f"T = {sched.total_time:.12g}",
        file=sys.stderr,
    )
    for n in sorted(result.candidates):
        cand = result.candidates[n]
        if cand.feasible:
            print(f"  n = {n}: T = {cand.T:.12g}", file=sys.stderr)
        else:
            print(f"  n = {n}: infeasible", file=sys.stderr)
    return EXIT_OK


def _polyline_csv(points: np.ndarray) -> str:
    buf = io.StringIO()
    buf.write("x1,x2\n")
    for x1, x2 in points:
        buf.write(f"{_fmt(float(x1))},{_fmt(float(x2))}\n")
    return buf.getvalue()


def cmd_curves(cfg: RunConfig, argv: list[str]) -> int:
    if cfg.gamma_range is None:
        raise ConfigError("curves needs --gamma-range for the target sweep")
    if cfg.output_path is None:
        raise ConfigError("curves needs --output DIRECTORY")
    out_dir = cfg.output_path
    out_dir.mkdir(parents=True, exist_ok=True)
    grid = _grid(cfg.gamma_range)
    resolution = cfg.gamma_range[2]
    curves = switching_curves(cfg.bounds, grid, resolution=max(resolution, 2))
    for curve in curves:
        _write_with_meta(out_dir / f"curve_{curve.label}.csv", _polyline_csv(curve.points), argv)
    for i, g in enumerate(cfg.gammas):
        result = synthesize(g, cfg.bounds, n_max_override=cfg.n_max_override)
        samples = sample_trajectory(result.schedule, n_samples=max(resolution, 2))
        buf = io.StringIO()
        buf.write("t,x1,x2,u\n")
        for t, x1, x2, u in samples:
            buf.write(f"{_fmt(float(t))},{_fmt(float(x1))},{_fmt(float(x2))},{_fmt(float(u))}\n")
        name = f"trajectory_{i:02d}_gamma_{g:.6g}.csv"
        _write_with_meta(out_dir / name, buf.getvalue(), argv)
    print(f"wrote {len(curves)} curve file(s) and {len(cfg.gammas)} trajectory file(s) to {out_dir}",
          file=sys.stderr)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, argv: list[str], schedule_file: str | None) -> int:
    if schedule_file is not None:
        try:
            doc = json.loads(Path(schedule_file).read_text(encoding="utf-8"))
            schedule = schedule_from_json(doc)
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            print(f"bbcool: cannot load schedule: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        if len(cfg.gammas) != 1:
            raise ConfigError("verify needs a schedule file or exactly one --gamma")
        schedule = synthesize(cfg.gammas[0], cfg.bounds, n_max_override=cfg.n_max_override).schedule
    if schedule.n_switchings < 1:
        print("bbcool: schedule has no switchings; nothing to certify", file=sys.stderr)
        return EXIT_USAGE

    tolerances = VerifyTolerances(endpoint=cfg.endpoint_tol)
    report = pmp_check(schedule, step=cfg.step)
    erk = ermakov_check(schedule, step=cfg.step, tol=tolerances.endpoint)
    ok = tolerances.passes(report) and erk.passed
    doc = {
        "schema": SCHEMA,
        "passed": ok,
        "endpoint_error": report.endpoint_error,
        "max_abs_H": report.max_abs_H,
        "switch_alignment": list(report.switch_alignment),
        "phi_sign_violations": report.phi_sign_violations,
        "lambda1_x2_at_switches": list(report.lambda1_x2_at_switches),
        "lambda2_at_switches": list(report.lambda2_at_switches),
        "ermakov": {
            "passed": erk.passed,
            "x1_residual": erk.x1_residual,
            "x2_residual": erk.x2_residual,
        },
        "tolerances": {
            "endpoint": tolerances.endpoint,
            "hamiltonian": tolerances.hamiltonian,
            "lambda2_at_switch": tolerances.lambda2_at_switch,
            "lambda1_x2": tolerances.lambda1_x2,
            "alignment": tolerances.alignment,
        },
    }
    payload = json.dumps(doc, indent=2) + "\n"
    _emit(cfg, payload, argv)
    if cfg.output_path is not None:
        print(f"verification {'passed' if ok else 'FAILED'}", file=sys.stderr)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbcool",
        description="Time-optimal bang-bang schedules for harmonic-trap relaxation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--u1", type=float, required=True, help="magnitude of the lower bang (>= 1)")
        p.add_argument("--u2", type=float, required=True, help="upper bang (>= 1)")
        p.add_argument("--gamma", type=str, default=None,
                       help="target scale factor(s) > 1, comma separated")
        p.add_argument("--gamma-range", type=str, default=None,
                       help="target sweep lo:hi:count (inclusive endpoints)")
        p.add_argument("--n-max", type=int, default=None, help="override the turn-count bound")
        p.add_argument("--tol", type=float, default=None,
                       help="ratio-equation residual tolerance, default 1e-13 "
                            "(for verify: endpoint tolerance, default 1e-6)")
        p.add_argument("--step", type=float, default=1e-5, help="RK4 step for verification")
        p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
        p.add_argument("--output", type=str, default=None, help="output file (or directory for curves)")

    p_times = sub.add_parser("times", help="candidate transfer times over a target sweep")
    common(p_times)
    p_synth = sub.add_parser("synthesize", help="optimal schedule for one target")
    common(p_synth)
    p_curves = sub.add_parser("curves", help="switching curves and overlay trajectories")
    common(p_curves)
    p_verify = sub.add_parser("verify", help="verify a schedule against the ODE/adjoint oracle")
    p_verify.add_argument("schedule", nargs="?", default=None, help="schedule JSON file")
    common(p_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    """CLI entry point; returns the process exit code."""
    args_list = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(args_list)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _config_from_args(args)
        if args.command == "times":
            return cmd_times(cfg, args_list)
        if args.command == "synthesize":
            return cmd_synthesize(cfg, args_list)
        if args.command == "curves":
            return cmd_curves(cfg, args_list)
        if args.command == "verify":
            return cmd_verify(cfg, args_list, args.schedule)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"bbcool: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"bbcool: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
