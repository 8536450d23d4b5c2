"""Command-line surface: simulate, compare, sweep, optimize, fsm-trace.

Every subcommand takes ``--config`` (JSON), ``--out``, ``--format`` and
``--seed`` and writes deterministic files: identical config and seed give
byte-identical output.  Exit codes: 0 success, 2 configuration error,
3 divergence detected.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import scenario as sc
from . import statemachine as sm
from .controllers import CascadedGains, PidGains
from .errors import ConfigurationError, InvalidStateError, TransitionError
from .gainopt import OptProblem, optimize
from .stability import PlantEta, SweepSpec, sweep
from .trace import SimTrace, export_trace


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigurationError("config root must be a JSON object")
    return data


def _pid_from_cfg(d: dict) -> PidGains:
    return PidGains(kp=float(d.get("kp", 0.0)), ki=float(d.get("ki", 0.0)),
                    kd=float(d.get("kd", 0.0)))


def _cascade_from_cfg(d: dict) -> CascadedGains:
    return CascadedGains(
        outer=PidGains(kp=float(d.get("kp1", 0.0)), ki=float(d.get("ki1", 0.0)), kd=0.0),
        inner=PidGains(kp=float(d.get("kp2", 0.0)), ki=float(d.get("ki2", 0.0)),
                       kd=float(d.get("kd2", 0.0))))


def _script_from_cfg(rows) -> tuple:
    script = []
    for row in rows:
        t, kill, arm, cmd = row
        script.append((float(t), sm.PilotInputs(kill=bool(kill), arm=bool(arm),
                                                state_command=int(cmd))))
    return tuple(script)


def _scenario_from_cfg(cfg: dict) -> sc.ScenarioSpec:
    timings = sc.MissionTimings(**cfg.get("timings", {}))
    thresholds = sm.GuardThresholds(**cfg.get("thresholds", {}))
    script_cfg = cfg.get("script", "bidirectional")
    if script_cfg == "bidirectional":
        script, duration = sc.build_bidirectional_script(timings)
    else:
        script = _script_from_cfg(script_cfg)
        duration = float(cfg.get("duration", 24.0))
    duration = float(cfg.get("duration", duration))
    disturbances = tuple(sc.DisturbanceEvent(time=float(d["time"]), channel=d["channel"],
                                             magnitude=float(d["magnitude"]))
                         for d in cfg.get("disturbances", []))
    return sc.ScenarioSpec(
        name=str(cfg.get("name", "mission")),
        gain_source=str(cfg.get("gains", "flight")),
        dt=float(cfg.get("dt", 1e-3)),
        duration=duration,
        feedforward_enabled=bool(cfg.get("feedforward", True)),
        yaw_setpoint=float(cfg.get("yaw_setpoint", 0.0)),
        z_setpoint=float(cfg.get("z_setpoint", 0.0)),
        script=script,
        thresholds=thresholds,
        timings=timings,
        disturbances=disturbances,
        eta_error_factor=float(cfg.get("eta_error", 1.0)),
        seed=int(cfg.get("seed", 0)),
    )


def _cmd_simulate(args) -> int:
    spec = _scenario_from_cfg(_load_config(args.config).get("scenario", {}))
    trace = sc.run_mission(spec)
    export_trace(trace, args.out, args.format)
    if "diverged" in trace.flags:
        print("simulation diverged; trace truncated", file=sys.stderr)
        return 3
    return 0


def _cmd_compare(args) -> int:
    cfg = _load_config(args.config).get("comparison", {})
    kwargs = {}
    if "single" in cfg:
        kwargs["single"] = _pid_from_cfg(cfg["single"])
    if "cascaded" in cfg:
        kwargs["cascaded"] = _cascade_from_cfg(cfg["cascaded"])
    for key in ("eta", "dt", "horizon", "step_amplitude", "eta_error",
                "disturbance_time", "disturbance_magnitude"):
        if key in cfg:
            kwargs[key] = float(cfg[key])
    spec = sc.ComparisonSpec(**kwargs)
    single, cascaded = sc.run_comparison(spec)
    panels = sc.comparison_panels(single, cascaded)
    ext = "csv" if args.format == "csv" else "jsonl"
    for name in ("step", "modelerr", "disturb", "effort"):
        export_trace(panels[name], f"{args.out}_{name}.{ext}", args.format)
    flagged = [f for t in (single, cascaded) for f in t.flags]
    if flagged:
        print(f"comparison runs diverged: {flagged}", file=sys.stderr)
        return 3
    return 0


def _cmd_sweep(args) -> int:
    cfg = _load_config(args.config).get("sweep", {})
    base = _cascade_from_cfg(cfg["base"]) if "base" in cfg else SweepSpec.__dataclass_fields__["base"].default_factory()
    spec = SweepSpec(
        gain_x=str(cfg.get("gain_x", "kp2")),
        x_lo=float(cfg.get("x_lo", 0.01)), x_hi=float(cfg.get("x_hi", 1.0)),
        gain_y=str(cfg.get("gain_y", "ki2")),
        y_lo=float(cfg.get("y_lo", 0.01)), y_hi=float(cfg.get("y_hi", 1.0)),
        nx=int(cfg.get("nx", 200)), ny=int(cfg.get("ny", 200)),
        base=base)
    eta = PlantEta(float(cfg.get("eta", 0.0345)))
    grid = sweep(eta, spec)
    trace = SimTrace(columns=grid.csv_header(), meta={
        "kind": "sweep",
        "eta [kg m^2]": repr(eta.eta),
        "base": json.dumps({"kp1": spec.base.outer.kp, "ki1": spec.base.outer.ki,
                            "kp2": spec.base.inner.kp, "ki2": spec.base.inner.ki,
                            "kd2": spec.base.inner.kd}, sort_keys=True),
    })
    for row, col, gx, gy, stable, margin in grid.rows():
        trace.append(float(row), float(col), float(gx), float(gy),
                     float(stable), float(margin))
    export_trace(trace, args.out, args.format)
    return 0


def _cmd_optimize(args) -> int:
    cfg = _load_config(args.config).get("optimize", {})
    problem = OptProblem(
        architecture=str(cfg.get("architecture", "single")),
        eta=PlantEta(float(cfg.get("eta", 0.0345))),
        effort_weight=float(cfg.get("effort_weight", 1e-3)),
        horizon=float(cfg.get("horizon", 1.0)),
        dt=float(cfg.get("dt", 1e-3)),
        reference=float(cfg.get("reference", 1.0)),
        bounds=tuple(cfg.get("bounds", (1e-6, 100.0))),
    )
    result = optimize(problem, seed=args.seed,
                      restarts=int(cfg.get("restarts", 8)),
                      maxfev_per_start=int(cfg.get("maxfev_per_start", 400)))
    payload = {
        "architecture": problem.architecture,
        "eta": problem.eta.eta,
        "effort_weight": problem.effort_weight,
        "seed": args.seed,
        "gains": result.gains_dict(problem),
        "cost": result.cost,
        "iterations": result.iterations,
        "converged": result.converged,
        "diverged_evals": result.diverged_evals,
        "history": result.history,
    }
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")
    return 0


def _cmd_fsm_trace(args) -> int:
    cfg = _load_config(args.config).get("fsm", {})
    script = _script_from_cfg(cfg.get("script", [[0.5, 0, 1, 0], [1.0, 0, 1, 1]]))
    guards_cfg = cfg.get("guards", {"dwell": 0.5})
    if "dwell" in guards_cfg:
        source = sm.dwell_guards(float(guards_cfg["dwell"]))
    else:
        schedule = [(float(t), sm.GuardSignals(**signals))
                    for t, signals in guards_cfg["schedule"]]
        source = sm.scripted_guards(schedule)
    thresholds = sm.GuardThresholds(**cfg.get("thresholds", {}))
    records = sm.mission_trace(script, source, dt=float(cfg.get("dt", 1e-3)),
                               duration=float(cfg.get("duration", 30.0)),
                               thresholds=thresholds)
    trace = SimTrace(columns=["t", "state", "controller_mode", "motors_enabled",
                              "rotor_target", "wing_direction", "cop_position",
                              "counterbalance", "wing_command", "cop_command",
                              "counterbalance_command", "latch_expected"],
                     meta={"kind": "fsm"})
    for rec in records:
        c = rec.commands
        cfg_state = rec.configuration
        trace.append(rec.t, rec.state.value,
                     c.controller_mode.value if c.controller_mode else "none",
                     1.0 if c.motors_enabled else 0.0, c.rotor_target_speed,
                     cfg_state.wing_direction.value, cfg_state.cop_position.value,
                     cfg_state.counterbalance.value,
                     c.wing_command.value if c.wing_command else "none",
                     c.cop_command.value if c.cop_command else "none",
                     c.counterbalance_command.value if c.counterbalance_command else "none",
                     1.0 if c.latch_expected else 0.0)
    export_trace(trace, args.out, args.format)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stoprotor",
        description="Stop-rotor transition control simulation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, out_help in (
            ("simulate", _cmd_simulate, "output trace file"),
            ("compare", _cmd_compare, "output file prefix (four panel files)"),
            ("sweep", _cmd_sweep, "output grid file"),
            ("optimize", _cmd_optimize, "output JSON result file"),
            ("fsm-trace", _cmd_fsm_trace, "output transition log file")):
        p = sub.add_parser(name)
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", required=True, help=out_help)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, InvalidStateError, TransitionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
