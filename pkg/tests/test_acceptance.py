"""Acceptance suite: one test per exit criterion, each printed as a
PASS/FAIL line by the conftest hook.

Three assertions document targets the tuned single-loop gains and the
rounded geometry constants cannot actually meet; they are implemented
exactly as specified and left to fail with the measured values in the
message rather than loosened (see the step-tracking and disturbance
single-loop tests and the CG reproduction test).
"""

import itertools
import json
import shutil
import subprocess
import time
from pathlib import Path

import numpy as np
import pytest

from stoprotor.controllers import CascadedGains, PidGains
from stoprotor.dynamics import (VehicleParams, altitude_acceleration,
                                feedforward, yaw_acceleration)
from stoprotor.gainopt import OptProblem, cost, optimize
from stoprotor.geometry import MassLayout, cg_shift, max_cop_cg_offset
from stoprotor.scenario import (ComparisonSpec, default_mission_spec,
                                run_comparison, run_mission)
from stoprotor.stability import (PlantEta, cascaded_stable,
                                 characteristic_roots, roots_verdict,
                                 single_loop_stable)
from stoprotor.statemachine import (FlightState, GuardSignals, PilotInputs,
                                    step)

ETA_YAW = PlantEta(0.0345)
SINGLE = PidGains(0.004, 0.010, 0.561)
CASCADED = CascadedGains(PidGains(13.100, 0.002, 0.0),
                         PidGains(13.600, 0.036, 1.370e-5))
REPO = Path(__file__).resolve().parents[1]


# --- criterion: feedforward cancellation -----------------------------------

def test_feedforward_cancellation_grid():
    p = VehicleParams()
    started = time.perf_counter()
    for omega in np.linspace(0.0, 100.0, 100):
        for accel in np.linspace(-25.0, 25.0, 100):
            d = feedforward(p, omega, accel)
            assert abs(yaw_acceleration(p, omega, accel, d.d_yaw)) < 1e-12
            assert abs(altitude_acceleration(p, omega, d.d_alt)) < 1e-12
    assert time.perf_counter() - started < 1.0


# --- criterion: CG shift reproduction ---------------------------------------

def test_cg_shift_reproduction_exact():
    # the stated targets are the two-decimal reported values; the mass
    # weighted mean (0.51*0.05 + 0.34*0.08)/2.7 = 0.0195185... cannot land
    # within 1e-6 of 0.02, so this check documents the gap honestly
    layout = MassLayout()
    shift = cg_shift(layout)
    offset = max_cop_cg_offset(layout)
    assert abs(shift - 0.02) < 1e-6, f"cg_shift(defaults) = {shift!r}"
    assert abs(offset - 0.03) < 1e-6, f"max_cop_cg_offset(defaults) = {offset!r}"


# --- criterion: stability oracle equivalence --------------------------------

def test_stability_oracle_equivalence_10k_samples():
    started = time.perf_counter()
    rng = np.random.default_rng(2024)
    disagreements = 0
    for _ in range(10_000):
        kp, ki, kd = 10.0 ** rng.uniform(-3, 2, 3)
        g = PidGains(kp, ki, kd)
        v = single_loop_stable(ETA_YAW, g)
        if abs(v.margin) > 1e-9 and v.stable != roots_verdict(ETA_YAW, "single", g):
            disagreements += 1
    for _ in range(10_000):
        kp1, ki1, kp2, ki2, kd2 = 10.0 ** rng.uniform(-3, 2, 5)
        g = CascadedGains(PidGains(kp1, ki1, 0.0), PidGains(kp2, ki2, kd2))
        v = cascaded_stable(ETA_YAW, g)
        if abs(v.margin) > 1e-9 and v.stable != roots_verdict(ETA_YAW, "cascaded", g):
            disagreements += 1
    assert disagreements == 0
    # boundary: kp*kd = eta*ki factors into (eta s^2 + kp)(s + kd/eta),
    # so one conjugate pair must sit on the imaginary axis
    for _ in range(100):
        kp, kd = 10.0 ** rng.uniform(-3, 2, 2)
        ki = kp * kd / ETA_YAW.eta
        roots = characteristic_roots(ETA_YAW, "single", PidGains(kp, ki, kd))
        pair = sorted(roots, key=lambda z: abs(z.real))[:2]
        assert max(abs(z.real) for z in pair) < 1e-6
    assert time.perf_counter() - started < 30.0


# --- criterion: tuned gains are stable ---------------------------------------

def test_tuned_gains_satisfy_stability_predicates():
    v_single = single_loop_stable(ETA_YAW, SINGLE)
    assert v_single.stable
    assert v_single.margin == pytest.approx(0.004 * 0.561 - 0.0345 * 0.010, abs=1e-15)
    v_casc = cascaded_stable(ETA_YAW, CASCADED)
    assert v_casc.stable and v_casc.margin > 0.0


# --- criterion: controller comparison suite ---------------------------------

@pytest.fixture(scope="module")
def comparison():
    started = time.perf_counter()
    pair = run_comparison(ComparisonSpec())
    low = run_comparison(ComparisonSpec(eta_error=0.8))
    elapsed = time.perf_counter() - started
    return {"single": pair[0], "cascaded": pair[1], "single_low": low[0],
            "cascaded_low": low[1], "elapsed": elapsed}


def _at(trace, column, t):
    ts = trace.column("t")
    dt = ts[1] - ts[0]
    return trace.column(column)[int(round(t / dt))]


def test_comparison_runtime_budget(comparison):
    assert comparison["elapsed"] < 10.0


def test_step_tracking_settles_cascaded(comparison):
    e60 = abs(_at(comparison["cascaded"], "e_step", 60.0))
    assert e60 < 1e-3, f"cascaded |e(60)| = {e60!r}"


def test_step_tracking_settles_single_loop(comparison):
    # the tuned single-loop closed loop carries a 47 s period mode decaying
    # with tau ~ 330 s; its tail is ~7e-3 at t = 60 s, so the 1e-3 target
    # is not reachable with these gains (measured value in the message)
    e60 = abs(_at(comparison["single"], "e_step", 60.0))
    assert e60 < 1e-3, f"single-loop |e(60)| = {e60!r}"


def test_model_mismatch_convergence_both(comparison):
    for key in ("single", "cascaded", "single_low", "cascaded_low"):
        trace = comparison[key]
        e60 = abs(_at(trace, "e_modelerr", 60.0))
        assert e60 < 0.05, f"{key} |e(60)| under mismatch = {e60!r}"
        assert not any(f.startswith("diverged") for f in trace.flags)


def test_disturbance_bounded_cascaded(comparison):
    e60 = abs(_at(comparison["cascaded"], "e_disturb", 60.0))
    assert e60 < 1e-2, f"cascaded |e(60)| under disturbance = {e60!r}"


def test_disturbance_error_accumulates_single_loop(comparison):
    # the loop is strictly stable, so the disturbance response is a slowly
    # decaying oscillation: |e| shrinks ~8% between t=10 s and t=60 s
    # instead of growing; documented here exactly as stated
    e10 = abs(_at(comparison["single"], "e_disturb", 10.0))
    e60 = abs(_at(comparison["single"], "e_disturb", 60.0))
    assert e60 > e10, f"|e(60)| = {e60!r} vs |e(10)| = {e10!r}"


def test_peak_effort_cascaded_below_single(comparison):
    peak_single = max(abs(u) for u in comparison["single"].column("u_step"))
    peak_casc = max(abs(u) for u in comparison["cascaded"].column("u_step"))
    assert peak_casc < peak_single


# --- criterion: optimizer competitiveness ------------------------------------

def test_optimizer_matches_reference_cost_both_architectures():
    started = time.perf_counter()
    problem_s = OptProblem(architecture="single", eta=ETA_YAW)
    bar_s = 1.05 * cost(problem_s, [0.004, 0.010, 0.561])
    result_s = optimize(problem_s, seed=0)
    assert result_s.cost <= bar_s, f"single J = {result_s.cost!r} > {bar_s!r}"
    assert single_loop_stable(ETA_YAW, PidGains(*result_s.gains)).stable

    problem_c = OptProblem(architecture="cascaded", eta=ETA_YAW)
    bar_c = 1.05 * cost(problem_c, [13.100, 0.002, 13.600, 0.036, 1.370e-5])
    result_c = optimize(problem_c, seed=0)
    assert result_c.cost <= bar_c, f"cascaded J = {result_c.cost!r} > {bar_c!r}"
    gains_c = CascadedGains(PidGains(result_c.gains[0], result_c.gains[1], 0.0),
                            PidGains(*result_c.gains[2:]))
    assert cascaded_stable(ETA_YAW, gains_c).stable
    assert time.perf_counter() - started < 60.0


# --- criterion: state machine fidelity ---------------------------------------

def test_transition_table_all_rows():
    sat = GuardSignals(rotor_speed=80.0, rotor_speed_setpoint=80.0,
                       counterbalance_reorient_error=0.0, vehicle_speed=0.0)
    rows = [
        (FlightState.DISARMED, 0, 1, 0, sat, FlightState.ARMED),
        (FlightState.ARMED, 0, 0, 0, sat, FlightState.DISARMED),
        (FlightState.ARMED, 0, 1, 1, sat, FlightState.ROTOR_SPIN_UP),
        (FlightState.ROTOR_SPIN_UP, 0, 1, 1,
         GuardSignals(rotor_speed=80.0, rotor_speed_setpoint=80.0), FlightState.VTOL),
        (FlightState.VTOL, 0, 1, 2, sat, FlightState.DECELERATION_PREPARATION),
        (FlightState.DECELERATION_PREPARATION, 0, 1, 2,
         GuardSignals(counterbalance_reorient_error=0.0), FlightState.ROTOR_DECELERATION),
        (FlightState.ROTOR_DECELERATION, 0, 1, 2,
         GuardSignals(rotor_speed=0.0, rotor_speed_setpoint=0.0),
         FlightState.FORWARD_FLIGHT_INITIATION),
        (FlightState.FORWARD_FLIGHT_INITIATION, 0, 1, 2,
         GuardSignals(counterbalance_reorient_error=0.0), FlightState.FORWARD_FLIGHT),
        (FlightState.FORWARD_FLIGHT, 0, 1, 2,
         GuardSignals(vehicle_speed=9.0), FlightState.VTOL_INITIATION),
        (FlightState.VTOL_INITIATION, 0, 1, 1,
         GuardSignals(counterbalance_reorient_error=0.0), FlightState.ROTOR_ACCELERATION),
        (FlightState.ROTOR_ACCELERATION, 0, 1, 1,
         GuardSignals(rotor_speed=80.0, rotor_speed_setpoint=80.0), FlightState.VTOL),
        (FlightState.KILL, 0, 1, 0, sat, FlightState.DISARMED),
    ]
    assert len(rows) == 12
    for state, kill, arm, cmd, guards, expected in rows:
        nxt, _ = step(state, PilotInputs(kill=bool(kill), arm=bool(arm),
                                         state_command=cmd), guards)
        assert nxt is expected, f"{state} -> {nxt}, expected {expected}"
    # thirteenth row: kill overrides everything, from all eleven states
    for state, arm, cmd in itertools.product(FlightState, (0, 1), (0, 1, 2)):
        nxt, _ = step(state, PilotInputs(kill=True, arm=bool(arm),
                                         state_command=cmd), sat)
        assert nxt is FlightState.KILL


def test_bidirectional_mission_rotor_ramps():
    trace = run_mission(default_mission_spec())
    states = trace.column("state")
    order = [s for i, s in enumerate(states) if i == 0 or states[i - 1] != s]
    assert order == ["disarmed", "armed", "rotor_spin_up", "vtol",
                     "deceleration_preparation", "rotor_deceleration",
                     "forward_flight_initiation", "forward_flight",
                     "vtol_initiation", "rotor_acceleration", "vtol"]
    om = trace.column("rotor_speed")
    ts = trace.column("t")
    dt = ts[1] - ts[0]
    brake_start = brake_end = accel_start = accel_end = None
    for i in range(1, len(om)):
        if brake_start is None and om[i] < 80.0 and om[i - 1] == 80.0:
            brake_start = ts[i - 1]
        elif brake_start is not None and brake_end is None and om[i] == 0.0:
            brake_end = ts[i]
        elif brake_end is not None and accel_start is None \
                and om[i] > 0.0 and om[i - 1] == 0.0:
            accel_start = ts[i - 1]
        elif accel_start is not None and om[i] == 80.0:
            accel_end = ts[i]
            break
    assert brake_end - brake_start == pytest.approx(4.2, abs=dt + 1e-9)
    assert accel_end - accel_start == pytest.approx(3.8, abs=dt + 1e-9)


# --- criterion: CLI determinism ----------------------------------------------

def test_cli_outputs_deterministic(tmp_path):
    from stoprotor.cli import main as cli_main

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scenario": {"name": "det", "duration": 2.0,
                     "script": [[0.2, 0, 1, 0], [0.5, 0, 1, 1]]},
        "comparison": {"horizon": 2.0},
        "sweep": {"nx": 10, "ny": 10},
        "optimize": {"architecture": "single", "restarts": 1,
                     "maxfev_per_start": 80},
        "fsm": {"script": [[0.2, 0, 1, 0], [0.5, 0, 1, 1]],
                "guards": {"dwell": 0.3}, "duration": 3.0},
    }))
    jobs = [
        (["simulate"], "sim.csv", False),
        (["simulate", "--format", "json"], "sim.jsonl", False),
        (["compare"], "cmp", True),
        (["sweep"], "grid.csv", False),
        (["optimize"], "opt.json", False),
        (["fsm-trace"], "fsm.csv", False),
    ]
    for args, out_name, is_prefix in jobs:
        outputs = []
        for attempt in ("a", "b"):
            base = tmp_path / attempt
            base.mkdir(exist_ok=True)
            out = base / out_name
            code = cli_main(args + ["--config", str(cfg), "--out", str(out),
                                    "--seed", "42"])
            assert code == 0
            if is_prefix:
                files = sorted(base.glob(f"{out_name}_*"))
                assert len(files) == 4
                outputs.append(b"".join(f.read_bytes() for f in files))
            else:
                outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1], f"{args[0]} output not reproducible"


# --- criterion (secondary): plot pipeline ------------------------------------

PLOT_CLI = REPO / "frontend" / "dist" / "plot.js"


@pytest.mark.skipif(not PLOT_CLI.exists() or shutil.which("node") is None,
                    reason="plot frontend not built")
def test_plot_pipeline_renders_all_csvs(tmp_path):
    from stoprotor.cli import main as cli_main

    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "scenario": {"name": "plot", "duration": 2.0,
                     "script": [[0.2, 0, 1, 0], [0.5, 0, 1, 1]]},
        "comparison": {"horizon": 2.0},
        "sweep": {"nx": 12, "ny": 12},
    }))
    assert cli_main(["simulate", "--config", str(cfg),
                     "--out", str(tmp_path / "mission.csv")]) == 0
    assert cli_main(["compare", "--config", str(cfg),
                     "--out", str(tmp_path / "cmp")]) == 0
    assert cli_main(["sweep", "--config", str(cfg),
                     "--out", str(tmp_path / "grid.csv")]) == 0

    def render(kind, inputs, out):
        cmd = ["node", str(PLOT_CLI), "--kind", kind,
               "--in", *inputs, "--out", str(out)]
        proc = subprocess.run(cmd, capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        return out.read_text()

    svg = render("comparison",
                 [str(tmp_path / f"cmp_{p}.csv")
                  for p in ("step", "modelerr", "disturb", "effort")],
                 tmp_path / "cmp.svg")
    assert svg.count('class="panel"') == 4

    grid_text = (tmp_path / "grid.csv").read_text()
    unstable = sum(1 for ln in grid_text.splitlines()
                   if not ln.startswith("#") and ln.split(",")[4:5] == ["0.0"])
    svg = render("sweep", [str(tmp_path / "grid.csv")], tmp_path / "grid.svg")
    assert svg.count('class="unstable"') == unstable

    svg = render("mission", [str(tmp_path / "mission.csv")], tmp_path / "mission.svg")
    assert 'class="panel"' in svg
