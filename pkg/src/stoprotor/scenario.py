"""End-to-end scenarios: closed-loop missions driven by the state machine,
and the single-loop versus cascaded controller comparison suite.

A mission couples the flight state machine to the yaw/altitude dynamics.
The state machine selects the controller mode and rotor profile; wing,
center-of-pressure and counterbalance reconfigurations are kinematic sweeps
with configurable durations whose completion feeds the transition guards.
Forward-flight translational dynamics are not modeled; vehicle speed is a
scripted kinematic signal that exists only to drive the speed guard.

Altitude control runs in the altitude-up frame (the plant coordinate grows
with gravity), so the controller sees a positive-gain double integrator;
trace columns keep the plant sign and document it in the header.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from . import statemachine as sm
from .controllers import CascadedGains, CascadeState, PidGains, cascaded_step
from .dynamics import (ConstantAcceleration, ConstantSpeed, ControlInputs,
                       VehicleParams, VehicleState, feedforward, integrate_step)
from .errors import ConfigurationError
from .loopsim import DIVERGENCE_LIMIT, simulate_loop
from .presets import GainPreset, load_preset
from .trace import SimTrace


@dataclass(frozen=True)
class DisturbanceEvent:
    """Constant offset added to one plant input from ``time`` onward."""

    time: float
    channel: str  # "yaw" or "alt"
    magnitude: float

    def __post_init__(self):
        if self.channel not in ("yaw", "alt"):
            raise ConfigurationError(f"unknown disturbance channel {self.channel!r}")


@dataclass(frozen=True)
class MissionTimings:
    """Durations of the scripted geometric actions and speed kinematics."""

    forward_transition_time: float = 4.2    # rotor braking ramp 80 -> 0 [s]
    backward_transition_time: float = 3.8   # rotor ramp 0 -> 80 [s]
    counterbalance_reorient_time: float = 1.0
    wing_flip_time: float = 0.95            # 190 deg sweep
    cop_shift_time: float = 0.5
    cruise_speed: float = 12.0              # scripted cruise plateau [m/s]
    speed_slew: float = 12.0                # scripted accel magnitude [m/s^2]
    cruise_dwell: float = 3.0               # cruise time before easing off [s]

    def __post_init__(self):
        for name, v in vars(self).items():
            if v <= 0.0:
                raise ConfigurationError(f"MissionTimings.{name} must be positive")

    def rotor_rate(self, target: float, current: float) -> float:
        if target > current:
            return sm.HOVER_ROTOR_SPEED / self.backward_transition_time
        return sm.HOVER_ROTOR_SPEED / self.forward_transition_time


@dataclass(frozen=True)
class ScenarioSpec:
    """Everything one mission run depends on.

    ``gain_source`` names a built-in preset, a preset JSON file, or the
    literal string ``"optimizer"`` to tune the yaw and altitude cascades on
    the fly (seeded, hence reproducible).  ``eta_error_factor`` scales the
    plant inertia and mass while feedforward and controllers keep the
    nominal values, emulating a model mismatch.
    """

    name: str = "mission"
    vehicle: VehicleParams = field(default_factory=VehicleParams)
    gain_source: str = "flight"
    dt: float = 1e-3
    duration: float = 24.0
    feedforward_enabled: bool = True
    yaw_setpoint: float = 0.0
    z_setpoint: float = 0.0  # plant frame (positive down)
    script: Tuple[Tuple[float, sm.PilotInputs], ...] = ()
    thresholds: sm.GuardThresholds = field(default_factory=sm.GuardThresholds)
    timings: MissionTimings = field(default_factory=MissionTimings)
    disturbances: Tuple[DisturbanceEvent, ...] = ()
    eta_error_factor: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.duration <= 0.0:
            raise ConfigurationError("duration must be positive")
        if self.eta_error_factor <= 0.0:
            raise ConfigurationError("eta_error_factor must be positive")
        times = [t for t, _ in self.script]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ConfigurationError("script times must be strictly increasing")

    def plant_params(self) -> VehicleParams:
        f = self.eta_error_factor
        if f == 1.0:
            return self.vehicle
        from dataclasses import replace as _replace
        return _replace(self.vehicle, i_body=self.vehicle.i_body * f,
                        m=self.vehicle.m * f)


def build_bidirectional_script(timings: MissionTimings = MissionTimings(),
                               ) -> Tuple[Tuple[Tuple[float, sm.PilotInputs], ...], float]:
    """Timed pilot script for a full out-and-back transition.

    Returns the script and a recommended duration.  Times are derived from
    the configured action durations with margins, so the hand-back command
    arrives after the vehicle has already slowed below the speed gate.
    """
    t_arm = 0.5
    t_up = 1.0
    t_forward = t_up + timings.backward_transition_time + 1.2
    t_back = (t_forward + timings.counterbalance_reorient_time
              + timings.forward_transition_time
              + timings.counterbalance_reorient_time + timings.cruise_dwell + 1.5)
    duration = t_back + timings.counterbalance_reorient_time \
        + timings.backward_transition_time + 2.0
    script = (
        (t_arm, sm.PilotInputs(arm=True)),
        (t_up, sm.PilotInputs(arm=True, state_command=1)),
        (t_forward, sm.PilotInputs(arm=True, state_command=2)),
        (t_back, sm.PilotInputs(arm=True, state_command=1)),
    )
    return script, duration


def default_mission_spec(name: str = "bidirectional") -> ScenarioSpec:
    timings = MissionTimings()
    script, duration = build_bidirectional_script(timings)
    return ScenarioSpec(name=name, script=script, duration=duration, timings=timings)


MISSION_COLUMNS = [
    "t", "state", "controller_mode", "wing_direction", "cop_position",
    "counterbalance", "latch", "yaw", "yaw_rate", "z", "v_z", "rotor_angle",
    "rotor_speed", "rotor_target", "vehicle_speed", "yaw_setpoint",
    "z_setpoint", "yaw_error", "alt_error", "u_yaw", "u_alt", "tau_u", "f_u",
    "d_yaw", "d_alt",
]

_AIRBORNE = {
    sm.FlightState.VTOL, sm.FlightState.DECELERATION_PREPARATION,
    sm.FlightState.ROTOR_DECELERATION, sm.FlightState.FORWARD_FLIGHT_INITIATION,
    sm.FlightState.FORWARD_FLIGHT, sm.FlightState.VTOL_INITIATION,
    sm.FlightState.ROTOR_ACCELERATION,
}

_CB_EDGE = {
    (sm.CounterbalanceMode.MINUS_Z_OPPOSITE, sm.CounterbalanceMode.PLUS_Z_OPPOSITE):
        sm.ConfigCommand.R1,
    (sm.CounterbalanceMode.PLUS_Z_OPPOSITE, sm.CounterbalanceMode.FORWARD):
        sm.ConfigCommand.R2,
    (sm.CounterbalanceMode.FORWARD, sm.CounterbalanceMode.MINUS_Z_OPPOSITE):
        sm.ConfigCommand.R3,
}


class _SweepAxis:
    """Linear progress toward a commanded discrete pose."""

    __slots__ = ("value", "target", "duration")

    def __init__(self, duration: float, initial):
        self.value = 1.0    # 0 = just commanded, 1 = at target pose
        self.target = initial
        self.duration = duration

    def command(self, target) -> None:
        if target is not None and target != self.target:
            self.target = target
            self.value = 0.0

    def advance(self, dt: float) -> bool:
        """Returns True when the sweep just completed."""
        if self.value >= 1.0:
            return False
        self.value = min(1.0, self.value + dt / self.duration)
        return self.value >= 1.0


def _yaw_gains(preset: GainPreset, mode: sm.ControllerMode) -> CascadedGains:
    if mode is sm.ControllerMode.MC:
        return preset.cascade("mc", "yaw")
    return preset.cascade("fwc", "yaw")


def _optimized_preset(spec: ScenarioSpec) -> GainPreset:
    """Tune the yaw and altitude cascades for this vehicle and wrap them as
    a preset (same loops reused for the fixed-wing mode)."""
    from .gainopt import OptProblem, optimize
    from .stability import PlantEta

    def tuned(eta: float) -> dict:
        result = optimize(OptProblem(architecture="cascaded", eta=PlantEta(eta)),
                          seed=spec.seed, restarts=4, maxfev_per_start=400,
                          polish=1)
        kp1, ki1, kp2, ki2, kd2 = result.gains
        return {"outer": PidGains(kp1, ki1, 0.0), "inner": PidGains(kp2, ki2, kd2)}

    yaw = tuned(spec.vehicle.i_body)
    alt = tuned(spec.vehicle.m)
    return GainPreset(
        name="optimizer",
        mc={"yaw": yaw["outer"], "yaw_rate": yaw["inner"],
            "z_pos": alt["outer"], "z_vel": alt["inner"]},
        fwc={"yaw": yaw["outer"], "yaw_rate": yaw["inner"]})


def _resolve_gains(spec: ScenarioSpec) -> GainPreset:
    if spec.gain_source == "optimizer":
        return _optimized_preset(spec)
    return load_preset(spec.gain_source)


def run_mission(spec: ScenarioSpec) -> SimTrace:
    """Closed-loop mission simulation.

    The state machine runs at the controller rate; transitions take effect
    on the following tick.  Reconfiguration sweeps start when the commanded
    pose changes and flip the discrete configuration when they complete.
    Divergence truncates the trace and sets a flag.
    """
    preset = _resolve_gains(spec)
    plant = spec.plant_params()
    dt = spec.dt
    trace = SimTrace(columns=list(MISSION_COLUMNS), meta={
        "kind": "mission",
        "name": spec.name,
        "dt [s]": repr(dt),
        "sign": "z grows with gravity; alt_error is altitude-up",
        "units": "t [s]; angles [rad]; rates [rad/s]; z [m]; forces [N]; torques [N m]",
    })

    state = sm.FlightState.DISARMED
    config = sm.VTOL_CONFIGURATION
    commands = sm.commands_for(state, thresholds=spec.thresholds)
    vehicle = VehicleState()
    cb_error = 0.0  # remaining reorientation sweep [rad]
    cb_target: Optional[sm.CounterbalanceMode] = None
    wing = _SweepAxis(spec.timings.wing_flip_time, config.wing_direction)
    cop = _SweepAxis(spec.timings.cop_shift_time, config.cop_position)
    speed = 0.0
    speed_target = 0.0
    ff_entry_time = 0.0
    mode: Optional[sm.ControllerMode] = None
    yaw_loop = CascadeState()
    alt_loop = CascadeState()
    alt_gains = preset.cascade("mc", "z_pos")
    yaw_gains = _yaw_gains(preset, sm.ControllerMode.MC)
    airborne = False
    script_idx = 0
    inputs = sm.PilotInputs()

    n = int(round(spec.duration / dt))
    for k in range(n + 1):
        t = k * dt
        while script_idx < len(spec.script) and spec.script[script_idx][0] <= t:
            inputs = spec.script[script_idx][1]
            script_idx += 1

        # --- scripted vehicle speed (guard driver only) ---
        if state in (sm.FlightState.FORWARD_FLIGHT_INITIATION, sm.FlightState.FORWARD_FLIGHT):
            in_cruise = (state is not sm.FlightState.FORWARD_FLIGHT
                         or (t - ff_entry_time) < spec.timings.cruise_dwell)
            speed_target = spec.timings.cruise_speed if in_cruise else 0.0
        else:
            speed_target = 0.0
        delta = speed_target - speed
        max_step = spec.timings.speed_slew * dt
        speed += max(-max_step, min(max_step, delta))

        commands = sm.commands_for(state, vehicle_speed=speed,
                                   thresholds=spec.thresholds)

        # --- actuator kinematics driven by the commands in force ---
        if commands.counterbalance_command is not None \
                and commands.counterbalance_command is not config.counterbalance \
                and commands.counterbalance_command is not cb_target:
            cb_target = commands.counterbalance_command
            cb_error = math.pi  # normalized full reorientation sweep
        if cb_target is not None:
            cb_error = max(0.0, cb_error - math.pi * dt / spec.timings.counterbalance_reorient_time)
            if cb_error < spec.thresholds.counterbalance:
                # within servo tolerance: the pods count as reoriented
                edge = _CB_EDGE.get((config.counterbalance, cb_target))
                if edge is not None:
                    config = sm.configuration_transition(config, edge)
                cb_target = None
                cb_error = 0.0
        wing.command(commands.wing_command)
        if wing.advance(dt):
            config = sm.configuration_transition(
                config, sm.ConfigCommand.FLIP_TO_SAME
                if wing.target is sm.WingDirection.SAME else sm.ConfigCommand.FLIP_TO_OPPOSITE)
        cop.command(commands.cop_command)
        if cop.advance(dt):
            config = sm.configuration_transition(
                config, sm.ConfigCommand.SHIFT_AFT
                if cop.target is sm.CopPosition.AFT else sm.ConfigCommand.SHIFT_FORWARD)

        # --- rotor profile for this tick ---
        target_speed = commands.rotor_target_speed
        omega = vehicle.omega_rotor
        rate = spec.timings.rotor_rate(target_speed, omega)
        if abs(target_speed - omega) <= rate * dt:
            profile = ConstantSpeed(target_speed)
        elif target_speed > omega:
            profile = ConstantAcceleration(rate, omega, t0=t, clamp_at_zero=False)
        else:
            profile = ConstantAcceleration(-rate, omega, t0=t, clamp_at_zero=True)
        rotor_accel = profile.accel(t)

        # --- controllers ---
        active_mode = commands.controller_mode
        if active_mode is not mode:
            mode = active_mode
            yaw_loop.reset()
            alt_loop.reset()
            if mode is not None:
                yaw_gains = _yaw_gains(preset, mode)
        d = feedforward(spec.vehicle, omega, rotor_accel)
        if airborne and commands.motors_enabled and mode is not None:
            u_yaw = cascaded_step(yaw_loop, yaw_gains, spec.yaw_setpoint,
                                  vehicle.alpha_body, vehicle.omega_body, dt)
            u_alt = cascaded_step(alt_loop, alt_gains, -spec.z_setpoint,
                                  -vehicle.z, -vehicle.v_z, dt)
            dist_yaw = sum(ev.magnitude for ev in spec.disturbances
                           if ev.channel == "yaw" and t >= ev.time)
            dist_alt = sum(ev.magnitude for ev in spec.disturbances
                           if ev.channel == "alt" and t >= ev.time)
            ff = spec.feedforward_enabled
            tau_u = (d.d_yaw if ff else 0.0) + u_yaw + dist_yaw
            f_u = (d.d_alt if ff else 0.0) + u_alt + dist_alt
        else:
            # grounded, disarmed or killed: nothing is commanded
            u_yaw = 0.0
            u_alt = 0.0
            tau_u = 0.0
            f_u = 0.0

        latch = config.wing_direction is sm.WingDirection.SAME
        trace.append(
            t, state.value,
            active_mode.value if active_mode is not None else "none",
            config.wing_direction.value, config.cop_position.value,
            config.counterbalance.value, 1.0 if latch else 0.0,
            vehicle.alpha_body, vehicle.omega_body, vehicle.z, vehicle.v_z,
            vehicle.alpha_rotor, vehicle.omega_rotor, target_speed, speed,
            spec.yaw_setpoint, spec.z_setpoint,
            spec.yaw_setpoint - vehicle.alpha_body,
            vehicle.z - spec.z_setpoint,  # altitude-up error
            u_yaw, u_alt, tau_u, f_u, d.d_yaw, d.d_alt,
        )
        if max(abs(vehicle.alpha_body), abs(vehicle.omega_body),
               abs(vehicle.z), abs(vehicle.v_z)) > DIVERGENCE_LIMIT:
            trace.flags.append("diverged")
            break
        if k == n:
            break

        # --- plant update (possibly mismatched from the nominal model) ---
        if airborne:
            vehicle = integrate_step(vehicle, plant, profile,
                                     ControlInputs(tau_u=tau_u, f_u=f_u), dt)
        else:
            # grounded: only the rotor turns; the ground reacts everything else
            t1 = t + dt
            vehicle = replace(vehicle, t=t1,
                              alpha_rotor=vehicle.alpha_rotor
                              + 0.5 * (omega + profile.speed(t1)) * dt,
                              omega_rotor=profile.speed(t1))

        # --- state machine (transitions take effect next tick) ---
        guards = sm.GuardSignals(
            rotor_speed=vehicle.omega_rotor,
            rotor_speed_setpoint=target_speed,
            counterbalance_reorient_error=cb_error if cb_target is not None else 0.0,
            vehicle_speed=speed,
            rotor_accel=rotor_accel,
        )
        new_state, _ = sm.step(state, inputs, guards, spec.thresholds)
        if new_state is not state:
            if new_state in _AIRBORNE:
                airborne = True
            if new_state is sm.FlightState.FORWARD_FLIGHT:
                ff_entry_time = t + dt
            state = new_state
    return trace


# --- controller architecture comparison -----------------------------------

COMPARISON_COLUMNS = ["t", "e_step", "u_step", "e_modelerr", "u_modelerr",
                      "e_disturb", "u_disturb"]


@dataclass(frozen=True)
class ComparisonSpec:
    """Scenario knobs for the architecture comparison suite."""

    single: PidGains = PidGains(0.004, 0.010, 0.561)
    cascaded: CascadedGains = field(default_factory=lambda: CascadedGains(
        PidGains(13.100, 0.002, 0.0), PidGains(13.600, 0.036, 1.370e-5)))
    eta: float = 0.0345          # yaw axis inertia by default
    dt: float = 1e-3
    horizon: float = 60.0
    step_amplitude: float = 1.0
    eta_error: float = 1.2       # plant inertia multiplier for the mismatch run
    disturbance_time: float = 1.0
    disturbance_magnitude: float = 1.0

    def __post_init__(self):
        if self.eta <= 0.0 or self.dt <= 0.0 or self.horizon <= 0.0:
            raise ConfigurationError("eta, dt and horizon must be positive")


def run_comparison(spec: ComparisonSpec) -> Tuple[SimTrace, SimTrace]:
    """Step, model-mismatch and load-disturbance runs for both architectures.

    Returns one trace per architecture; columns carry the tracking error
    and command of each run on a shared time base.
    """
    traces = []
    for label, gains in (("single", spec.single), ("cascaded", spec.cascaded)):
        nominal = simulate_loop(gains, spec.eta, dt=spec.dt, horizon=spec.horizon,
                                reference=spec.step_amplitude)
        mismatch = simulate_loop(gains, spec.eta * spec.eta_error, dt=spec.dt,
                                 horizon=spec.horizon, reference=spec.step_amplitude)
        disturbed = simulate_loop(gains, spec.eta, dt=spec.dt, horizon=spec.horizon,
                                  reference=spec.step_amplitude,
                                  disturbance_time=spec.disturbance_time,
                                  disturbance=spec.disturbance_magnitude)
        n = min(len(nominal.t), len(mismatch.t), len(disturbed.t))
        trace = SimTrace(columns=list(COMPARISON_COLUMNS), meta={
            "kind": "comparison",
            "architecture": label,
            "eta [kg m^2]": repr(spec.eta),
            "dt [s]": repr(spec.dt),
        })
        for i in range(n):
            trace.append(float(nominal.t[i]), float(nominal.e[i]), float(nominal.u[i]),
                         float(mismatch.e[i]), float(mismatch.u[i]),
                         float(disturbed.e[i]), float(disturbed.u[i]))
        for resp, tag in ((nominal, "step"), (mismatch, "modelerr"), (disturbed, "disturb")):
            if resp.diverged:
                trace.flags.append(f"diverged:{tag}")
        traces.append(trace)
    return traces[0], traces[1]


def comparison_panels(single: SimTrace, cascaded: SimTrace) -> Dict[str, SimTrace]:
    """Reshape the two architecture traces into the four panel files."""
    panels: Dict[str, SimTrace] = {}
    n = min(len(single), len(cascaded))
    for panel, e_col, u_col in (("step", "e_step", "u_step"),
                                ("modelerr", "e_modelerr", "u_modelerr"),
                                ("disturb", "e_disturb", "u_disturb")):
        out = SimTrace(columns=["t", "e_single", "e_cascaded", "u_single", "u_cascaded"],
                       meta={"kind": "comparison_panel", "panel": panel})
        ts = single.column("t")
        es, us = single.column(e_col), single.column(u_col)
        ec, uc = cascaded.column(e_col), cascaded.column(u_col)
        for i in range(n):
            out.append(ts[i], es[i], ec[i], us[i], uc[i])
        panels[panel] = out
    effort = SimTrace(columns=["t", "u_abs_single", "u_abs_cascaded"],
                      meta={"kind": "comparison_panel", "panel": "effort"})
    ts = single.column("t")
    us, uc = single.column("u_step"), cascaded.column("u_step")
    for i in range(n):
        effort.append(ts[i], abs(us[i]), abs(uc[i]))
    panels["effort"] = effort
    return panels
