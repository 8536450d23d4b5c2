"""Eleven-state flight-mode state machine with the geometric configuration
lattice and per-state actuator commands.

The transition table is encoded row-for-row; unmatched input combinations
hold the current state (no spontaneous transitions) and the kill input
dominates everything.  Guards written as "X = 0" in the table are evaluated
as tracking-error magnitudes inside a configurable threshold, because exact
equality never triggers in a sampled simulation:

* rotor-speed guards compare the measured speed against the active
  setpoint (80 rad/s after spin-up or re-acceleration, 0 after braking);
* the counterbalance guard checks that the pod reorientation error has
  settled;
* the vehicle-speed guard for leaving forward flight uses the 10 m/s
  hand-back gate.

Geometric configuration is a discrete lattice: wing direction (leading
edges opposite/same), center-of-pressure position (forward/aft) and
counterbalance orientation (-z opposite, +z opposite, forward).  The
counterbalance moves only along the directed cycle R1 (-z to +z), R2 (+z to
forward), R3 (forward to -z); wing and CoP commands are idempotent
target-state commands.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

from .errors import ConfigurationError, TransitionError

#: Steady rotor speed commanded for hover [rad/s].
HOVER_ROTOR_SPEED = 80.0


class FlightState(Enum):
    DISARMED = "disarmed"
    ARMED = "armed"
    ROTOR_SPIN_UP = "rotor_spin_up"
    VTOL = "vtol"
    DECELERATION_PREPARATION = "deceleration_preparation"
    ROTOR_DECELERATION = "rotor_deceleration"
    FORWARD_FLIGHT_INITIATION = "forward_flight_initiation"
    FORWARD_FLIGHT = "forward_flight"
    VTOL_INITIATION = "vtol_initiation"
    ROTOR_ACCELERATION = "rotor_acceleration"
    KILL = "kill"


class ControllerMode(Enum):
    MC = "mc"                      # multicopter loops
    FWC = "fwc"                    # fixed-wing loops
    HYBRID_MC_FWC = "hybrid"       # blended mode at low cruise speed


class WingDirection(Enum):
    OPPOSITE = "opposite"
    SAME = "same"


class CopPosition(Enum):
    FORWARD = "forward"
    AFT = "aft"


class CounterbalanceMode(Enum):
    MINUS_Z_OPPOSITE = "minus_z_opposite"
    PLUS_Z_OPPOSITE = "plus_z_opposite"
    FORWARD = "forward"


class ConfigCommand(Enum):
    FLIP_TO_SAME = "flip_to_same"
    FLIP_TO_OPPOSITE = "flip_to_opposite"
    SHIFT_FORWARD = "shift_forward"
    SHIFT_AFT = "shift_aft"
    R1 = "r1"
    R2 = "r2"
    R3 = "r3"


@dataclass(frozen=True)
class ConfigurationState:
    wing_direction: WingDirection = WingDirection.OPPOSITE
    cop_position: CopPosition = CopPosition.FORWARD
    counterbalance: CounterbalanceMode = CounterbalanceMode.MINUS_Z_OPPOSITE


#: Configuration required by the hover-family states.
VTOL_CONFIGURATION = ConfigurationState(
    WingDirection.OPPOSITE, CopPosition.FORWARD, CounterbalanceMode.MINUS_Z_OPPOSITE)
#: Configuration required by forward flight.
FORWARD_CONFIGURATION = ConfigurationState(
    WingDirection.SAME, CopPosition.AFT, CounterbalanceMode.FORWARD)

_CB_CYCLE = {
    ConfigCommand.R1: (CounterbalanceMode.MINUS_Z_OPPOSITE, CounterbalanceMode.PLUS_Z_OPPOSITE),
    ConfigCommand.R2: (CounterbalanceMode.PLUS_Z_OPPOSITE, CounterbalanceMode.FORWARD),
    ConfigCommand.R3: (CounterbalanceMode.FORWARD, CounterbalanceMode.MINUS_Z_OPPOSITE),
}


def configuration_transition(current: ConfigurationState,
                             command: ConfigCommand) -> ConfigurationState:
    """Apply one lattice move; reject moves not on the lattice arrows.

    Wing and CoP commands name a target and are accepted as no-ops when the
    target already holds.  Counterbalance commands R1-R3 are directed edges
    of the orientation cycle and are only legal from their source node.
    """
    if command is ConfigCommand.FLIP_TO_SAME:
        return replace(current, wing_direction=WingDirection.SAME)
    if command is ConfigCommand.FLIP_TO_OPPOSITE:
        return replace(current, wing_direction=WingDirection.OPPOSITE)
    if command is ConfigCommand.SHIFT_FORWARD:
        return replace(current, cop_position=CopPosition.FORWARD)
    if command is ConfigCommand.SHIFT_AFT:
        return replace(current, cop_position=CopPosition.AFT)
    if command in _CB_CYCLE:
        source, target = _CB_CYCLE[command]
        if current.counterbalance is not source:
            raise TransitionError(
                f"{command.value} is only legal from {source.value}, "
                f"counterbalance is {current.counterbalance.value}")
        return replace(current, counterbalance=target)
    raise TransitionError(f"unknown configuration command {command!r}")


@dataclass(frozen=True)
class PilotInputs:
    """Radio inputs: kill switch, arm switch and the commanded flight mode
    (0 = null, 1 = hover, 2 = forward flight)."""

    kill: bool = False
    arm: bool = False
    state_command: int = 0

    def __post_init__(self):
        if self.state_command not in (0, 1, 2):
            raise ConfigurationError("state_command must be 0, 1 or 2")


@dataclass(frozen=True)
class GuardSignals:
    """Measurements feeding the transition guards."""

    rotor_speed: float = 0.0                 # [rad/s]
    rotor_speed_setpoint: float = 0.0        # [rad/s]
    counterbalance_reorient_error: float = 0.0  # [rad]
    vehicle_speed: float = 0.0               # [m/s]
    rotor_accel: float = 0.0                 # [rad/s^2]


@dataclass(frozen=True)
class GuardThresholds:
    rotor_speed: float = 0.5        # [rad/s]
    counterbalance: float = 0.05    # [rad]
    vehicle_speed: float = 10.0     # [m/s], forward-flight hand-back gate

    def __post_init__(self):
        for name, v in vars(self).items():
            if v <= 0.0:
                raise ConfigurationError(f"GuardThresholds.{name} must be positive")


DEFAULT_THRESHOLDS = GuardThresholds()


class GuardCondition(Enum):
    NONE = "none"
    ROTOR_SPEED_AT_SETPOINT = "rotor_speed_at_setpoint"
    COUNTERBALANCE_SETTLED = "counterbalance_settled"
    VEHICLE_SPEED_BELOW_GATE = "vehicle_speed_below_gate"
    # rotor-acceleration completion is read as the speed reaching its setpoint
    ROTOR_ACCEL_COMPLETE = "rotor_accel_complete"


def guard_satisfied(condition: GuardCondition, signals: GuardSignals,
                    thresholds: GuardThresholds = DEFAULT_THRESHOLDS) -> bool:
    """Evaluate one guard condition against the current measurements."""
    if condition is GuardCondition.NONE:
        return True
    if condition in (GuardCondition.ROTOR_SPEED_AT_SETPOINT,
                     GuardCondition.ROTOR_ACCEL_COMPLETE):
        return abs(signals.rotor_speed - signals.rotor_speed_setpoint) < thresholds.rotor_speed
    if condition is GuardCondition.COUNTERBALANCE_SETTLED:
        return abs(signals.counterbalance_reorient_error) < thresholds.counterbalance
    if condition is GuardCondition.VEHICLE_SPEED_BELOW_GATE:
        return signals.vehicle_speed < thresholds.vehicle_speed
    raise ConfigurationError(f"unknown guard condition {condition!r}")


# Transition table, one row per (state, arm, command, guard) -> next.
# kill = 1 is handled before the lookup and always wins.
TRANSITION_TABLE: Tuple[Tuple[FlightState, int, int, GuardCondition, FlightState], ...] = (
    (FlightState.DISARMED, 1, 0, GuardCondition.NONE, FlightState.ARMED),
    (FlightState.ARMED, 0, 0, GuardCondition.NONE, FlightState.DISARMED),
    (FlightState.ARMED, 1, 1, GuardCondition.NONE, FlightState.ROTOR_SPIN_UP),
    (FlightState.ROTOR_SPIN_UP, 1, 1, GuardCondition.ROTOR_SPEED_AT_SETPOINT, FlightState.VTOL),
    (FlightState.VTOL, 1, 2, GuardCondition.NONE, FlightState.DECELERATION_PREPARATION),
    (FlightState.DECELERATION_PREPARATION, 1, 2, GuardCondition.COUNTERBALANCE_SETTLED,
     FlightState.ROTOR_DECELERATION),
    (FlightState.ROTOR_DECELERATION, 1, 2, GuardCondition.ROTOR_SPEED_AT_SETPOINT,
     FlightState.FORWARD_FLIGHT_INITIATION),
    (FlightState.FORWARD_FLIGHT_INITIATION, 1, 2, GuardCondition.COUNTERBALANCE_SETTLED,
     FlightState.FORWARD_FLIGHT),
    (FlightState.FORWARD_FLIGHT, 1, 2, GuardCondition.VEHICLE_SPEED_BELOW_GATE,
     FlightState.VTOL_INITIATION),
    (FlightState.VTOL_INITIATION, 1, 1, GuardCondition.COUNTERBALANCE_SETTLED,
     FlightState.ROTOR_ACCELERATION),
    (FlightState.ROTOR_ACCELERATION, 1, 1, GuardCondition.ROTOR_ACCEL_COMPLETE,
     FlightState.VTOL),
    (FlightState.KILL, 1, 0, GuardCondition.NONE, FlightState.DISARMED),
)


@dataclass(frozen=True)
class ActuatorCommands:
    """Commands emitted for the state currently in force."""

    controller_mode: Optional[ControllerMode]
    motors_enabled: bool
    rotor_target_speed: float
    wing_command: Optional[WingDirection]
    cop_command: Optional[CopPosition]
    counterbalance_command: Optional[CounterbalanceMode]
    latch_expected: bool


_IDLE = dict(controller_mode=None, motors_enabled=False, rotor_target_speed=0.0,
             wing_command=None, cop_command=None, counterbalance_command=None)

_STATE_COMMANDS = {
    FlightState.DISARMED: dict(_IDLE),
    FlightState.KILL: dict(_IDLE),
    FlightState.ARMED: dict(controller_mode=ControllerMode.MC, motors_enabled=True,
                            rotor_target_speed=0.0, wing_command=None, cop_command=None,
                            counterbalance_command=None),
    FlightState.ROTOR_SPIN_UP: dict(controller_mode=ControllerMode.MC, motors_enabled=True,
                                    rotor_target_speed=HOVER_ROTOR_SPEED,
                                    wing_command=WingDirection.OPPOSITE,
                                    cop_command=CopPosition.FORWARD,
                                    counterbalance_command=CounterbalanceMode.MINUS_Z_OPPOSITE),
    FlightState.VTOL: dict(controller_mode=ControllerMode.MC, motors_enabled=True,
                           rotor_target_speed=HOVER_ROTOR_SPEED,
                           wing_command=WingDirection.OPPOSITE,
                           cop_command=CopPosition.FORWARD,
                           counterbalance_command=CounterbalanceMode.MINUS_Z_OPPOSITE),
    # counterbalances reverse while the rotor still carries the vehicle
    FlightState.DECELERATION_PREPARATION: dict(controller_mode=ControllerMode.MC,
                                               motors_enabled=True,
                                               rotor_target_speed=HOVER_ROTOR_SPEED,
                                               wing_command=WingDirection.OPPOSITE,
                                               cop_command=CopPosition.FORWARD,
                                               counterbalance_command=CounterbalanceMode.PLUS_Z_OPPOSITE),
    FlightState.ROTOR_DECELERATION: dict(controller_mode=ControllerMode.MC,
                                         motors_enabled=True, rotor_target_speed=0.0,
                                         wing_command=WingDirection.OPPOSITE,
                                         cop_command=CopPosition.FORWARD,
                                         counterbalance_command=CounterbalanceMode.PLUS_Z_OPPOSITE),
    # wing flips forward, CoP shifts aft, pods rotate to thrust forward
    FlightState.FORWARD_FLIGHT_INITIATION: dict(controller_mode=ControllerMode.MC,
                                                motors_enabled=True, rotor_target_speed=0.0,
                                                wing_command=WingDirection.SAME,
                                                cop_command=CopPosition.AFT,
                                                counterbalance_command=CounterbalanceMode.FORWARD),
    FlightState.FORWARD_FLIGHT: dict(controller_mode=ControllerMode.FWC,
                                     motors_enabled=True, rotor_target_speed=0.0,
                                     wing_command=WingDirection.SAME,
                                     cop_command=CopPosition.AFT,
                                     counterbalance_command=CounterbalanceMode.FORWARD),
    FlightState.VTOL_INITIATION: dict(controller_mode=ControllerMode.MC,
                                      motors_enabled=True, rotor_target_speed=0.0,
                                      wing_command=WingDirection.OPPOSITE,
                                      cop_command=CopPosition.FORWARD,
                                      counterbalance_command=CounterbalanceMode.MINUS_Z_OPPOSITE),
    FlightState.ROTOR_ACCELERATION: dict(controller_mode=ControllerMode.MC,
                                         motors_enabled=True,
                                         rotor_target_speed=HOVER_ROTOR_SPEED,
                                         wing_command=WingDirection.OPPOSITE,
                                         cop_command=CopPosition.FORWARD,
                                         counterbalance_command=CounterbalanceMode.MINUS_Z_OPPOSITE),
}


def commands_for(state: FlightState, *, vehicle_speed: float = 0.0,
                 wing_direction: Optional[WingDirection] = None,
                 thresholds: GuardThresholds = DEFAULT_THRESHOLDS) -> ActuatorCommands:
    """Actuator commands for a state.

    The latch expectation follows the actual wing direction when the caller
    tracks one (it engages exactly when the wing sits in the same-side
    pose); otherwise the state's commanded wing pose is used.  Forward
    flight picks the hybrid controller below the speed gate and the pure
    fixed-wing controller above it.
    """
    base = dict(_STATE_COMMANDS[state])
    if state is FlightState.FORWARD_FLIGHT:
        base["controller_mode"] = (ControllerMode.HYBRID_MC_FWC
                                   if vehicle_speed < thresholds.vehicle_speed
                                   else ControllerMode.FWC)
    wing = wing_direction if wing_direction is not None else base["wing_command"]
    return ActuatorCommands(latch_expected=(wing is WingDirection.SAME), **base)


def step(current: FlightState, inputs: PilotInputs, guards: GuardSignals,
         thresholds: GuardThresholds = DEFAULT_THRESHOLDS) -> Tuple[FlightState, ActuatorCommands]:
    """Advance the state machine one tick.

    Kill always wins; otherwise the first table row matching the inputs and
    whose guard is satisfied fires.  No matching row holds the state.
    """
    if inputs.kill:
        nxt = FlightState.KILL
    else:
        nxt = current
        for state, arm, cmd, condition, target in TRANSITION_TABLE:
            if (state is current and int(inputs.arm) == arm
                    and inputs.state_command == cmd
                    and guard_satisfied(condition, guards, thresholds)):
                nxt = target
                break
    return nxt, commands_for(nxt, vehicle_speed=guards.vehicle_speed,
                             thresholds=thresholds)


GuardSource = Callable[[float, FlightState, float], GuardSignals]


def dwell_guards(dwell: float) -> GuardSource:
    """Guard source that satisfies any active guard after ``dwell`` seconds
    in the state (for pure state-machine replays without dynamics)."""
    if dwell <= 0.0:
        raise ConfigurationError("dwell must be positive")

    def source(t: float, state: FlightState, entered: float) -> GuardSignals:
        settled = (t - entered) >= dwell
        if state is FlightState.ROTOR_DECELERATION:
            speed = 0.0 if settled else HOVER_ROTOR_SPEED
            return GuardSignals(rotor_speed=speed, rotor_speed_setpoint=0.0,
                                counterbalance_reorient_error=3.14,
                                vehicle_speed=12.0)
        if state in (FlightState.ROTOR_SPIN_UP, FlightState.ROTOR_ACCELERATION):
            speed = HOVER_ROTOR_SPEED if settled else 0.0
            return GuardSignals(rotor_speed=speed,
                                rotor_speed_setpoint=HOVER_ROTOR_SPEED,
                                counterbalance_reorient_error=3.14,
                                vehicle_speed=0.0)
        if state is FlightState.FORWARD_FLIGHT:
            # cruise above the gate, then ease off to trigger the hand-back
            return GuardSignals(rotor_speed=0.0, rotor_speed_setpoint=0.0,
                                counterbalance_reorient_error=3.14,
                                vehicle_speed=5.0 if settled else 12.0)
        err = 0.0 if settled else 3.14
        return GuardSignals(rotor_speed=0.0, rotor_speed_setpoint=0.0,
                            counterbalance_reorient_error=err, vehicle_speed=0.0)

    return source


def scripted_guards(schedule: Sequence[Tuple[float, GuardSignals]]) -> GuardSource:
    """Guard source replaying a timed schedule (last entry at or before t)."""
    entries = sorted(schedule, key=lambda e: e[0])

    def source(t: float, state: FlightState, entered: float) -> GuardSignals:
        current = GuardSignals()
        for when, signals in entries:
            if when <= t:
                current = signals
            else:
                break
        return current

    return source


@dataclass(frozen=True)
class TransitionRecord:
    t: float
    state: FlightState
    commands: ActuatorCommands
    configuration: ConfigurationState


def _apply_commands_instantly(config: ConfigurationState,
                              commands: ActuatorCommands) -> ConfigurationState:
    """Geometric commands applied with no actuation delay (pure replay)."""
    if commands.wing_command is not None:
        config = configuration_transition(
            config, ConfigCommand.FLIP_TO_SAME
            if commands.wing_command is WingDirection.SAME
            else ConfigCommand.FLIP_TO_OPPOSITE)
    if commands.cop_command is not None:
        config = configuration_transition(
            config, ConfigCommand.SHIFT_AFT
            if commands.cop_command is CopPosition.AFT
            else ConfigCommand.SHIFT_FORWARD)
    target = commands.counterbalance_command
    if target is not None and target is not config.counterbalance:
        for command, (source, dest) in _CB_CYCLE.items():
            if source is config.counterbalance and dest is target:
                config = configuration_transition(config, command)
                break
    return config


def mission_trace(script: Sequence[Tuple[float, PilotInputs]],
                  guards_source: GuardSource, *, dt: float = 1e-3,
                  duration: float = 60.0,
                  thresholds: GuardThresholds = DEFAULT_THRESHOLDS) -> List[TransitionRecord]:
    """Replay a timed pilot script against a guard source.

    Returns one record per state visit (including the initial disarmed
    state), each carrying the commands emitted on entry and the discrete
    configuration after those commands (applied instantly; the actuation
    sweeps belong to the closed-loop scenario engine).  Deterministic.
    """
    times = [t for t, _ in script]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigurationError("script times must be strictly increasing")
    if dt <= 0.0 or duration <= 0.0:
        raise ConfigurationError("dt and duration must be positive")

    state = FlightState.DISARMED
    config = VTOL_CONFIGURATION
    entered = 0.0
    inputs = PilotInputs()
    records = [TransitionRecord(0.0, state,
                                commands_for(state, thresholds=thresholds), config)]
    script_idx = 0
    steps = int(round(duration / dt))
    for k in range(steps):
        t = k * dt
        while script_idx < len(script) and script[script_idx][0] <= t:
            inputs = script[script_idx][1]
            script_idx += 1
        guards = guards_source(t, state, entered)
        nxt, commands = step(state, inputs, guards, thresholds)
        if nxt is not state:
            entered = t + dt
            state = nxt
            config = _apply_commands_instantly(config, commands)
            records.append(TransitionRecord(t + dt, state, commands, config))
    return records
