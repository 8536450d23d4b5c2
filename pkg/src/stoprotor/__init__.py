"""Deterministic simulation and analysis toolkit for stop-rotor UAV
transition control: simplified yaw/altitude dynamics, feedforward-linearized
PID control, closed-form stability predicates, gain optimization,
center-of-pressure geometry, and the flight-mode state machine."""

from .controllers import (CascadedGains, CascadeState, PidGains, PidState,
                          cascaded_step, reset, single_loop_step)
from .dynamics import (ConstantAcceleration, ConstantSpeed, ControlInputs,
                       FeedforwardTerms, RotorProfile, VehicleParams,
                       VehicleState, altitude_acceleration, drag_torque,
                       feedforward, integrate_step, rk4_step, rotor_lift,
                       yaw_acceleration)
from .errors import ConfigurationError, InvalidStateError, TransitionError
from .gainopt import DIVERGENCE_PENALTY, OptProblem, OptResult, cost, optimize
from .geometry import MassLayout, cg_shift, max_cop_cg_offset
from .presets import FLIGHT, GainPreset, load_preset
from .scenario import (ComparisonSpec, DisturbanceEvent, MissionTimings,
                       ScenarioSpec, build_bidirectional_script,
                       comparison_panels, default_mission_spec,
                       run_comparison, run_mission)
from .stability import (PlantEta, StabilityVerdict, SweepGrid, SweepSpec,
                        altitude_plant, cascaded_stable,
                        characteristic_polynomial, characteristic_roots,
                        roots_verdict, single_loop_stable, sweep, yaw_plant)
from .statemachine import (ActuatorCommands, ConfigCommand, ConfigurationState,
                           ControllerMode, CopPosition, CounterbalanceMode,
                           FlightState, GuardCondition, GuardSignals,
                           GuardThresholds, PilotInputs, WingDirection,
                           commands_for, configuration_transition,
                           dwell_guards, guard_satisfied, mission_trace,
                           scripted_guards, step)
from .trace import SimTrace, export_trace, import_trace

__version__ = "0.1.0"
