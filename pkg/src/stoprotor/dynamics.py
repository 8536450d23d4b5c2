"""Simplified yaw/altitude dynamics of a stop-rotor vehicle.

Only the two degrees of freedom that couple strongly to the main rotor are
modeled: body yaw (reaction torque of an accelerating rotor plus aerodynamic
drag of the spinning wing) and vertical motion (rotor lift versus gravity).
Roll, pitch and translational dynamics are out of scope.

Sign convention: ``z`` grows in the direction gravity acts, so an
uncontrolled vehicle has ``z_ddot = +g``.  Hover means the lift plus the
vertical control force exactly balance the weight.  Display layers may
negate ``z`` for altitude-up plots.

All quantities are SI.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

from .errors import ConfigurationError, InvalidStateError

# Fixed-step integration is only trusted up to this step size.
MAX_DT = 0.01


@dataclass(frozen=True)
class VehicleParams:
    """Physical and aerodynamic constants of the vehicle."""

    i_body: float = 0.0345   # body yaw inertia [kg m^2]
    i_rotor: float = 0.0016  # rotor yaw inertia [kg m^2]
    rho: float = 1.225       # air density [kg/m^3]
    c_d: float = 0.05        # wing drag coefficient [-]
    c_l: float = 0.87        # wing lift coefficient [-]
    a_ref: float = 0.056     # wing reference area [m^2]
    r: float = 0.10          # rotation axis to wing CoP distance [m]
    m: float = 2.727         # total mass [kg]
    g: float = 9.81          # gravitational acceleration [m/s^2]

    def __post_init__(self):
        for name, value in vars(self).items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
                raise ConfigurationError(
                    f"VehicleParams.{name} must be a positive finite number, got {value!r}"
                )


@dataclass(frozen=True)
class VehicleState:
    """Vehicle state at one time instant."""

    t: float = 0.0            # time [s]
    alpha_body: float = 0.0   # body yaw angle [rad]
    omega_body: float = 0.0   # body yaw rate [rad/s]
    z: float = 0.0            # vertical coordinate, positive with gravity [m]
    v_z: float = 0.0          # rate of z [m/s]
    alpha_rotor: float = 0.0  # rotor angle [rad]
    omega_rotor: float = 0.0  # rotor speed [rad/s], never negative in use

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in vars(self).values())


@dataclass(frozen=True)
class ConstantSpeed:
    """Rotor profile holding a fixed speed (hover, spin-up plateau)."""

    omega0: float

    def speed(self, t: float) -> float:
        return self.omega0

    def accel(self, t: float) -> float:
        return 0.0


@dataclass(frozen=True)
class ConstantAcceleration:
    """Rotor profile ramping at a constant angular acceleration.

    ``omega(t) = omega0 + alpha_ddot * (t - t0)``, optionally clamped at zero
    because the rotor cannot spin backwards past its stop.
    """

    alpha_ddot: float
    omega0: float
    t0: float = 0.0
    clamp_at_zero: bool = True

    def _raw(self, t: float) -> float:
        return self.omega0 + self.alpha_ddot * (t - self.t0)

    def speed(self, t: float) -> float:
        w = self._raw(t)
        if self.clamp_at_zero and w < 0.0:
            return 0.0
        return w

    def accel(self, t: float) -> float:
        if self.clamp_at_zero and self._raw(t) <= 0.0:
            return 0.0
        return self.alpha_ddot


RotorProfile = Union[ConstantSpeed, ConstantAcceleration]


@dataclass(frozen=True)
class ControlInputs:
    """Aggregate control torque and vertical force commanded this step."""

    tau_u: float = 0.0  # yaw control torque [N m]
    f_u: float = 0.0    # vertical control force [N]


@dataclass(frozen=True)
class FeedforwardTerms:
    """Known offset terms cancelled at the control input."""

    d_yaw: float  # [N m]
    d_alt: float  # [N]


def drag_torque(p: VehicleParams, omega_rotor: float) -> float:
    """Aerodynamic yaw drag torque of the spinning wing, quadratic in speed."""
    return 0.5 * p.rho * p.c_d * p.a_ref * p.r ** 3 * omega_rotor ** 2


def rotor_lift(p: VehicleParams, omega_rotor: float) -> float:
    """Lift produced by the rotating wing, quadratic in speed."""
    return 0.5 * p.rho * p.c_l * p.a_ref * p.r ** 2 * omega_rotor ** 2


def _require_finite(**values: float) -> None:
    for name, v in values.items():
        if not math.isfinite(v):
            raise InvalidStateError(f"{name} must be finite, got {v!r}")


def yaw_acceleration(p: VehicleParams, omega_rotor: float, rotor_accel: float,
                     tau_u: float) -> float:
    """Body yaw acceleration [rad/s^2].

    Reaction torque of the accelerating rotor and wing drag oppose the
    control torque; the body inertia divides the balance.
    """
    _require_finite(omega_rotor=omega_rotor, rotor_accel=rotor_accel, tau_u=tau_u)
    return (-(p.i_rotor * rotor_accel) - drag_torque(p, omega_rotor) + tau_u) / p.i_body


def altitude_acceleration(p: VehicleParams, omega_rotor: float, f_u: float) -> float:
    """Vertical acceleration [m/s^2], positive in the gravity direction."""
    _require_finite(omega_rotor=omega_rotor, f_u=f_u)
    return (p.m * p.g - rotor_lift(p, omega_rotor) - f_u) / p.m


def feedforward(p: VehicleParams, omega_rotor: float,
                rotor_accel: float) -> FeedforwardTerms:
    """Offset terms that, applied as inputs, null both accelerations.

    ``d_yaw`` compensates the rotor reaction torque and wing drag; ``d_alt``
    compensates the gap between weight and rotor lift.  The shared
    ``drag_torque``/``rotor_lift`` helpers keep the cancellation exact in
    floating point.
    """
    _require_finite(omega_rotor=omega_rotor, rotor_accel=rotor_accel)
    d_yaw = p.i_rotor * rotor_accel + drag_torque(p, omega_rotor)
    d_alt = p.m * p.g - rotor_lift(p, omega_rotor)
    return FeedforwardTerms(d_yaw=d_yaw, d_alt=d_alt)


def rk4_step(f: Callable[[float, Sequence[float]], Sequence[float]],
             t: float, y: Sequence[float], dt: float) -> tuple:
    """One classical 4th-order Runge-Kutta step for ``dy/dt = f(t, y)``.

    Operates on plain float tuples so it stays cheap inside per-millisecond
    simulation loops.
    """
    k1 = f(t, y)
    half = 0.5 * dt
    y2 = tuple(yi + half * k for yi, k in zip(y, k1))
    k2 = f(t + half, y2)
    y3 = tuple(yi + half * k for yi, k in zip(y, k2))
    k3 = f(t + half, y3)
    y4 = tuple(yi + dt * k for yi, k in zip(y, k3))
    k4 = f(t + dt, y4)
    sixth = dt / 6.0
    return tuple(yi + sixth * (a + 2.0 * b + 2.0 * c + d)
                 for yi, a, b, c, d in zip(y, k1, k2, k3, k4))


def integrate_step(state: VehicleState, p: VehicleParams, profile: RotorProfile,
                   u: ControlInputs, dt: float) -> VehicleState:
    """Advance the vehicle one fixed step with zero-order-hold inputs.

    Rotor kinematics are taken from ``profile`` (they are commanded, not
    simulated), the remaining states integrate with :func:`rk4_step`.  Pure:
    returns a new state and is bit-deterministic for identical inputs.
    """
    if not (0.0 < dt <= MAX_DT):
        raise ConfigurationError(f"dt must be in (0, {MAX_DT}] s, got {dt!r}")
    if not state.is_finite():
        raise InvalidStateError(f"non-finite vehicle state: {state}")
    _require_finite(tau_u=u.tau_u, f_u=u.f_u)

    def deriv(t, y):
        _, omega_body, _, v_z, _ = y
        w = profile.speed(t)
        a_r = profile.accel(t)
        yaw_dd = (-(p.i_rotor * a_r) - drag_torque(p, w) + u.tau_u) / p.i_body
        alt_dd = (p.m * p.g - rotor_lift(p, w) - u.f_u) / p.m
        return (omega_body, yaw_dd, v_z, alt_dd, w)

    y0 = (state.alpha_body, state.omega_body, state.z, state.v_z, state.alpha_rotor)
    alpha_body, omega_body, z, v_z, alpha_rotor = rk4_step(deriv, state.t, y0, dt)
    t1 = state.t + dt
    return VehicleState(t=t1, alpha_body=alpha_body, omega_body=omega_body,
                        z=z, v_z=v_z, alpha_rotor=alpha_rotor,
                        omega_rotor=profile.speed(t1))
