"""Discrete-time PID controllers: single-loop PID and cascaded PI-PID.

Both run at a fixed sample time (1 kHz by default elsewhere) with
rectangular integration and a backward-difference derivative taken on the
error signal.  Derivative-on-error matters here: a setpoint step produces a
one-sample torque spike that mimics the impulse of the ideal continuous
controller and gives the fast rise the architecture comparison relies on.

Anti-windup clamps the accumulated integral term (in output units) to the
configured windup range; output saturation clamps the final command.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

from .errors import ConfigurationError

Limits = Tuple[float, float]


def _check_limits(name: str, limits: Optional[Limits]) -> None:
    if limits is None:
        return
    lo, hi = limits
    if not lo < hi:
        raise ConfigurationError(f"{name} must satisfy lo < hi, got {limits!r}")


def _clamp(value: float, limits: Optional[Limits]) -> float:
    if limits is None:
        return value
    lo, hi = limits
    if value < lo:
        return lo
    if value > hi:
        return hi
    return value


@dataclass(frozen=True)
class PidGains:
    """Gains and limits for one PID loop.

    ``output_limits`` saturates the command; ``windup_limits`` clamps the
    integral term (the ``ki * integral(e)`` contribution, in output units).
    """

    kp: float
    ki: float = 0.0
    kd: float = 0.0
    output_limits: Optional[Limits] = None
    windup_limits: Optional[Limits] = None

    def __post_init__(self):
        for name in ("kp", "ki", "kd"):
            if getattr(self, name) < 0.0:
                raise ConfigurationError(f"PidGains.{name} must be >= 0")
        _check_limits("output_limits", self.output_limits)
        _check_limits("windup_limits", self.windup_limits)


@dataclass(frozen=True)
class CascadedGains:
    """Outer position PI plus inner rate PID.

    The outer loop carries no derivative term (it would amplify measurement
    noise on the position channel), which the constructor enforces.
    """

    outer: PidGains
    inner: PidGains

    def __post_init__(self):
        if self.outer.kd != 0.0:
            raise ConfigurationError("outer loop derivative gain must be 0")


class PidState:
    """Mutable accumulators of one PID loop."""

    __slots__ = ("integral", "prev_error", "last_output")

    def __init__(self):
        self.integral = 0.0
        self.prev_error = 0.0
        self.last_output = 0.0

    def reset(self) -> "PidState":
        self.integral = 0.0
        self.prev_error = 0.0
        self.last_output = 0.0
        return self

    def step(self, gains: PidGains, error: float, dt: float) -> float:
        integral = self.integral + gains.ki * error * dt
        integral = _clamp(integral, gains.windup_limits)
        derivative = (error - self.prev_error) / dt
        u = _clamp(gains.kp * error + integral + gains.kd * derivative,
                   gains.output_limits)
        self.integral = integral
        self.prev_error = error
        self.last_output = u
        return u


class CascadeState:
    """Accumulators for a cascaded PI-PID pair."""

    __slots__ = ("outer", "inner")

    def __init__(self):
        self.outer = PidState()
        self.inner = PidState()

    def reset(self) -> "CascadeState":
        self.outer.reset()
        self.inner.reset()
        return self


ControllerState = PidState  # single-loop state alias


def single_loop_step(state: PidState, gains: PidGains, setpoint: float,
                     measurement: float, dt: float) -> float:
    """One sample of the single-loop PID acting on the position error."""
    if dt <= 0.0:
        raise ConfigurationError("dt must be positive")
    return state.step(gains, setpoint - measurement, dt)


def cascaded_step(state: CascadeState, gains: CascadedGains,
                  position_setpoint: float, position: float, rate: float,
                  dt: float) -> float:
    """One sample of the cascade: outer PI emits the rate setpoint, inner
    PID on the rate error emits the command.  Each loop applies its own
    saturation and windup clamp."""
    if dt <= 0.0:
        raise ConfigurationError("dt must be positive")
    rate_setpoint = state.outer.step(gains.outer, position_setpoint - position, dt)
    return state.inner.step(gains.inner, rate_setpoint - rate, dt)


def reset(state):
    """Zero all accumulators of a :class:`PidState` or :class:`CascadeState`."""
    return state.reset()
