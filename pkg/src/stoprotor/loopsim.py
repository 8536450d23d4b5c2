"""Closed-loop step-response simulation on the feedforward-linearized plant.

With the offset terms cancelled the vehicle axis reduces exactly to
``eta * y_ddot = u + w`` (w = an optional load disturbance at the plant
input).  Under zero-order-hold inputs the per-step update

    y += v dt + a dt^2 / 2 ;  v += a dt

is the exact solution, and coincides with what the RK4 vehicle integrator
produces for the same scenario (asserted in the test suite).  Controllers
run through the real discrete PID implementations at the same rate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .controllers import CascadedGains, CascadeState, PidGains, PidState
from .errors import ConfigurationError

#: State magnitude beyond which a run is declared divergent.
DIVERGENCE_LIMIT = 1e6


@dataclass
class LoopResponse:
    """Sampled closed-loop signals (arrays share one time base)."""

    t: np.ndarray
    y: np.ndarray
    e: np.ndarray
    u: np.ndarray
    diverged: bool = False

    def peak_command(self) -> float:
        return float(np.max(np.abs(self.u)))


def simulate_loop(gains: Union[PidGains, CascadedGains], eta: float,
                  dt: float = 1e-3, horizon: float = 60.0,
                  reference: float = 1.0,
                  disturbance_time: Optional[float] = None,
                  disturbance: float = 0.0,
                  record: bool = True) -> LoopResponse:
    """Simulate a reference step with an optional input step disturbance.

    ``gains`` selects the architecture: a :class:`PidGains` runs the
    single-loop PID on the position error, a :class:`CascadedGains` runs the
    PI-PID cascade on position and rate.  Returns the sampled error and
    command history; on divergence the trace is truncated and flagged.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ConfigurationError("dt and horizon must be positive")
    n = int(round(horizon / dt))
    cascade = isinstance(gains, CascadedGains)
    state: Union[PidState, CascadeState] = CascadeState() if cascade else PidState()

    size = n + 1 if record else 0
    ts = np.empty(size)
    ys = np.empty(size)
    es = np.empty(size)
    us = np.empty(size)

    y = 0.0
    v = 0.0
    diverged = False
    steps = 0
    for k in range(n + 1):
        t = k * dt
        if cascade:
            u = _cascade_sample(state, gains, reference, y, v, dt)
        else:
            u = state.step(gains, reference - y, dt)
        if record:
            ts[k] = t
            ys[k] = y
            es[k] = reference - y
            us[k] = u
        steps = k + 1
        if abs(y) > DIVERGENCE_LIMIT or abs(v) > DIVERGENCE_LIMIT:
            diverged = True
            break
        w = disturbance if (disturbance_time is not None and t >= disturbance_time) else 0.0
        a = (u + w) / eta
        y += v * dt + 0.5 * a * dt * dt
        v += a * dt

    if record:
        return LoopResponse(t=ts[:steps], y=ys[:steps], e=es[:steps],
                            u=us[:steps], diverged=diverged)
    return LoopResponse(t=np.empty(0), y=np.empty(0), e=np.empty(0),
                        u=np.empty(0), diverged=diverged)


def _cascade_sample(state: CascadeState, gains: CascadedGains,
                    reference: float, y: float, v: float, dt: float) -> float:
    rate_sp = state.outer.step(gains.outer, reference - y, dt)
    return state.inner.step(gains.inner, rate_sp - v, dt)


def tracking_cost(gains: Union[PidGains, CascadedGains], eta: float,
                  effort_weight: float, dt: float = 1e-3, horizon: float = 1.0,
                  reference: float = 1.0) -> tuple:
    """Integral of absolute error plus weighted squared command.

    Rectangular quadrature at ``dt``.  Returns ``(iae, effort, diverged)``;
    a divergent run reports the partial integrals and the flag.
    """
    if dt <= 0.0 or horizon <= 0.0:
        raise ConfigurationError("dt and horizon must be positive")
    n = int(round(horizon / dt))
    cascade = isinstance(gains, CascadedGains)
    state: Union[PidState, CascadeState] = CascadeState() if cascade else PidState()
    y = 0.0
    v = 0.0
    iae = 0.0
    effort = 0.0
    for k in range(n):
        if cascade:
            u = _cascade_sample(state, gains, reference, y, v, dt)
        else:
            u = state.step(gains, reference - y, dt)
        iae += abs(reference - y) * dt
        effort += u * u * dt
        if abs(y) > DIVERGENCE_LIMIT or abs(v) > DIVERGENCE_LIMIT:
            return iae, effort, True
        a = u / eta
        y += v * dt + 0.5 * a * dt * dt
        v += a * dt
    return iae, effort, False
