"""Routh-Hurwitz stability predicates for PID loops on a 1/(eta s^2) plant.

With the feedforward offsets cancelled, both the yaw axis (eta = body
inertia) and the vertical axis (eta = mass) reduce to a double integrator.
The closed-loop characteristic polynomials below are derived by block
algebra and are the single source of truth for both the closed-form
predicates and the root-finding oracle.

Single loop, C(s) = kp + kd s + ki/s acting on the position error:

    1 + C(s) / (eta s^2) = 0   =>   eta s^3 + kd s^2 + kp s + ki = 0

Routh on the cubic: all coefficients positive and kp*kd > eta*ki.  The
reported margin is the slack ``kp*kd - eta*ki``.

Cascade, outer C1(s) = kp1 + ki1/s emitting a rate setpoint, inner
C2(s) = kp2 + kd2 s + ki2/s on the rate error, rate plant 1/(eta s):

    1 + C2/(eta s) + C1 C2/(eta s^2) = 0
    => eta s^2 D1 D2 + s N2 D1 + N1 N2 = 0     with Ci = Ni/Di

For ki1, ki2 > 0 (D1 = D2 = s) this is the quartic

    (eta + kd2) s^4 + (kp2 + kp1 kd2) s^3
        + (ki2 + kp1 kp2 + ki1 kd2) s^2
        + (kp1 ki2 + ki1 kp2) s + ki1 ki2 = 0

whose Routh condition beyond coefficient positivity is

    a3 a2 a1 > a4 a1^2 + a3^2 a0.

The reported cascade margin is the slack of that inequality.  A zero
integral gain removes the corresponding controller integrator, dropping the
polynomial order; the predicates and the oracle both use the reduced
polynomial so PD-like cascades classify correctly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Literal, Union

import numpy as np

from .controllers import CascadedGains, PidGains
from .errors import ConfigurationError
from .dynamics import VehicleParams

Architecture = Literal["single", "cascaded"]

#: Margins closer to zero than this are treated as boundary cases.
BOUNDARY_BAND = 1e-12


@dataclass(frozen=True)
class PlantEta:
    """Inertial constant of the double-integrator plant."""

    eta: float

    def __post_init__(self):
        if not (self.eta > 0.0 and np.isfinite(self.eta)):
            raise ConfigurationError(f"eta must be positive and finite, got {self.eta!r}")


def yaw_plant(p: VehicleParams = VehicleParams()) -> PlantEta:
    return PlantEta(p.i_body)


def altitude_plant(p: VehicleParams = VehicleParams()) -> PlantEta:
    return PlantEta(p.m)


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of a closed-form stability test.

    ``margin`` is the slack of the binding Routh inequality (positive means
    strictly stable).  For strictly positive gains ``stable`` is equivalent
    to ``margin > 0``; when a gain is exactly zero the coefficient
    positivity conditions are checked separately.
    """

    stable: bool
    margin: float


def _single_coeffs(eta: float, g: PidGains) -> List[float]:
    if g.ki > 0.0:
        return [eta, g.kd, g.kp, g.ki]
    # no integrator in the controller: order drops by one
    return [eta, g.kd, g.kp]


def _cascade_coeffs(eta: float, g: CascadedGains) -> List[float]:
    kp1, ki1 = g.outer.kp, g.outer.ki
    kp2, ki2, kd2 = g.inner.kp, g.inner.ki, g.inner.kd
    if ki1 > 0.0 and ki2 > 0.0:
        return [eta + kd2,
                kp2 + kp1 * kd2,
                ki2 + kp1 * kp2 + ki1 * kd2,
                kp1 * ki2 + ki1 * kp2,
                ki1 * ki2]
    if ki1 == 0.0 and ki2 > 0.0:
        return [eta + kd2,
                kp2 + kp1 * kd2,
                ki2 + kp1 * kp2,
                kp1 * ki2]
    if ki1 > 0.0 and ki2 == 0.0:
        return [eta + kd2,
                kp2 + kp1 * kd2,
                kp1 * kp2 + ki1 * kd2,
                ki1 * kp2]
    return [eta + kd2,
            kp2 + kp1 * kd2,
            kp1 * kp2]


def characteristic_polynomial(eta: PlantEta, architecture: Architecture,
                              gains: Union[PidGains, CascadedGains]) -> np.ndarray:
    """Closed-loop denominator coefficients, highest power first."""
    if architecture == "single":
        if not isinstance(gains, PidGains):
            raise ConfigurationError("single architecture expects PidGains")
        coeffs = _single_coeffs(eta.eta, gains)
    elif architecture == "cascaded":
        if not isinstance(gains, CascadedGains):
            raise ConfigurationError("cascaded architecture expects CascadedGains")
        coeffs = _cascade_coeffs(eta.eta, gains)
    else:
        raise ConfigurationError(f"unknown architecture {architecture!r}")
    if coeffs[0] == 0.0:
        raise ConfigurationError("degenerate characteristic polynomial")
    return np.asarray(coeffs, dtype=float)


def characteristic_roots(eta: PlantEta, architecture: Architecture,
                         gains: Union[PidGains, CascadedGains]) -> np.ndarray:
    """All closed-loop poles via companion-matrix eigenvalues."""
    return np.roots(characteristic_polynomial(eta, architecture, gains))


def roots_verdict(eta: PlantEta, architecture: Architecture,
                  gains: Union[PidGains, CascadedGains],
                  tol: float = 0.0) -> bool:
    """Independent oracle: stable iff every pole real part is below -tol."""
    return bool(np.all(characteristic_roots(eta, architecture, gains).real < -tol))


def single_loop_stable(eta: PlantEta, g: PidGains) -> StabilityVerdict:
    """Closed-form verdict for the single-loop PID on 1/(eta s^2)."""
    margin = g.kp * g.kd - eta.eta * g.ki
    stable = margin > 0.0 and g.kp > 0.0 and g.ki > 0.0 and g.kd > 0.0
    return StabilityVerdict(stable=stable, margin=margin)


def cascaded_stable(eta: PlantEta, g: CascadedGains) -> StabilityVerdict:
    """Closed-form verdict for the PI-PID cascade on 1/(eta s^2).

    For both integral gains positive the margin is the quartic Routh slack
    ``a3 a2 a1 - a4 a1^2 - a3^2 a0``; reduced-order cases use the matching
    cubic slack or, for the PD-like cascade, coefficient positivity.
    """
    coeffs = _cascade_coeffs(eta.eta, g)
    if len(coeffs) == 5:
        a4, a3, a2, a1, a0 = coeffs
        margin = a3 * a2 * a1 - a4 * a1 * a1 - a3 * a3 * a0
        stable = margin > 0.0 and min(a3, a2, a1, a0) > 0.0
    elif len(coeffs) == 4:
        a3, a2, a1, a0 = coeffs
        margin = a2 * a1 - a3 * a0
        stable = margin > 0.0 and min(a2, a1, a0) > 0.0
    else:
        _, a1, a0 = coeffs
        margin = min(a1, a0)
        stable = margin > 0.0
    return StabilityVerdict(stable=stable, margin=margin)


_SWEEP_GAIN_NAMES = ("kp1", "ki1", "kp2", "ki2", "kd2")


def _with_gain(base: CascadedGains, name: str, value: float) -> CascadedGains:
    if name == "kp1":
        return CascadedGains(PidGains(value, base.outer.ki, 0.0), base.inner)
    if name == "ki1":
        return CascadedGains(PidGains(base.outer.kp, value, 0.0), base.inner)
    inner = {"kp": base.inner.kp, "ki": base.inner.ki, "kd": base.inner.kd}
    inner[{"kp2": "kp", "ki2": "ki", "kd2": "kd"}[name]] = value
    return CascadedGains(base.outer, PidGains(inner["kp"], inner["ki"], inner["kd"]))


@dataclass(frozen=True)
class SweepSpec:
    """Two swept cascade gains over a rectangular grid, others fixed."""

    gain_x: str
    x_lo: float
    x_hi: float
    gain_y: str
    y_lo: float
    y_hi: float
    nx: int = 200
    ny: int = 200
    base: CascadedGains = field(default_factory=lambda: CascadedGains(
        PidGains(13.100, 0.002, 0.0), PidGains(13.600, 0.036, 1.370e-5)))

    def __post_init__(self):
        for name in (self.gain_x, self.gain_y):
            if name not in _SWEEP_GAIN_NAMES:
                raise ConfigurationError(f"unknown sweep gain {name!r}")
        if self.gain_x == self.gain_y:
            raise ConfigurationError("sweep axes must differ")
        for lo, hi, n in ((self.x_lo, self.x_hi, self.nx), (self.y_lo, self.y_hi, self.ny)):
            if n < 1:
                raise ConfigurationError("sweep resolution must be >= 1 per axis")
            if n > 1 and not lo < hi:
                raise ConfigurationError(f"sweep range must satisfy lo < hi, got [{lo}, {hi}]")

    def x_values(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.nx)

    def y_values(self) -> np.ndarray:
        return np.linspace(self.y_lo, self.y_hi, self.ny)


@dataclass
class SweepGrid:
    """Dense stability map over a :class:`SweepSpec` grid.

    ``stable[i, j]`` and ``margin[i, j]`` correspond to row i (y axis value)
    and column j (x axis value); every cell is evaluated.
    """

    spec: SweepSpec
    eta: PlantEta
    stable: np.ndarray
    margin: np.ndarray

    def rows(self) -> Iterator[tuple]:
        xs = self.spec.x_values()
        ys = self.spec.y_values()
        for i in range(self.spec.ny):
            for j in range(self.spec.nx):
                yield (i, j, xs[j], ys[i],
                       int(self.stable[i, j]), self.margin[i, j])

    def csv_header(self) -> List[str]:
        return ["row", "col", self.spec.gain_x, self.spec.gain_y, "stable", "margin"]


def sweep(eta: PlantEta, spec: SweepSpec) -> SweepGrid:
    """Evaluate :func:`cascaded_stable` at every grid cell (deterministic)."""
    xs = spec.x_values()
    ys = spec.y_values()
    stable = np.zeros((spec.ny, spec.nx), dtype=bool)
    margin = np.zeros((spec.ny, spec.nx), dtype=float)
    for i, yv in enumerate(ys):
        row_base = _with_gain(spec.base, spec.gain_y, float(yv))
        for j, xv in enumerate(xs):
            verdict = cascaded_stable(eta, _with_gain(row_base, spec.gain_x, float(xv)))
            stable[i, j] = verdict.stable
            margin[i, j] = verdict.margin
    return SweepGrid(spec=spec, eta=eta, stable=stable, margin=margin)


def outer_gain_trend_report(eta: PlantEta, spec: SweepSpec) -> dict:
    """Count violations of the expected trend that lowering the outer
    proportional gain never destabilizes an otherwise stable cell.

    The trend holds only qualitatively, so callers report the counts rather
    than assert on them.
    """
    if spec.gain_x != "kp1":
        raise ConfigurationError("trend report expects kp1 on the x axis")
    grid = sweep(eta, spec)
    violations = 0
    for i in range(spec.ny):
        row = grid.stable[i]
        # scanning toward smaller kp1, stability must not be lost once gained
        seen_stable = False
        for j in range(spec.nx - 1, -1, -1):
            if row[j]:
                seen_stable = True
            elif seen_stable:
                violations += 1
    return {"violations": violations, "cells": int(spec.nx * spec.ny),
            "stable_cells": int(grid.stable.sum())}
