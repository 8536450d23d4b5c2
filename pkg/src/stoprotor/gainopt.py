"""Constrained gain tuning by simplex search on a tracking-cost functional.

The cost is ``J = IAE + effort_weight * integral(u^2)`` over a short
closed-loop step response (1 s by default) on the feedforward-linearized
plant, evaluated by rectangular quadrature at the controller rate.  Gains
are box-constrained to (0, 100] and start from unity.

The search is derivative-free: Nelder-Mead with boundary projection, plus a
seeded set of random restarts.  Restarts matter because parts of the gain
box are divergent for the discrete loop (a large inner derivative gain is
unstable at any sample rate) and the penalty plateau there gives the
simplex no slope to follow.  Among all converged candidates the best one
that also passes the closed-form stability predicate is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize as _sciopt

from .controllers import CascadedGains, PidGains
from .errors import ConfigurationError, InvalidStateError
from .loopsim import tracking_cost
from .stability import Architecture, PlantEta, cascaded_stable, single_loop_stable

#: Cost assigned to a divergent closed-loop simulation.
DIVERGENCE_PENALTY = 1e9

_GAIN_NAMES = {
    "single": ("kp", "ki", "kd"),
    "cascaded": ("kp1", "ki1", "kp2", "ki2", "kd2"),
}


@dataclass(frozen=True)
class OptProblem:
    """One tuning problem: architecture, plant, cost weights and box."""

    architecture: Architecture
    eta: PlantEta
    effort_weight: float = 1e-3   # weight on integral(u^2); exposed, not pinned by theory
    horizon: float = 1.0
    dt: float = 1e-3
    reference: float = 1.0
    bounds: Tuple[float, float] = (1e-6, 100.0)
    initial_gains: Optional[Tuple[float, ...]] = None

    def __post_init__(self):
        if self.architecture not in _GAIN_NAMES:
            raise ConfigurationError(f"unknown architecture {self.architecture!r}")
        if self.horizon <= 0.0 or self.dt <= 0.0:
            raise ConfigurationError("horizon and dt must be positive")
        if self.effort_weight < 0.0:
            raise ConfigurationError("effort_weight must be >= 0")
        lo, hi = self.bounds
        if not (0.0 < lo <= hi):
            raise ConfigurationError(f"bounds must satisfy 0 < lo <= hi, got {self.bounds!r}")
        if self.initial_gains is not None and len(self.initial_gains) != self.dimension:
            raise ConfigurationError("initial_gains has the wrong length")

    @property
    def dimension(self) -> int:
        return len(_GAIN_NAMES[self.architecture])

    @property
    def gain_names(self) -> Tuple[str, ...]:
        return _GAIN_NAMES[self.architecture]

    def start_point(self) -> np.ndarray:
        if self.initial_gains is not None:
            return np.asarray(self.initial_gains, dtype=float)
        return np.ones(self.dimension)

    def to_gains(self, x: Sequence[float]) -> Union[PidGains, CascadedGains]:
        x = [float(v) for v in x]
        if self.architecture == "single":
            return PidGains(kp=x[0], ki=x[1], kd=x[2])
        return CascadedGains(outer=PidGains(kp=x[0], ki=x[1], kd=0.0),
                             inner=PidGains(kp=x[2], ki=x[3], kd=x[4]))

    def is_stable(self, x: Sequence[float]) -> bool:
        gains = self.to_gains(x)
        if self.architecture == "single":
            return single_loop_stable(self.eta, gains).stable
        return cascaded_stable(self.eta, gains).stable


@dataclass
class OptResult:
    """Best gains found plus bookkeeping for reproducibility checks."""

    gains: Tuple[float, ...]
    cost: float
    iterations: int
    converged: bool
    history: List[float] = field(default_factory=list)  # best-so-far per evaluation
    diverged_evals: int = 0

    def gains_dict(self, problem: OptProblem) -> dict:
        return dict(zip(problem.gain_names, self.gains))


def cost(problem: OptProblem, gains: Sequence[float]) -> float:
    """Evaluate J for one gain vector (penalty on divergence)."""
    lo, hi = problem.bounds
    x = np.asarray(gains, dtype=float)
    if x.shape != (problem.dimension,):
        raise ConfigurationError("gain vector has the wrong length")
    if np.any(x < lo) or np.any(x > hi):
        raise ConfigurationError(f"gains {x.tolist()} violate bounds [{lo}, {hi}]")
    iae, effort, diverged = tracking_cost(
        problem.to_gains(x), problem.eta.eta, problem.effort_weight,
        dt=problem.dt, horizon=problem.horizon, reference=problem.reference)
    if diverged:
        return DIVERGENCE_PENALTY
    return iae + problem.effort_weight * effort


class _Recorder:
    """Wraps the cost with projection, best-so-far history and candidates."""

    def __init__(self, problem: OptProblem):
        self.problem = problem
        self.history: List[float] = []
        self.best = np.inf
        self.best_x: Optional[np.ndarray] = None
        self.best_stable = np.inf
        self.best_stable_x: Optional[np.ndarray] = None
        self.diverged = 0

    def __call__(self, x: np.ndarray) -> float:
        lo, hi = self.problem.bounds
        x = np.clip(np.asarray(x, dtype=float), lo, hi)
        j = cost(self.problem, x)
        if j >= DIVERGENCE_PENALTY:
            self.diverged += 1
        if j < self.best:
            self.best = j
            self.best_x = x.copy()
        if j < self.best_stable and self.problem.is_stable(x):
            self.best_stable = j
            self.best_stable_x = x.copy()
        self.history.append(self.best)
        return j


def optimize(problem: OptProblem, seed: int = 0, restarts: int = 12,
             maxfev_per_start: int = 1200, polish: int = 2) -> OptResult:
    """Minimize the tracking cost within the gain box.

    Deterministic for a fixed ``seed``.  Runs Nelder-Mead from the initial
    point and from ``restarts`` log-uniform random points, re-polishes the
    best point found (restarting the simplex escapes collapsed geometry),
    then returns the lowest-cost candidate that satisfies the stability
    predicate (falling back to the overall best if none does, which cannot
    happen from the default unity start since that point is itself stable).
    """
    x0 = problem.start_point()
    lo, hi = problem.bounds
    j0 = cost(problem, x0)
    if not np.isfinite(j0):
        raise InvalidStateError("cost is not finite at the initial point")

    rng = np.random.default_rng(seed)
    starts = [x0]
    for _ in range(restarts):
        starts.append(np.exp(rng.uniform(np.log(max(lo, 1e-4)), np.log(hi),
                                         problem.dimension)))

    recorder = _Recorder(problem)
    recorder(x0)  # ensure the initial point is always a candidate
    nm_bounds = _sciopt.Bounds(np.full(problem.dimension, lo),
                               np.full(problem.dimension, hi))
    converged = False

    def descend(start, xatol, fatol):
        res = _sciopt.minimize(recorder, start, method="Nelder-Mead",
                               bounds=nm_bounds,
                               options={"maxfev": maxfev_per_start,
                                        "xatol": xatol, "fatol": fatol,
                                        "adaptive": problem.dimension > 3})
        return bool(res.success)

    for start in starts:
        converged = descend(start, 1e-6, 1e-9) or converged
    for _ in range(polish):
        anchor = recorder.best_stable_x if recorder.best_stable_x is not None \
            else recorder.best_x
        converged = descend(anchor, 1e-8, 1e-12) or converged

    if recorder.best_stable_x is not None:
        best_x, best_j = recorder.best_stable_x, recorder.best_stable
    else:
        best_x, best_j = recorder.best_x, recorder.best
    return OptResult(gains=tuple(float(v) for v in best_x),
                     cost=float(best_j),
                     iterations=len(recorder.history),
                     converged=converged and recorder.best_stable_x is not None,
                     history=recorder.history,
                     diverged_evals=recorder.diverged)
