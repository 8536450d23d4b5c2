"""Probe the closed-form stability predicates and map an instability region
over the inner-loop gains.  The closed-form verdicts are cross-checked
against companion-matrix roots on the way.  Pass an output path to export
the sweep grid CSV for the plotting frontend.
"""

import sys

from stoprotor import (CascadedGains, PidGains, PlantEta, SweepSpec,
                       cascaded_stable, characteristic_roots, single_loop_stable,
                       sweep, yaw_plant)
from stoprotor.trace import SimTrace, export_trace

eta = yaw_plant()
print(f"yaw plant inertia eta = {eta.eta} kg m^2")

print("\n--- single-loop verdicts ---")
for gains in (PidGains(0.004, 0.010, 0.561), PidGains(0.004, 0.10, 0.561)):
    v = single_loop_stable(eta, gains)
    roots = characteristic_roots(eta, "single", gains)
    print(f"kp={gains.kp} ki={gains.ki} kd={gains.kd}: stable={v.stable} "
          f"margin={v.margin:+.5f}  max Re(pole)={max(roots.real):+.4f}")

print("\n--- cascaded verdict for the tuned gains ---")
tuned = CascadedGains(PidGains(13.100, 0.002, 0.0), PidGains(13.600, 0.036, 1.370e-5))
v = cascaded_stable(eta, tuned)
print(f"stable={v.stable} margin={v.margin:.1f} "
      f"poles={sorted(characteristic_roots(eta, 'cascaded', tuned).real)}")

print("\n--- instability region over the inner-loop gains ---")
spec = SweepSpec(gain_x="kp2", x_lo=0.01, x_hi=1.0,
                 gain_y="ki2", y_lo=0.01, y_hi=1.0, nx=60, ny=60)
grid = sweep(eta, spec)
unstable = int((~grid.stable).sum())
print(f"grid {spec.nx}x{spec.ny}: {unstable} unstable cells "
      f"({100.0 * unstable / grid.stable.size:.1f}% of the plane)")
print("weak inner proportional gain with a pushy inner integral loses the axis")

if len(sys.argv) > 1:
    trace = SimTrace(columns=grid.csv_header(), meta={"kind": "sweep"})
    for row in grid.rows():
        trace.append(*[float(v) for v in row])
    export_trace(trace, sys.argv[1], "csv")
    print("wrote", sys.argv[1])
