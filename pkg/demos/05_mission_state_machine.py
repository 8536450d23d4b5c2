"""Fly the full out-and-back transition mission: spin up, hover, brake the
rotor to a stop, reconfigure to forward flight, cruise, ease off below the
hand-back gate, re-accelerate the rotor and return to hover.  Prints the
state timeline and the rotor ramp timing; pass an output path to export the
full trace CSV for the plotting frontend.
"""

import sys

from stoprotor import default_mission_spec, run_mission
from stoprotor.trace import export_trace

spec = default_mission_spec()
print(f"mission '{spec.name}', duration {spec.duration} s, dt {spec.dt} s")
print("pilot script (t, kill, arm, command):")
for t, inputs in spec.script:
    print(f"  {t:6.2f}  {int(inputs.kill)} {int(inputs.arm)} {inputs.state_command}")

trace = run_mission(spec)
states = trace.column("state")
ts = trace.column("t")

print("\nstate timeline:")
for i, s in enumerate(states):
    if i == 0 or states[i - 1] != s:
        print(f"  {ts[i]:8.3f}  {s}")

om = trace.column("rotor_speed")
first_zero = next(ts[i] for i in range(1, len(om))
                  if om[i] == 0.0 and om[i - 1] > 0.0)
last_eighty = next(ts[i - 1] for i in range(1, len(om))
                   if om[i] < 80.0 and om[i - 1] == 80.0)
print(f"\nrotor braking ramp: {last_eighty:.3f} s -> {first_zero:.3f} s "
      f"({first_zero - last_eighty:.3f} s)")
print(f"peak |yaw error| {max(abs(v) for v in trace.column('yaw_error')):.2e} rad, "
      f"peak |altitude error| {max(abs(v) for v in trace.column('alt_error')):.2e} m")

if len(sys.argv) > 1:
    export_trace(trace, sys.argv[1], "csv")
    print("wrote", sys.argv[1])
