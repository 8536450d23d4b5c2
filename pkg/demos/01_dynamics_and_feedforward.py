"""Walk through the simplified vehicle model: how the spinning wing loads
the yaw axis, how rotor lift offsets gravity, and how the feedforward terms
cancel both so the controllers see a clean double integrator.
"""

import numpy as np

from stoprotor import (ConstantAcceleration, ControlInputs, VehicleParams,
                       VehicleState, altitude_acceleration, feedforward,
                       integrate_step, yaw_acceleration)

p = VehicleParams()
print("vehicle parameters:", p)

print("\n--- raw accelerations at hover rotor speed (80 rad/s) ---")
print(f"yaw acceleration, no control: {yaw_acceleration(p, 80.0, 0.0, 0.0):+.4f} rad/s^2"
      " (wing drag torques the body)")
print(f"vertical acceleration, no control: {altitude_acceleration(p, 80.0, 0.0):+.4f} m/s^2"
      " (positive means sinking: rotor lift alone cannot hover)")

print("\n--- feedforward terms cancel the offsets exactly ---")
for omega, accel in [(0.0, 0.0), (40.0, 0.0), (80.0, 0.0), (60.0, -19.0)]:
    d = feedforward(p, omega, accel)
    ry = yaw_acceleration(p, omega, accel, d.d_yaw)
    rz = altitude_acceleration(p, omega, d.d_alt)
    print(f"omega={omega:5.1f} accel={accel:6.1f}: d_yaw={d.d_yaw:.6f} N m,"
          f" d_alt={d.d_alt:.3f} N, residuals=({ry:.1e}, {rz:.1e})")

print("\n--- braking the rotor from 80 rad/s at the transition rate ---")
profile = ConstantAcceleration(-80.0 / 4.2, 80.0, clamp_at_zero=True)
state = VehicleState(omega_rotor=80.0)
stop_time = None
while state.t < 5.0:
    d = feedforward(p, state.omega_rotor, profile.accel(state.t))
    state = integrate_step(state, p, profile, ControlInputs(d.d_yaw, d.d_alt), 1e-3)
    if stop_time is None and state.omega_rotor == 0.0:
        stop_time = state.t
print(f"rotor reaches standstill at t = {stop_time:.3f} s (ramp sized for 4.2 s)")
print("feedforward sampled once per step leaves only a sliver of drift: "
      f"|yaw rate| = {abs(state.omega_body):.2e} rad/s, "
      f"|v_z| = {abs(state.v_z):.2e} m/s")
