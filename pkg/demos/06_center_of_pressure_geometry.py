"""How far aft of the center of gravity can the center of pressure sit?
Shifting the rotor carriage moves mass with it, so the CG chases the CoP
and eats into the servo stroke.
"""

from stoprotor import MassLayout, cg_shift, max_cop_cg_offset

hover = MassLayout(r_rail=0.0, r_wing=0.0)
print(f"hover configuration: CG shift = {cg_shift(hover):.4f} m "
      "(rail and wing aligned with the rotation axis)")

cruise = MassLayout()
print(f"cruise configuration: CG shift = {cg_shift(cruise):.6f} m "
      f"(masses {cruise.m_rail} kg at {cruise.r_rail} m and "
      f"{cruise.m_wing} kg at {cruise.r_wing} m over {cruise.m} kg total)")
print(f"servo stroke {cruise.servo_stroke} m minus the CG chase leaves "
      f"{max_cop_cg_offset(cruise):.6f} m of usable CoP-to-CG offset")
print("rounded to centimeters that is the familiar 0.02 m shift / 0.03 m offset")
