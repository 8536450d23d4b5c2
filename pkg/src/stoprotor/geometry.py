"""Center-of-gravity shift of the movable rotor/rail assembly.

When the carriage translates along the rail and the wing rotates into the
forward-flight pose, part of the vehicle mass moves off the rotation axis.
The resulting CG displacement limits how far aft of the CG the shifted
center of pressure can sit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigurationError


@dataclass(frozen=True)
class MassLayout:
    """Mass distribution of the movable assemblies.

    Defaults describe the forward-flight configuration: the rail carriage at
    full stroke and the wing folded to its cruise position.  In the hover
    configuration both radii are zero (everything is aligned with the
    rotation axis).
    """

    m: float = 2.7             # total vehicle mass [kg]
    m_wing: float = 0.34       # combined mass of both wings [kg]
    m_rail: float = 0.51       # mass of the rail-mounted assembly [kg]
    r_rail: float = 0.05       # rail CG offset from the body CG [m]
    r_wing: float = 0.08       # wing CG offset from the body CG [m]
    servo_stroke: float = 0.05  # linear servo travel shifting the CoP [m]

    def __post_init__(self):
        for name in ("m", "m_wing", "m_rail"):
            if getattr(self, name) <= 0.0:
                raise ConfigurationError(f"MassLayout.{name} must be positive")
        if self.m_wing + self.m_rail >= self.m:
            raise ConfigurationError("movable masses must be lighter than the vehicle")
        if self.servo_stroke < 0.0:
            raise ConfigurationError("servo_stroke must be >= 0")


def cg_shift(layout: MassLayout) -> float:
    """CG displacement along x: mass-weighted mean of the movable offsets."""
    return (layout.m_rail * layout.r_rail + layout.m_wing * layout.r_wing) / layout.m


def max_cop_cg_offset(layout: MassLayout) -> float:
    """Largest achievable CoP-to-CG distance: servo stroke minus the CG chase.

    Shifting the CoP aft drags the CG the same direction, so the usable
    offset is the stroke reduced by the CG displacement it causes.
    """
    return layout.servo_stroke - cg_shift(layout)
