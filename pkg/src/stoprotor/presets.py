"""Built-in flight gain presets.

``FLIGHT`` carries the full multicopter (MC) and fixed-wing (FWC) gain
tables used on the vehicle, including saturation and integral-windup
columns.  The energy loops of the FWC set have no plant in the simplified
model; they are stored for completeness but drive nothing here.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, Optional

from .controllers import CascadedGains, PidGains
from .errors import ConfigurationError


@dataclass(frozen=True)
class GainPreset:
    """Named table of PID loops for the MC and FWC controller modes."""

    name: str
    mc: Dict[str, PidGains]
    fwc: Dict[str, PidGains]
    units: Dict[str, str] = field(default_factory=dict)

    def loop(self, mode: str, name: str) -> PidGains:
        table = {"mc": self.mc, "fwc": self.fwc}.get(mode)
        if table is None or name not in table:
            raise ConfigurationError(f"unknown gain loop {mode}/{name}")
        return table[name]

    def cascade(self, mode: str, axis: str) -> CascadedGains:
        """Assemble the position/attitude loop and its rate loop as a cascade."""
        outer = self.loop(mode, axis)
        inner = self.loop(mode, _RATE_LOOP[axis])
        return CascadedGains(outer=outer, inner=inner)


_RATE_LOOP = {
    "roll": "roll_rate",
    "pitch": "pitch_rate",
    "yaw": "yaw_rate",
    "xy_pos": "xy_vel",
    "z_pos": "z_vel",
}

FLIGHT = GainPreset(
    name="flight",
    mc={
        "roll": PidGains(6.500, 0.000, 0.000, output_limits=(-3.840, 3.840)),
        "roll_rate": PidGains(0.150, 0.200, 0.003, output_limits=(-1.000, 1.000),
                              windup_limits=(-0.300, 0.300)),
        "pitch": PidGains(6.500, 0.000, 0.000, output_limits=(-3.840, 3.840)),
        "pitch_rate": PidGains(0.150, 0.200, 0.003, output_limits=(-1.000, 1.000),
                               windup_limits=(-0.300, 0.300)),
        "yaw": PidGains(2.800, 0.000, 0.000, output_limits=(-3.840, 3.840)),
        "yaw_rate": PidGains(0.200, 0.100, 0.000, output_limits=(-1.000, 1.000),
                             windup_limits=(-0.300, 0.300)),
        "xy_pos": PidGains(0.950, 0.000, 0.000),
        "xy_vel": PidGains(1.800, 0.400, 0.200, output_limits=(-12.000, 12.000)),
        "z_pos": PidGains(1.000, 0.000, 0.000, output_limits=(-1.500, 3.000)),
        "z_vel": PidGains(4.000, 2.000, 0.000),
    },
    fwc={
        "roll": PidGains(2.500, 0.000, 0.000, output_limits=(-1.221, 1.221)),
        "roll_rate": PidGains(0.050, 0.100, 0.000, windup_limits=(-0.200, 0.200)),
        "pitch": PidGains(2.500, 0.000, 0.000, output_limits=(-1.047, 1.047)),
        "pitch_rate": PidGains(0.080, 0.100, 0.000, windup_limits=(-0.400, 0.400)),
        "yaw": PidGains(2.500, 0.000, 0.000, output_limits=(-0.873, 0.873)),
        "yaw_rate": PidGains(0.050, 0.100, 0.000, windup_limits=(-0.200, 0.200)),
        "energy_rate": PidGains(0.050, 0.020, 0.000),
        "energy_balance": PidGains(0.100, 0.100, 0.000),
    },
    units={
        "mc/roll": "rad/s", "mc/roll_rate": "rad/s",
        "mc/pitch": "rad/s", "mc/pitch_rate": "rad/s",
        "mc/yaw": "rad/s", "mc/yaw_rate": "rad/s",
        "mc/xy_pos": "m", "mc/xy_vel": "m/s",
        "mc/z_pos": "m", "mc/z_vel": "m/s",
        "fwc/roll": "rad/s", "fwc/roll_rate": "rad/s",
        "fwc/pitch": "rad/s", "fwc/pitch_rate": "rad/s",
        "fwc/yaw": "rad/s", "fwc/yaw_rate": "rad/s",
    },
)

_BUILTIN = {FLIGHT.name: FLIGHT}


def _gains_from_dict(d: dict) -> PidGains:
    def pair(key):
        v = d.get(key)
        return tuple(v) if v is not None else None

    return PidGains(kp=float(d.get("kp", 0.0)), ki=float(d.get("ki", 0.0)),
                    kd=float(d.get("kd", 0.0)),
                    output_limits=pair("output_limits"),
                    windup_limits=pair("windup_limits"))


def preset_from_dict(data: dict) -> GainPreset:
    try:
        return GainPreset(
            name=data["name"],
            mc={k: _gains_from_dict(v) for k, v in data.get("mc", {}).items()},
            fwc={k: _gains_from_dict(v) for k, v in data.get("fwc", {}).items()},
            units=dict(data.get("units", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ConfigurationError(f"malformed gain preset: {exc}") from exc


def load_preset(source: str) -> GainPreset:
    """Resolve a preset by built-in name or from a JSON file path."""
    if source in _BUILTIN:
        return _BUILTIN[source]
    try:
        with open(source, "r", encoding="utf-8") as fh:
            return preset_from_dict(json.load(fh))
    except OSError as exc:
        raise ConfigurationError(f"unknown preset or unreadable file: {source}") from exc
