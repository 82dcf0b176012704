"""Charger placement for battery-free sensor networks powered by RF chargers.

Chargers are placed so that every node harvests at least the power needed to
sustain a designated duty cycle. Harvested power is computed with a
phase-aware multi-charger model in which per-charger contributions add as
complex phasors.
"""

from rfcharge.model import (
    PowerModel,
    PowerProfile,
    RadioParams,
    c_radius,
    combine_measured,
    harvested_power,
    joint_power,
    pattern_radii,
    required_power,
    single_charger_power,
)
from rfcharge.scenario import Placement, Scenario, generate_random, generate_regular

__version__ = "0.1.0"

__all__ = [
    "Placement",
    "PowerModel",
    "PowerProfile",
    "RadioParams",
    "Scenario",
    "c_radius",
    "combine_measured",
    "generate_random",
    "generate_regular",
    "harvested_power",
    "joint_power",
    "pattern_radii",
    "required_power",
    "single_charger_power",
]
