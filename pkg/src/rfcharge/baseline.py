"""Equilateral-triangle charger lattices used as area-coverage baselines.

A lattice with side ``sqrt(3) * r`` puts every point of the plane within
``r`` of some vertex (the triangle circumradius). Sizing ``r`` by ``r3``
makes three equidistant chargers sum to ``P_req`` at each triangle centroid
under scalar summation; sizing by ``r1`` gives single-charger disk coverage.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from rfcharge.errors import ConfigurationError
from rfcharge.model import PowerModel, PowerProfile, RadioParams, harvested_power, pattern_radii, required_power
from rfcharge.scenario import Placement, Scenario

__all__ = ["LatticeSpec", "Pattern", "evaluate_pattern", "pattern_spec", "triangle_lattice"]


class Pattern(enum.Enum):
    TRIANGLE_SUMMATION = "triangle-summation"
    TRIANGLE_DISK = "triangle-disk"

    @classmethod
    def parse(cls, value) -> "Pattern":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                f"unknown pattern {value!r} (choose from {', '.join(p.value for p in cls)})"
            ) from None


@dataclass(frozen=True)
class LatticeSpec:
    pattern: Pattern
    radius: float
    width: float
    height: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ConfigurationError("lattice radius must be positive")


def pattern_spec(pattern, params: RadioParams, profile: PowerProfile, width: float, height: float) -> LatticeSpec:
    """Size a pattern from the recharge model: ``r3`` for summation, ``r1`` for disk."""
    pattern = Pattern.parse(pattern)
    r1, r3 = pattern_radii(params, profile)
    radius = r3 if pattern is Pattern.TRIANGLE_SUMMATION else r1
    return LatticeSpec(pattern, radius, width, height)


def triangle_lattice(spec: LatticeSpec) -> Placement:
    """Vertices of a triangular lattice anchored at the field origin.

    Vertices inside the field grown by one lattice pitch on every side are
    kept; those outside the field are projected onto its boundary, which
    never increases their distance to any field point. If one charger at
    the center already covers the field, that single charger is returned.
    """
    w, h, r = spec.width, spec.height, spec.radius
    if r >= math.hypot(w, h) / 2:
        return Placement(np.array([[w / 2, h / 2]]))
    side = math.sqrt(3.0) * r
    row_h = side * math.sqrt(3.0) / 2
    pts = []
    for j in range(math.ceil(-side / row_h), math.floor((h + side) / row_h) + 1):
        y = j * row_h
        shift = 0.5 * side if j % 2 else 0.0
        for i in range(math.ceil((-side - shift) / side), math.floor((w + side - shift) / side) + 1):
            x = i * side + shift
            pts.append((min(max(x, 0.0), w), min(max(y, 0.0), h)))
    # Snapping can merge vertices; keep the first occurrence.
    seen = set()
    unique = []
    for p in pts:
        if p not in seen:
            seen.add(p)
            unique.append(p)
    return Placement(np.array(unique))


def evaluate_pattern(placement, scenario: Scenario, params: RadioParams, profile: PowerProfile, eval_model) -> float:
    """Fraction of nodes meeting ``P_req`` under ``eval_model``."""
    chargers = placement.chargers if isinstance(placement, Placement) else placement
    power = harvested_power(eval_model, params, scenario.nodes, chargers, profile)
    return float(np.count_nonzero(power >= required_power(profile)) / scenario.n)
