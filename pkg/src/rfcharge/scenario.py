"""Surveillance-field scenarios and charger placements, plus their JSON files.

Random layouts use numpy's PCG64 generator so a seed reproduces the same
scenario on every platform. Coordinates are written with Python's shortest
round-trip float repr, so save/load is lossless.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rfcharge.errors import ScenarioFormatError

__all__ = [
    "Placement",
    "Scenario",
    "generate_random",
    "generate_regular",
    "load_placement",
    "load_scenario",
    "save_placement",
    "save_scenario",
]


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.size == 0:
        return np.zeros((0, 2))
    return arr.reshape(-1, 2)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Rectangular field ``[0, width] x [0, height]`` holding N sensor nodes."""

    width: float
    height: float
    nodes: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        nodes = _as_points(self.nodes)
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        if not (self.width > 0 and self.height > 0):
            raise ScenarioFormatError("field dimensions must be positive")
        if len(nodes) == 0:
            raise ScenarioFormatError("scenario needs at least one node")
        outside = np.flatnonzero(~self.contains(nodes))
        if len(outside):
            raise ScenarioFormatError(
                f"node(s) {[int(i) + 1 for i in outside[:5]]} lie outside the "
                f"{self.width} x {self.height} field"
            )

    def __eq__(self, other):
        if not isinstance(other, Scenario):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and self.seed == other.seed
            and np.array_equal(self.nodes, other.nodes)
        )

    @property
    def n(self) -> int:
        return len(self.nodes)

    def contains(self, points) -> np.ndarray:
        pts = _as_points(points)
        return (pts[:, 0] >= 0) & (pts[:, 0] <= self.width) & (pts[:, 1] >= 0) & (pts[:, 1] <= self.height)

    def subset(self, indices) -> "Scenario":
        return Scenario(self.width, self.height, self.nodes[np.asarray(indices, dtype=int)], self.seed)


@dataclass(frozen=True, eq=False)
class Placement:
    """Ordered charger coordinates. Duplicates are allowed."""

    chargers: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))

    def __post_init__(self):
        pts = _as_points(self.chargers)
        pts.setflags(write=False)
        object.__setattr__(self, "chargers", pts)

    def __len__(self):
        return len(self.chargers)

    def __eq__(self, other):
        if not isinstance(other, Placement):
            return NotImplemented
        return np.array_equal(self.chargers, other.chargers)

    def extend(self, more) -> "Placement":
        return Placement(np.vstack([self.chargers, _as_points(more)]))


def generate_regular(width: float, height: float, n: int) -> Scenario:
    """Place ``n`` nodes on a sqrt(n) x sqrt(n) lattice at cell centers.

    Pitch is ``width/sqrt(n)`` along x and ``height/sqrt(n)`` along y, so the
    outermost nodes sit half a pitch inside the field.
    """
    side = math.isqrt(int(n)) if n > 0 else 0
    if n < 1 or side * side != n:
        raise ValueError(f"regular layout needs a positive perfect-square node count, got {n}")
    xs = (np.arange(side) + 0.5) * (width / side)
    ys = (np.arange(side) + 0.5) * (height / side)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    return Scenario(width, height, np.column_stack([gx.ravel(), gy.ravel()]))


def generate_random(width: float, height: float, n: int, seed: int = 0) -> Scenario:
    """Scatter ``n`` nodes uniformly over the field using PCG64(seed)."""
    if n < 1:
        raise ValueError("node count must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    pts = rng.random((n, 2)) * np.array([width, height])
    return Scenario(width, height, pts, seed=int(seed))


def _points_from_json(raw, what, path):
    if not isinstance(raw, list):
        raise ScenarioFormatError(f"{path}: '{what}' must be a list of [x, y] pairs")
    pts = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, (list, tuple))
            or len(item) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in item)
        ):
            raise ScenarioFormatError(f"{path}: {what}[{i}] is not a numeric [x, y] pair: {item!r}")
        pts.append([float(item[0]), float(item[1])])
    return _as_points(pts)


def _read_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioFormatError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def _write_json(doc, path):
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def scenario_to_dict(s: Scenario) -> dict:
    doc = {
        "field": {"width": float(s.width), "height": float(s.height)},
        "nodes": s.nodes.tolist(),
    }
    if s.seed is not None:
        doc["seed"] = s.seed
    return doc


def save_scenario(s: Scenario, path) -> None:
    _write_json(scenario_to_dict(s), path)


def load_scenario(path) -> Scenario:
    doc = _read_json(path)
    if not isinstance(doc, dict):
        raise ScenarioFormatError(f"{path}: top level must be an object")
    fld = doc.get("field")
    if not isinstance(fld, dict) or "width" not in fld or "height" not in fld:
        raise ScenarioFormatError(f"{path}: missing 'field' with 'width' and 'height'")
    if "nodes" not in doc:
        raise ScenarioFormatError(f"{path}: missing 'nodes'")
    nodes = _points_from_json(doc["nodes"], "nodes", path)
    seed = doc.get("seed")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool)):
        raise ScenarioFormatError(f"{path}: 'seed' must be an integer")
    try:
        return Scenario(float(fld["width"]), float(fld["height"]), nodes, seed)
    except ScenarioFormatError as exc:
        raise ScenarioFormatError(f"{path}: {exc}") from None


def save_placement(p: Placement, path, field_dims=None) -> None:
    doc = {"chargers": p.chargers.tolist()}
    if field_dims is not None:
        doc["field"] = {"width": float(field_dims[0]), "height": float(field_dims[1])}
    _write_json(doc, path)


def load_placement(path):
    """Return ``(Placement, (width, height) or None)``."""
    doc = _read_json(path)
    if not isinstance(doc, dict) or "chargers" not in doc:
        raise ScenarioFormatError(f"{path}: missing 'chargers'")
    fld = doc.get("field")
    dims = None
    if isinstance(fld, dict) and "width" in fld and "height" in fld:
        dims = (float(fld["width"]), float(fld["height"]))
    return Placement(_points_from_json(doc["chargers"], "chargers", path)), dims
