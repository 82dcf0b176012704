"""Divide-and-conquer placement: QT clustering followed by per-cluster PSO.

Nodes are grouped with Quality Threshold clustering using the contributive
radius ``R``, the distance at which a single charger still delivers
``delta * P_req``. Clusters are then solved one after another in commit
order. Every charger already committed keeps contributing power to later
clusters, so neighbouring clusters share chargers.

Under phasor superposition a new charger can push an earlier node below the
requirement. By default each cluster's swarm is therefore scored on its own
members plus every node from earlier clusters. A final check over all nodes
triggers a field-wide repair search if anything is still short. Each
cluster's swarm also sees the nodes of clusters not yet solved as a
look-ahead term of its secondary key.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from rfcharge.errors import ConfigurationError, InfeasibleError
from rfcharge.model import PowerModel, PowerProfile, RadioParams, c_radius, harvested_power, required_power
from rfcharge.pso import PsoConfig, Region, pso_place
from rfcharge.scenario import Placement, Scenario

__all__ = ["Cluster", "DncConfig", "DncResult", "dnc_place", "qt_cluster", "search_region"]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cluster:
    head: int
    members: tuple  # node indices, ascending
    region: Region | None = None


@dataclass(frozen=True)
class DncConfig:
    delta: float = 0.5
    pso: PsoConfig = field(default_factory=PsoConfig)
    protect_committed: bool = True
    lookahead: bool = True
    max_repairs: int = 3

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ConfigurationError(f"delta must lie in (0, 1), got {self.delta}")


@dataclass
class DncResult:
    placement: Placement
    clusters: list
    added_per_cluster: list
    repairs: int = 0


def search_region(head, radius: float, width: float, height: float) -> Region:
    """Bounding square of the disc around ``head``, clipped to the field."""
    hx, hy = float(head[0]), float(head[1])
    return Region(
        max(0.0, hx - radius),
        max(0.0, hy - radius),
        min(float(width), hx + radius),
        min(float(height), hy + radius),
        disc_center=(hx, hy),
        disc_radius=float(radius),
    )


def qt_cluster(scenario: Scenario, radius: float) -> list:
    """Quality Threshold clustering with a fixed neighbourhood radius.

    Each round builds, for every unclustered node, the candidate of all
    unclustered nodes within ``radius`` of it, and commits the largest one
    (lowest head index on ties). Returns clusters in commit order.
    """
    if not radius > 0:
        raise ConfigurationError("cluster radius must be positive")
    pts = scenario.nodes
    diff = pts[:, None, :] - pts[None, :, :]
    near = np.hypot(diff[..., 0], diff[..., 1]) <= radius
    free = np.ones(len(pts), dtype=bool)
    clusters = []
    while free.any():
        idx = np.flatnonzero(free)
        sizes = near[np.ix_(idx, idx)].sum(axis=1)
        head = int(idx[np.argmax(sizes)])
        members = np.flatnonzero(near[head] & free)
        free[members] = False
        clusters.append(
            Cluster(head, tuple(members.tolist()), search_region(pts[head], radius, scenario.width, scenario.height))
        )
    return clusters


def dnc_place(
    scenario: Scenario,
    params: RadioParams,
    profile: PowerProfile,
    model=PowerModel.SUPERPOSITION,
    config: DncConfig = DncConfig(),
) -> DncResult:
    """Cluster the nodes and place chargers cluster by cluster.

    Raises
    ------
    InfeasibleError
        With ``context`` naming the cluster whose search failed.
    """
    model = PowerModel.parse(model)
    radius = c_radius(params, profile, config.delta)
    clusters = qt_cluster(scenario, radius)
    nodes = scenario.nodes
    chargers = np.zeros((0, 2))
    committed: list = []
    added = []
    for m, cl in enumerate(clusters):
        committed.extend(cl.members)
        targets = sorted(committed) if config.protect_committed else list(cl.members)
        ahead = None
        if config.lookahead:
            pending = np.ones(scenario.n, dtype=bool)
            pending[committed] = False
            ahead = nodes[pending]
        try:
            res = pso_place(
                nodes[targets], cl.region, params, profile, model, config.pso, chargers, stream=(m,), lookahead=ahead
            )
        except InfeasibleError as exc:
            exc.context = f"cluster {m} (head node {cl.head})"
            exc.unsatisfied = [targets[i] for i in exc.unsatisfied]
            raise
        chargers = np.vstack([chargers, res.placement.chargers])
        added.append(res.k)
        log.debug("cluster %d: %d members, %d new chargers", m, len(cl.members), res.k)

    req = required_power(profile)
    full = Region.field(scenario.width, scenario.height)
    repairs = 0
    while True:
        short = np.flatnonzero(harvested_power(model, params, nodes, chargers, profile) < req)
        if len(short) == 0:
            break
        if repairs >= config.max_repairs:
            raise InfeasibleError(
                f"{len(short)} node(s) still unsatisfied after {repairs} repair passes",
                short.tolist(),
                "repair",
            )
        log.info("repair pass %d for %d node(s)", repairs + 1, len(short))
        res = pso_place(nodes, full, params, profile, model, config.pso, chargers, stream=(len(clusters), repairs))
        chargers = np.vstack([chargers, res.placement.chargers])
        repairs += 1
    return DncResult(Placement(chargers), clusters, added, repairs)
