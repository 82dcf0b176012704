"""Grid-based greedy charger placement.

The field is cut into square cells and chargers may only sit at cell
centers. Each round adds one charger at the grid point that leaves the most
nodes satisfied, given every charger placed so far. Per-node accumulators
(a complex phasor sum, a scalar sum or a running maximum depending on the
power model) make one round cost O(grid points x nodes).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from rfcharge.errors import ConfigurationError, InfeasibleError
from rfcharge.model import PowerModel, PowerProfile, RadioParams, pattern_radii, required_power
from rfcharge.scenario import Placement, Scenario

__all__ = ["Grid", "GreedyResult", "greedy_place", "satisfied_set"]

log = logging.getLogger(__name__)

TIE_BREAKS = ("index", "margin")


@dataclass(frozen=True)
class Grid:
    """Square cells of side ``cell_size`` tiling the field from ``origin``."""

    nx: int
    ny: int
    cell_size: float
    origin: tuple = (0.0, 0.0)

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ConfigurationError("grid needs at least one cell")
        if not self.cell_size > 0:
            raise ConfigurationError("cell size must be positive")

    @classmethod
    def for_field(cls, width: float, height: float, cell_size: float = 0.1) -> "Grid":
        if not cell_size > 0:
            raise ConfigurationError("cell size must be positive")
        nx = max(1, int(np.ceil(width / cell_size - 1e-9)))
        ny = max(1, int(np.ceil(height / cell_size - 1e-9)))
        return cls(nx, ny, float(cell_size))

    def points(self) -> np.ndarray:
        """Cell centers, row-major in ``(ix, iy)``; shape ``(nx*ny, 2)``."""
        xs = self.origin[0] + (np.arange(self.nx) + 0.5) * self.cell_size
        ys = self.origin[1] + (np.arange(self.ny) + 0.5) * self.cell_size
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()])


@dataclass
class GreedyResult:
    counts: np.ndarray  # (nx, ny) chargers per grid point
    placement: Placement
    satisfied_history: list


def satisfied_set(scenario: Scenario, placement, params: RadioParams, profile: PowerProfile, model) -> set:
    """Indices of nodes whose harvested power meets the requirement."""
    from rfcharge.model import harvested_power

    chargers = placement.chargers if isinstance(placement, Placement) else placement
    power = harvested_power(model, params, scenario.nodes, chargers, profile)
    return set(np.flatnonzero(power >= required_power(profile)).tolist())


class _Accumulator:
    """Per-node running state for one power model, batched over candidates."""

    def __init__(self, model, params, profile, nodes, candidates):
        self.model = model
        d = np.hypot(
            candidates[:, None, 0] - nodes[None, :, 0],
            candidates[:, None, 1] - nodes[None, :, 1],
        )
        amp = params.rho / (d + params.epsilon_m) ** 2
        if model is PowerModel.SUPERPOSITION:
            self.table = amp * np.exp(-1j * params.wavenumber * d)
            self.state = np.zeros(len(nodes), dtype=complex)
        elif model is PowerModel.SUMMATION:
            self.table = amp
            self.state = np.zeros(len(nodes))
        else:
            r1, _ = pattern_radii(params, profile)
            self.table = np.where(d <= r1, amp, 0.0)
            self.state = np.zeros(len(nodes))

    def trial(self):
        """Power at every node for every candidate added on top of the state."""
        if self.model is PowerModel.SUPERPOSITION:
            return np.abs(self.state[None, :] + self.table)
        if self.model is PowerModel.SUMMATION:
            return self.state[None, :] + self.table
        return np.maximum(self.state[None, :], self.table)

    def commit(self, j):
        if self.model is PowerModel.DISK:
            self.state = np.maximum(self.state, self.table[j])
        else:
            self.state = self.state + self.table[j]


def greedy_place(
    scenario: Scenario,
    params: RadioParams,
    profile: PowerProfile,
    model=PowerModel.SUPERPOSITION,
    grid: Grid | None = None,
    tie_break: str = "index",
) -> GreedyResult:
    """Place chargers one at a time until every node is satisfied.

    Parameters
    ----------
    tie_break : {"index", "margin"}
        Among grid points reaching the same satisfied count, ``"index"`` takes
        the lowest ``(ix, iy)``; ``"margin"`` first prefers the largest
        ``sum(min(P_h, P_req))`` and falls back to the index.

    Raises
    ------
    InfeasibleError
        When a round cannot increase the satisfied count.
    """
    model = PowerModel.parse(model)
    if tie_break not in TIE_BREAKS:
        raise ConfigurationError(f"tie_break must be one of {TIE_BREAKS}")
    if grid is None:
        grid = Grid.for_field(scenario.width, scenario.height)
    candidates = grid.points()
    req = required_power(profile)
    acc = _Accumulator(model, params, profile, scenario.nodes, candidates)
    counts = np.zeros(grid.nx * grid.ny, dtype=int)
    chosen = []
    history = []
    satisfied = 0
    n = scenario.n
    while satisfied < n:
        power = acc.trial()
        sat = np.count_nonzero(power >= req, axis=1)
        best = int(sat.max())
        if best <= satisfied:
            bad = np.flatnonzero(_state_power(acc) < req).tolist()
            raise InfeasibleError(
                f"greedy stalled at {satisfied}/{n} satisfied nodes after {len(chosen)} chargers",
                unsatisfied=bad,
            )
        ties = np.flatnonzero(sat == best)
        if tie_break == "margin" and len(ties) > 1:
            margin = np.minimum(power[ties], req).sum(axis=1)
            j = int(ties[np.argmax(margin)])
        else:
            j = int(ties[0])
        acc.commit(j)
        counts[j] += 1
        chosen.append(candidates[j])
        satisfied = best
        history.append(best)
        log.debug("charger %d at %s satisfies %d/%d", len(chosen), candidates[j], best, n)
    return GreedyResult(counts.reshape(grid.nx, grid.ny), Placement(np.array(chosen)), history)


def _state_power(acc: _Accumulator) -> np.ndarray:
    if acc.model is PowerModel.SUPERPOSITION:
        return np.abs(acc.state)
    return acc.state
