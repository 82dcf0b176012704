"""Particle swarm search for charger positions.

A particle encodes ``k`` chargers as a flat vector ``[x1, y1, ..., xk, yk]``.
Fitness is lexicographic: first the number of satisfied nodes, then the
normalised margin ``sum(min(P_h, P_req)) / (N * P_req)`` which rewards
progress on nodes still below the requirement. :func:`pso_place` grows ``k``
from 1 until the best particle satisfies every node.

Optional look-ahead nodes add their own normalised margin to the secondary
key without counting towards satisfaction. The divide-and-conquer solver
passes the nodes of clusters not yet solved, so that among equally good
placements the swarm prefers the one that also feeds its neighbours. With
look-ahead nodes the swarm keeps iterating after full satisfaction; without
them it stops as soon as every node is satisfied.

Each particle draws its random coefficients from its own PCG64 stream, so
results do not depend on the order in which particles are evaluated.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from rfcharge.errors import ConfigurationError, InfeasibleError
from rfcharge.model import PowerModel, PowerProfile, RadioParams, pattern_radii, required_power
from rfcharge.scenario import Placement

__all__ = [
    "PsoConfig",
    "PsoResult",
    "Region",
    "Swarm",
    "fitness",
    "init_swarm",
    "pso_place",
    "pso_step",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PsoConfig:
    """Swarm hyperparameters.

    Defaults are the Clerc-Kennedy constriction settings. ``restarts`` is the
    number of independent swarms tried for each ``k`` before moving on to
    ``k + 1``; ``k_cap`` bounds the charger count (``None`` means 4N).
    """

    w: float = 0.7298
    phi_p: float = 1.49618
    phi_g: float = 1.49618
    swarm_size: int = 40
    max_iters: int = 200
    seed: int = 0
    restarts: int = 1
    k_cap: int | None = None

    def __post_init__(self):
        if self.swarm_size < 2:
            raise ConfigurationError("swarm_size must be at least 2")
        if self.max_iters < 1:
            raise ConfigurationError("max_iters must be at least 1")
        if self.restarts < 1:
            raise ConfigurationError("restarts must be at least 1")
        if min(self.w, self.phi_p, self.phi_g) < 0:
            raise ConfigurationError("w, phi_p and phi_g must be non-negative")


@dataclass(frozen=True)
class Region:
    """Axis-aligned search rectangle, optionally restricted to a disc."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float
    disc_center: tuple | None = None
    disc_radius: float | None = None

    def __post_init__(self):
        if self.xmax < self.xmin or self.ymax < self.ymin:
            raise ConfigurationError("empty search region")

    @classmethod
    def field(cls, width, height) -> "Region":
        return cls(0.0, 0.0, float(width), float(height))

    @property
    def low(self):
        return np.array([self.xmin, self.ymin])

    @property
    def high(self):
        return np.array([self.xmax, self.ymax])

    def in_disc(self, pts) -> np.ndarray:
        """Boolean mask over ``pts[..., 2]``; all True without a disc."""
        pts = np.asarray(pts, dtype=float)
        if self.disc_center is None:
            return np.ones(pts.shape[:-1], dtype=bool)
        d = np.hypot(pts[..., 0] - self.disc_center[0], pts[..., 1] - self.disc_center[1])
        return d <= self.disc_radius * (1 + 1e-12)


@dataclass
class Swarm:
    position: np.ndarray  # (S, 2k)
    velocity: np.ndarray
    best_position: np.ndarray
    best_count: np.ndarray  # (S,)
    best_margin: np.ndarray
    low: np.ndarray  # (2k,)
    high: np.ndarray
    rngs: list
    global_position: np.ndarray = field(default=None)
    global_count: float = -1.0
    global_margin: float = -np.inf
    iteration: int = 0

    def __post_init__(self):
        if self.global_position is None:
            self._update_global()

    def _update_global(self):
        g = _lex_argmax(self.best_count, self.best_margin)
        if self.global_position is None or _better(
            self.best_count[g], self.best_margin[g], self.global_count, self.global_margin
        ):
            self.global_position = self.best_position[g].copy()
            self.global_count = float(self.best_count[g])
            self.global_margin = float(self.best_margin[g])


def _better(c1, m1, c0, m0):
    return (c1 > c0) | ((c1 == c0) & (m1 > m0))


def _lex_argmax(count, margin):
    top = np.flatnonzero(count == count.max())
    return int(top[np.argmax(margin[top])])


def _particle_rngs(seed, n, *key):
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, *[int(k) for k in key]])
    return [np.random.Generator(np.random.PCG64(child)) for child in ss.spawn(n)]


def init_swarm(low, high, config: PsoConfig, fitness_fn, rngs=None) -> Swarm:
    """Uniform positions over the box and velocities in ``[-span/2, span/2]``."""
    low = np.asarray(low, dtype=float)
    high = np.asarray(high, dtype=float)
    dim = len(low)
    if rngs is None:
        rngs = _particle_rngs(config.seed, config.swarm_size)
    span = high - low
    pos = np.empty((config.swarm_size, dim))
    vel = np.empty_like(pos)
    for i, rng in enumerate(rngs):
        pos[i] = low + rng.random(dim) * span
        vel[i] = (rng.random(dim) - 0.5) * span
    count, margin = fitness_fn(pos)
    return Swarm(pos, vel, pos.copy(), count.astype(float), margin.astype(float), low, high, rngs)


def pso_step(swarm: Swarm, config: PsoConfig, fitness_fn) -> Swarm:
    """One velocity/position update of every particle, in place.

    ``v <- w v + phi_p r_p (p_i - x) + phi_g r_g (p_g - x)`` with fresh
    per-component ``r_p, r_g ~ U(0, 1)``, then ``x <- x + v``. Coordinates
    leaving the box are clamped and that velocity component is zeroed.
    """
    n, dim = swarm.position.shape
    rp = np.empty((n, dim))
    rg = np.empty((n, dim))
    for i, rng in enumerate(swarm.rngs):
        rp[i] = rng.random(dim)
        rg[i] = rng.random(dim)
    x = swarm.position
    v = (
        config.w * swarm.velocity
        + config.phi_p * rp * (swarm.best_position - x)
        + config.phi_g * rg * (swarm.global_position[None, :] - x)
    )
    x = x + v
    out = (x < swarm.low) | (x > swarm.high)
    x = np.clip(x, swarm.low, swarm.high)
    v[out] = 0.0
    count, margin = fitness_fn(x)
    improved = _better(count, margin, swarm.best_count, swarm.best_margin)
    swarm.best_position[improved] = x[improved]
    swarm.best_count[improved] = count[improved]
    swarm.best_margin[improved] = margin[improved]
    swarm.position = x
    swarm.velocity = v
    swarm.iteration += 1
    swarm._update_global()
    return swarm


class ChargerEvaluator:
    """Batched harvested power at a fixed node set for many candidate sets.

    Fixed chargers are folded into a per-node base state once; candidates
    then cost O(S * k * N) per evaluation.
    """

    def __init__(self, nodes, params: RadioParams, profile: PowerProfile, model, fixed=None):
        self.nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
        self.params = params
        self.model = PowerModel.parse(model)
        self.req = required_power(profile)
        self.r1 = pattern_radii(params, profile)[0]
        n = len(self.nodes)
        self.base = np.zeros(n, dtype=complex if self.model is PowerModel.SUPERPOSITION else float)
        fixed = np.zeros((0, 2)) if fixed is None else np.asarray(fixed, dtype=float).reshape(-1, 2)
        if len(fixed):
            self.base = self._combine(self.base, fixed[None])[0]

    def _contrib(self, chargers):
        # chargers: (S, k, 2) -> per-charger terms (S, k, N)
        dx = chargers[..., :, None, 0] - self.nodes[None, None, :, 0]
        dy = chargers[..., :, None, 1] - self.nodes[None, None, :, 1]
        d = np.hypot(dx, dy)
        amp = self.params.rho / (d + self.params.epsilon_m) ** 2
        if self.model is PowerModel.SUPERPOSITION:
            return amp * np.exp(-1j * self.params.wavenumber * d)
        if self.model is PowerModel.DISK:
            return np.where(d <= self.r1, amp, 0.0)
        return amp

    def _combine(self, base, chargers):
        terms = self._contrib(chargers)
        if self.model is PowerModel.DISK:
            if terms.shape[1] == 0:
                return np.broadcast_to(base, terms.shape[:1] + base.shape).copy()
            return np.maximum(base[None, :], terms.max(axis=1))
        return base[None, :] + terms.sum(axis=1)

    def power(self, chargers) -> np.ndarray:
        """``chargers`` of shape (S, k, 2) -> harvested power (S, N)."""
        state = self._combine(self.base, np.asarray(chargers, dtype=float))
        return np.abs(state) if self.model is PowerModel.SUPERPOSITION else state

    def base_power(self) -> np.ndarray:
        return np.abs(self.base) if self.model is PowerModel.SUPERPOSITION else self.base.copy()

    def score(self, chargers):
        """Return ``(count, margin)`` arrays of shape (S,).

        ``margin`` is normalised to [0, 1] by ``N * P_req``.
        """
        p = self.power(chargers)
        count = np.count_nonzero(p >= self.req, axis=1).astype(float)
        margin = np.minimum(p, self.req).sum(axis=1) / (len(self.nodes) * self.req)
        return count, margin


def fitness(nodes, chargers, params: RadioParams, profile: PowerProfile, model=PowerModel.SUPERPOSITION):
    """Lexicographic fitness of one charger set: ``(satisfied_count, margin)``."""
    ev = ChargerEvaluator(nodes, params, profile, model)
    chargers = np.asarray(chargers, dtype=float).reshape(1, -1, 2)
    count, margin = ev.score(chargers)
    return int(count[0]), float(margin[0])


@dataclass
class PsoResult:
    placement: Placement  # the k new chargers (fixed ones excluded)
    k: int
    best_counts: dict  # k -> best satisfied count reached
    iterations: int


def _run_swarm(ev: ChargerEvaluator, region: Region, k: int, config: PsoConfig, rngs, ahead=None):
    n = len(ev.nodes)
    low = np.tile(region.low, k)
    high = np.tile(region.high, k)

    def fit(flat):
        ch = flat.reshape(len(flat), k, 2)
        count, margin = ev.score(ch)
        if ahead is not None:
            margin = margin + ahead.score(ch)[1]
        bad = ~region.in_disc(ch).all(axis=1)
        count[bad] = -1.0
        margin[bad] = -np.inf
        return count, margin

    swarm = init_swarm(low, high, config, fit, rngs=rngs)
    while swarm.iteration < config.max_iters:
        if swarm.global_count >= n and ahead is None:
            break
        pso_step(swarm, config, fit)
    return swarm


def pso_place(
    nodes,
    region: Region,
    params: RadioParams,
    profile: PowerProfile,
    model=PowerModel.SUPERPOSITION,
    config: PsoConfig = PsoConfig(),
    fixed_chargers=None,
    stream: tuple = (),
    lookahead=None,
) -> PsoResult:
    """Smallest ``k`` whose best swarm satisfies every node in ``nodes``.

    ``fixed_chargers`` contribute power but are not moved or returned.
    ``stream`` is appended to the seed so callers can run many independent
    searches under one configured seed. ``lookahead`` nodes only shape the
    secondary key (see module docstring).

    Raises
    ------
    InfeasibleError
        If ``k`` exceeds ``config.k_cap`` (default 4N) without success.
    """
    nodes = np.asarray(nodes, dtype=float).reshape(-1, 2)
    if isinstance(fixed_chargers, Placement):
        fixed_chargers = fixed_chargers.chargers
    ev = ChargerEvaluator(nodes, params, profile, model, fixed_chargers)
    ahead = None
    if lookahead is not None and len(lookahead):
        ahead = ChargerEvaluator(lookahead, params, profile, model, fixed_chargers)
    n = len(nodes)
    base = ev.base_power()
    best_counts = {0: int(np.count_nonzero(base >= ev.req))}
    if best_counts[0] == n:
        return PsoResult(Placement(), 0, best_counts, 0)
    cap = config.k_cap if config.k_cap is not None else 4 * n
    iterations = 0
    for k in range(1, cap + 1):
        best = None
        for attempt in range(config.restarts):
            rngs = _particle_rngs(config.seed, config.swarm_size, *stream, k, attempt)
            swarm = _run_swarm(ev, region, k, config, rngs, ahead)
            iterations += swarm.iteration
            if best is None or _better(swarm.global_count, swarm.global_margin, best.global_count, best.global_margin):
                best = swarm
            if swarm.global_count >= n:
                break
        best_counts[k] = int(best.global_count)
        log.debug("k=%d best %d/%d", k, best_counts[k], n)
        if best.global_count >= n:
            return PsoResult(Placement(best.global_position.reshape(k, 2)), k, best_counts, iterations)
    unsatisfied = np.flatnonzero(base < ev.req).tolist()
    raise InfeasibleError(f"no placement with up to {cap} chargers satisfies all {n} nodes", unsatisfied)
