import math

import numpy as np
import pytest

from rfcharge.errors import InfeasibleError
from rfcharge.model import PowerProfile, RadioParams, pattern_radii
from rfcharge.pso import PsoConfig, Region, fitness, init_swarm, pso_place, pso_step

RADIO = RadioParams()
HALF = PowerProfile(alpha=0.5)


def sphere(x):
    """Maximise -|x - 1|^2 expressed as (count, margin) with a constant count."""
    return np.zeros(len(x)), -((x - 1.0) ** 2).sum(axis=1)


def test_zero_coefficients_freeze_positions():
    cfg = PsoConfig(w=0.0, phi_p=0.0, phi_g=0.0, swarm_size=5)
    sw = init_swarm(np.zeros(4), np.full(4, 3.0), cfg, sphere)
    before = sw.position.copy()
    pso_step(sw, cfg, sphere)
    assert np.array_equal(sw.velocity, np.zeros_like(sw.velocity))
    assert np.array_equal(sw.position, before)


def test_fixed_point_when_collapsed_on_global_best():
    cfg = PsoConfig(swarm_size=4)
    sw = init_swarm(np.zeros(2), np.full(2, 3.0), cfg, sphere)
    sw.position[:] = 1.0
    sw.best_position[:] = 1.0
    sw.velocity[:] = 0.0
    sw.global_position = np.ones(2)
    pso_step(sw, cfg, sphere)
    assert np.array_equal(sw.position, np.ones((4, 2)))


def test_seeded_trajectories_identical():
    cfg = PsoConfig(seed=9, swarm_size=8)
    runs = []
    for _ in range(2):
        sw = init_swarm(np.zeros(6), np.full(6, 4.0), cfg, sphere)
        for _ in range(20):
            pso_step(sw, cfg, sphere)
        runs.append(sw.global_position.copy())
    assert np.array_equal(runs[0], runs[1])


def test_best_nondecreasing_and_clamped():
    cfg = PsoConfig(seed=1, swarm_size=10)
    sw = init_swarm(np.zeros(4), np.full(4, 0.5), cfg, sphere)  # optimum outside box
    last = -np.inf
    for _ in range(50):
        pso_step(sw, cfg, sphere)
        assert sw.global_margin >= last
        last = sw.global_margin
        assert np.all(sw.position >= 0) and np.all(sw.position <= 0.5)
    assert np.allclose(sw.global_position, 0.5, atol=1e-6)


def test_fitness_basics():
    nodes = np.array([[1.0, 1.0], [3.0, 3.0]])
    assert fitness(nodes, np.zeros((0, 2)), RADIO, HALF) == (0, 0.0)
    count, margin = fitness(nodes, nodes, RADIO, HALF)
    assert count == 2 and margin == pytest.approx(1.0)
    a = fitness(nodes, [[1.2, 1.0], [2.0, 2.5]], RADIO, HALF)
    b = fitness(nodes, [[2.0, 2.5], [1.2, 1.0]], RADIO, HALF)
    assert a[0] == b[0] and a[1] == pytest.approx(b[1], rel=1e-12)


def test_single_node_k1_within_r1():
    node = np.array([[2.0, 2.0]])
    res = pso_place(node, Region.field(4, 4), RADIO, HALF, config=PsoConfig(seed=3))
    assert res.k == 1
    assert math.dist(res.placement.chargers[0], node[0]) <= pattern_radii(RADIO, HALF)[0] + 1e-9


def test_already_satisfied_returns_empty():
    node = np.array([[2.0, 2.0]])
    res = pso_place(node, Region.field(4, 4), RADIO, HALF, fixed_chargers=[[2.0, 2.1]])
    assert res.k == 0 and len(res.placement) == 0


def test_records_k_minus_one_shortfall():
    nodes = np.array([[0.5, 0.5], [5.5, 5.5]])
    res = pso_place(nodes, Region.field(6, 6), RADIO, HALF, config=PsoConfig(seed=0))
    assert res.k == 2
    assert res.best_counts[1] < 2 and res.best_counts[2] == 2


def test_disc_constraint_respected():
    region = Region(0, 0, 4, 4, disc_center=(2.0, 2.0), disc_radius=1.0)
    nodes = np.array([[2.0, 2.8], [2.0, 1.2]])
    res = pso_place(nodes, region, RADIO, HALF, config=PsoConfig(seed=5))
    assert region.in_disc(res.placement.chargers).all()


def test_cap_raises():
    nodes = np.array([[2.0, 2.0]])
    impossible = PowerProfile(pa_w=1.0, pq_w=0.5, alpha=1.0)
    with pytest.raises(InfeasibleError):
        pso_place(nodes, Region.field(4, 4), RADIO, impossible, config=PsoConfig(k_cap=2, max_iters=5))


def test_pso_place_deterministic():
    rng = np.random.default_rng(0)
    nodes = rng.random((10, 2)) * 5
    cfg = PsoConfig(seed=12)
    a = pso_place(nodes, Region.field(5, 5), RADIO, HALF, config=cfg)
    b = pso_place(nodes, Region.field(5, 5), RADIO, HALF, config=cfg)
    assert a.placement == b.placement
