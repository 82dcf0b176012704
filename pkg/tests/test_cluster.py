import numpy as np
import pytest

from rfcharge.cluster import DncConfig, dnc_place, qt_cluster, search_region
from rfcharge.evaluation import verify
from rfcharge.model import PowerProfile, RadioParams, c_radius
from rfcharge.pso import PsoConfig
from rfcharge.scenario import Scenario, generate_random, generate_regular

RADIO = RadioParams()
HALF = PowerProfile(alpha=0.5)


def _is_partition(clusters, n):
    members = [i for c in clusters for i in c.members]
    return sorted(members) == list(range(n))


def test_one_cluster_when_everything_is_close():
    s = Scenario(4, 4, [[1, 1], [1.2, 1.1], [0.9, 1.3]])
    cl = qt_cluster(s, 1.0)
    assert len(cl) == 1 and cl[0].members == (0, 1, 2)


def test_singletons_when_far_apart():
    s = Scenario(10, 10, [[1, 1], [5, 5], [9, 9]])
    cl = qt_cluster(s, 1.0)
    assert [c.members for c in cl] == [(0,), (1,), (2,)]


def test_hand_enumerated_three_nodes():
    # a=0 and b=1 within radius of each other, c=2 isolated
    s = Scenario(10, 10, [[1, 1], [1.5, 1], [8, 8]])
    cl = qt_cluster(s, 1.0)
    assert [c.members for c in cl] == [(0, 1), (2,)]
    assert cl[0].head == 0


def test_members_within_radius_and_partition():
    s = generate_random(12, 12, 80, seed=3)
    r = 2.0
    cl = qt_cluster(s, r)
    assert _is_partition(cl, s.n)
    for c in cl:
        d = np.hypot(*(s.nodes[list(c.members)] - s.nodes[c.head]).T)
        assert np.all(d <= r)
    sizes = [len(c.members) for c in cl]
    assert sizes[0] == max(sizes)


def test_cluster_count_nonincreasing_in_radius():
    s = generate_random(12, 12, 100, seed=1)
    counts = [len(qt_cluster(s, r)) for r in (0.5, 1.0, 1.5, 2.0, 3.0, 5.0)]
    assert counts == sorted(counts, reverse=True)


def test_search_region_clipping():
    full = search_region((6, 6), 1.0, 12, 12)
    assert (full.xmin, full.ymin, full.xmax, full.ymax) == (5, 5, 7, 7)
    corner = search_region((0, 0), 2.0, 12, 12)
    assert (corner.xmin, corner.ymin, corner.xmax, corner.ymax) == (0, 0, 2, 2)
    huge = search_region((3, 4), 100.0, 12, 12)
    assert (huge.xmin, huge.ymin, huge.xmax, huge.ymax) == (0, 0, 12, 12)


def test_dnc_feasible_and_deterministic():
    s = generate_random(6, 6, 25, seed=4)
    cfg = DncConfig(pso=PsoConfig(seed=2, max_iters=60))
    a = dnc_place(s, RADIO, HALF, config=cfg)
    b = dnc_place(s, RADIO, HALF, config=cfg)
    assert a.placement == b.placement
    assert verify(a.placement, s, RADIO, HALF, "superposition").sustainable_ratio == 1.0
    assert sum(a.added_per_cluster) + 0 <= len(a.placement)


def test_single_cluster_matches_plain_pso():
    from rfcharge.pso import pso_place

    s = Scenario(4, 4, [[2, 2], [2.3, 2.1], [1.8, 2.2]])
    cfg = DncConfig(pso=PsoConfig(seed=1), lookahead=False)
    res = dnc_place(s, RADIO, HALF, config=cfg)
    assert len(res.clusters) == 1
    direct = pso_place(s.nodes, res.clusters[0].region, RADIO, HALF, config=cfg.pso, stream=(0,))
    assert res.placement == direct.placement


def test_repair_pass_without_protection():
    # Without protecting earlier clusters, later chargers may break them;
    # the repair pass must still deliver a feasible placement.
    s = generate_regular(6, 6, 36)
    cfg = DncConfig(pso=PsoConfig(seed=0, max_iters=80), protect_committed=False, lookahead=False)
    res = dnc_place(s, RADIO, HALF, config=cfg)
    assert verify(res.placement, s, RADIO, HALF, "superposition").sustainable_ratio == 1.0


def test_delta_validation():
    with pytest.raises(ValueError):
        DncConfig(delta=1.0)
    assert c_radius(RADIO, HALF, DncConfig().delta) > 0
