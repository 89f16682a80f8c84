import random

import pytest

from iovsim.clustering import assign_clusters
from iovsim.network import EnergyLedger, NetworkConfig, Position
from iovsim.routing import (
    DELIVERED,
    ENERGY_EXHAUSTED,
    NO_CANDIDATE,
    RouteTrace,
    candidates_same_cluster,
    next_hop,
    relative_trust,
    route,
)

from helpers import node_with_tl, random_connected_nodes, random_record

R = 100.0


def chain_nodes(spacing: float = 90.0, count: int = 5, energy: float = 100.0):
    """Dest at the origin plus count-1 relays strung east, one hop apart."""
    return {
        i: node_with_tl(i, Position(spacing * i, 0.0), tl=energy)
        for i in range(count)
    }


def cfg_for(nodes_count: int = 5) -> NetworkConfig:
    return NetworkConfig(node_count=nodes_count, area_side=1000.0, radio_range=R,
                         sector_count=4)


def test_relative_trust_worked_value():
    a = node_with_tl(0, Position(0.0, 0.0), 3.0)
    b = node_with_tl(1, Position(4.0, 0.0), 4.0)
    assert relative_trust(a, b) == pytest.approx(1.0 / (4.0 * 5.0))


def test_relative_trust_undefined_cases():
    a = node_with_tl(0, Position(1.0, 1.0), 1.0)
    b = node_with_tl(1, Position(1.0, 1.0), 1.0)
    with pytest.raises(ValueError):
        relative_trust(a, b)
    c = node_with_tl(2, Position(5.0, 1.0), 0.0)
    d = node_with_tl(3, Position(9.0, 1.0), 0.0)
    with pytest.raises(ValueError):
        relative_trust(c, d)


def test_same_cluster_filter_inverted_keeps_lens_interior():
    cur = node_with_tl(0, Position(0.0, 0.0), 1.0)
    dst = node_with_tl(1, Position(100.0, 0.0), 1.0)
    inside = node_with_tl(2, Position(50.0, 10.0), 1.0)
    outside = node_with_tl(3, Position(-50.0, 10.0), 1.0)
    mixed = node_with_tl(4, Position(120.0, 0.0), 1.0)
    members = [cur, dst, inside, outside, mixed]
    got = candidates_same_cluster(cur, dst, members, "inverted", radio_range=200.0)
    assert [n.id for n in got] == [2]


def test_same_cluster_filter_literal_keeps_far_side():
    cur = node_with_tl(0, Position(0.0, 0.0), 1.0)
    dst = node_with_tl(1, Position(100.0, 0.0), 1.0)
    inside = node_with_tl(2, Position(50.0, 10.0), 1.0)
    far_both = node_with_tl(3, Position(-120.0, 30.0), 1.0)
    members = [cur, dst, inside, far_both]
    got = candidates_same_cluster(cur, dst, members, "literal", radio_range=200.0)
    assert [n.id for n in got] == [3]


def test_same_cluster_filter_respects_range_and_liveness():
    cur = node_with_tl(0, Position(0.0, 0.0), 1.0)
    dst = node_with_tl(1, Position(100.0, 0.0), 1.0)
    inside = node_with_tl(2, Position(50.0, 10.0), 1.0)
    dead = node_with_tl(3, Position(55.0, 5.0), 1.0)
    dead.residual_energy = 0.0
    got = candidates_same_cluster(cur, dst, [inside, dead], "inverted", radio_range=30.0)
    assert got == []  # inside is beyond the 30 m radio, dead is dead
    got = candidates_same_cluster(cur, dst, [inside, dead], "inverted", radio_range=60.0)
    assert [n.id for n in got] == [2]


def test_next_hop_direct_delivery_wins():
    nodes = chain_nodes()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    got = next_hop(nodes[1], nodes[0], assignment, nodes, "inverted", R)
    assert got == 0


def test_next_hop_descends_one_ring_on_a_chain():
    nodes = chain_nodes()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(nodes[4], nodes[0], assignment, nodes, "inverted", R) == 3
    assert next_hop(nodes[3], nodes[0], assignment, nodes, "inverted", R) == 2


def test_next_hop_prefers_lower_ring_over_lateral():
    dest = node_with_tl(0, Position(0.0, 0.0), 1.0)
    cur = node_with_tl(1, Position(0.0, 250.0), 1.0)      # ring 3
    lower = node_with_tl(2, Position(0.0, 170.0), 1.0)    # ring 2, in range
    lateral = node_with_tl(3, Position(60.0, 240.0), 9.0)  # ring 3, in range
    nodes = {n.id: n for n in (dest, cur, lower, lateral)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) == 2


def test_next_hop_lateral_only_as_fallback():
    dest = node_with_tl(0, Position(0.0, 0.0), 1.0)
    cur = node_with_tl(1, Position(0.0, 250.0), 1.0)        # ring 3
    lateral = node_with_tl(2, Position(-240.0, 60.0), 1.0)  # ring 3, out of range
    nodes = {n.id: n for n in (dest, cur, lateral)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    # no lower ring and no reachable peer: stuck
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) is None
    near_lateral = node_with_tl(3, Position(-60.0, 240.0), 1.0)  # ring 3, in range
    nodes[3] = near_lateral
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) == 3


def test_next_hop_never_climbs():
    dest = node_with_tl(0, Position(0.0, 0.0), 1.0)
    cur = node_with_tl(1, Position(0.0, 150.0), 1.0)     # ring 2
    higher = node_with_tl(2, Position(0.0, 230.0), 5.0)  # ring 3, in range
    nodes = {n.id: n for n in (dest, cur, higher)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) is None


def test_next_hop_ranking_prefers_long_stride():
    # equal trust everywhere: the lowest relative-trust candidate is the
    # farthest one; the argmax flag flips the choice
    dest = node_with_tl(0, Position(0.0, 0.0), 1.0)
    cur = node_with_tl(1, Position(0.0, 250.0), 1.0)
    far = node_with_tl(2, Position(0.0, 160.0), 1.0)     # 90 m stride
    near = node_with_tl(3, Position(-30.0, 170.0), 1.0)  # 85.4 m stride
    nodes = {n.id: n for n in (dest, cur, far, near)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) == 2
    assert next_hop(cur, dest, assignment, nodes, "inverted", R, rtl_argmax=True) == 3


def test_next_hop_zero_trust_falls_back_to_lowest_id():
    dest = node_with_tl(0, Position(0.0, 0.0), 0.0)
    cur = node_with_tl(1, Position(0.0, 250.0), 0.0)
    c_a = node_with_tl(7, Position(0.0, 160.0), 0.0)
    c_b = node_with_tl(5, Position(-10.0, 165.0), 0.0)
    nodes = {n.id: n for n in (dest, cur, c_a, c_b)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) == 5


def test_next_hop_degenerate_pair_ranks_after_scored_pair():
    # a candidate whose pairwise score is undefined (both ends at zero
    # trust) loses to any candidate with a finite score, even a nearer one
    dest = node_with_tl(0, Position(0.0, 0.0), 1.0)
    cur = node_with_tl(1, Position(0.0, 250.0), 0.0)
    scored = node_with_tl(2, Position(0.0, 165.0), 1.0)
    blank = node_with_tl(3, Position(-20.0, 163.0), 0.0)
    nodes = {n.id: n for n in (dest, cur, scored, blank)}
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    assert next_hop(cur, dest, assignment, nodes, "inverted", R) == 2


def test_next_hop_honors_exclusions():
    nodes = chain_nodes()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    got = next_hop(nodes[4], nodes[0], assignment, nodes, "inverted", R,
                   exclude=frozenset({3}))
    assert got is None
    with pytest.raises(ValueError):
        next_hop(nodes[0], nodes[0], assignment, nodes, "inverted", R)


def test_route_delivers_down_the_chain():
    nodes = chain_nodes()
    cfg = cfg_for()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    ledger = EnergyLedger(cfg.energy_costs)
    trace = route(4, 0, assignment, nodes, cfg, ledger)
    assert trace.delivered and trace.reason == DELIVERED
    assert trace.hops == [4, 3, 2, 1, 0]
    rings = [assignment.by_node[h].ring for h in trace.hops]
    assert rings == [4, 3, 2, 1, 0]
    per_hop = cfg.per_hop_delay_ms()
    assert trace.transit_ms() == pytest.approx(4 * per_hop)
    hop_cost = cfg.energy_costs.tx + cfg.energy_costs.rx
    assert trace.per_hop_energy_mj == pytest.approx([hop_cost] * 4)
    assert ledger.total_drawn == pytest.approx(4 * hop_cost)


def test_route_rejects_bad_endpoints():
    nodes = chain_nodes()
    cfg = cfg_for()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    ledger = EnergyLedger(cfg.energy_costs)
    with pytest.raises(ValueError):
        route(2, 2, assignment, nodes, cfg, ledger)
    nodes[4].residual_energy = 0.0
    with pytest.raises(ValueError):
        route(4, 0, assignment, nodes, cfg, ledger)


def test_route_reports_no_candidate_when_stranded():
    nodes = chain_nodes()
    del nodes[2]  # break the chain
    cfg = cfg_for()
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    ledger = EnergyLedger(cfg.energy_costs)
    trace = route(4, 0, assignment, nodes, cfg, ledger)
    assert not trace.delivered
    assert trace.reason == NO_CANDIDATE
    assert trace.hops == [4, 3]


def test_route_stops_on_drained_relay():
    nodes = chain_nodes(count=3)
    cfg = cfg_for(3)
    nodes[1].residual_energy = cfg.energy_costs.rx  # dies on reception
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    ledger = EnergyLedger(cfg.energy_costs)
    trace = route(2, 0, assignment, nodes, cfg, ledger)
    assert not trace.delivered
    assert trace.reason == ENERGY_EXHAUSTED
    assert trace.hops == [2, 1]
    assert not nodes[1].alive


def test_route_charges_alias_owner():
    nodes = chain_nodes(count=3)
    owner = node_with_tl(9, Position(900.0, 900.0), 50.0)
    nodes[9] = owner
    cfg = cfg_for(4)
    assignment = assign_clusters(nodes, dest_id=0, d_1hop=R, sector_count=4)
    ledger = EnergyLedger(cfg.energy_costs)
    relay_energy = nodes[1].residual_energy
    owner_energy = owner.residual_energy
    trace = route(2, 0, assignment, nodes, cfg, ledger, aliases={1: 9})
    assert trace.delivered
    assert nodes[1].residual_energy == relay_energy  # masquerade pays nothing
    spent = cfg.energy_costs.rx + cfg.energy_costs.tx
    assert owner.residual_energy == pytest.approx(owner_energy - spent)


def test_route_random_topologies_are_loop_free():
    cfg = NetworkConfig(node_count=40, area_side=500.0, radio_range=150.0,
                        sector_count=8)
    ledger = EnergyLedger(cfg.energy_costs)
    rng = random.Random(77)
    delivered = attempts = 0
    for seed in range(10):
        nodes = random_connected_nodes(seed, 40, 500.0, 150.0)
        for n in nodes.values():
            n.trust.add(random_record(rng))
        for _ in range(5):
            src, dest = rng.sample(sorted(nodes), 2)
            assignment = assign_clusters(nodes, dest_id=dest, d_1hop=150.0,
                                         sector_count=8)
            trace = route(src, dest, assignment, nodes, cfg, ledger)
            attempts += 1
            assert len(set(trace.hops)) == len(trace.hops)
            if trace.delivered:
                delivered += 1
                assert trace.hops[-1] == dest
                rings = [assignment.by_node[h].ring for h in trace.hops]
                assert all(a >= b for a, b in zip(rings, rings[1:]))
    assert delivered >= attempts * 0.8


def test_route_trace_transit_accumulates():
    trace = RouteTrace(src=1, dest=2, hops=[1, 2], delivered=True,
                       reason=DELIVERED, per_hop_delay_ms=[0.5, 0.25])
    assert trace.transit_ms() == 0.75
