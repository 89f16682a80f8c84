"""Shared fixtures and generators for the test suite."""

import math
import random

from iovsim.network import NetworkConfig, Node, PacketQueue, Position
from iovsim.trust import CommRecord, TrustState


def node_with_tl(nid: int, pos: Position, tl: float, capacity: int = 8) -> Node:
    """A live node whose trust score is exactly tl.

    One record with quality 1.0 (rx=tx=1, rtt=1, energy=1) makes the
    score equal the residual energy; zero tl keeps the history empty.
    """
    node = Node(id=nid, pos=pos, residual_energy=tl if tl > 0 else 1.0,
                queue=PacketQueue(capacity), trust=TrustState())
    if tl > 0:
        node.trust.add(CommRecord(rx=1, tx=1, ts_start=0.0, ts_complete=1.0,
                                  e_start=2.0, e_complete=1.0))
    return node


def random_record(rng: random.Random) -> CommRecord:
    tx = rng.randint(1, 200)
    rx = rng.randint(0, tx)
    ts_start = rng.uniform(0.0, 1000.0)
    rtt = rng.uniform(0.01, 50.0)
    e_start = rng.uniform(1.0, 1000.0)
    spent = rng.uniform(1e-6, e_start * 0.5)
    return CommRecord(rx=rx, tx=tx, ts_start=ts_start, ts_complete=ts_start + rtt,
                      e_start=e_start, e_complete=e_start - spent)


def dominating_record_pair(rng: random.Random):
    """(worse, better): the better record weakly dominates on every
    metric with at least one strict improvement, all metrics positive."""
    tx = rng.randint(2, 100)
    rx_w = rng.randint(1, tx - 1)
    rtt_w = rng.uniform(1.0, 20.0)
    spent_w = rng.uniform(0.5, 10.0)
    worse = CommRecord(rx=rx_w, tx=tx, ts_start=0.0, ts_complete=rtt_w,
                       e_start=100.0, e_complete=100.0 - spent_w)
    # improve a random non-empty subset of {rx, rtt, energy}
    bump_rx, bump_rtt, bump_e = (rng.random() < 0.5 for _ in range(3))
    if not (bump_rx or bump_rtt or bump_e):
        bump_rx = True
    rx_b = min(tx, rx_w + 1) if bump_rx else rx_w
    rtt_b = rtt_w * rng.uniform(0.5, 0.95) if bump_rtt else rtt_w
    spent_b = spent_w * rng.uniform(0.5, 0.95) if bump_e else spent_w
    better = CommRecord(rx=rx_b, tx=tx, ts_start=0.0, ts_complete=rtt_b,
                        e_start=100.0, e_complete=100.0 - spent_b)
    return worse, better


def _connected(positions, radio_range: float) -> bool:
    n = len(positions)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if math.dist(positions[i], positions[j]) <= radio_range:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(n)}) == 1


def random_connected_nodes(seed: int, count: int, area: float, radio_range: float,
                           energy: float = 1e9):
    """Uniform deployment, resampled until the unit-disk graph is connected."""
    rng = random.Random(seed)
    while True:
        positions = [(rng.uniform(0, area), rng.uniform(0, area)) for _ in range(count)]
        if _connected(positions, radio_range):
            break
    return {
        i: Node(id=i, pos=Position(x, y), residual_energy=energy, queue=PacketQueue(8))
        for i, (x, y) in enumerate(positions)
    }


def desk_config(area: float, radio_range: float, node_count: int = 100) -> NetworkConfig:
    return NetworkConfig(node_count=node_count, area_side=area, radio_range=radio_range)
