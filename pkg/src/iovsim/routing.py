"""Greedy ring-descent forwarding ranked by relative trust.

The forwarding score between two nodes is
    1 / (distance * sqrt(tl_a^2 + tl_b^2))
and by default the candidate with the LOWEST score is taken, which
favors long strides toward well-trusted relays (the argmax direction is
kept behind a flag for sensitivity runs). Cluster structure constrains
who is a candidate: hops never climb to a higher ring, and when a
strictly lower ring is reachable it is always preferred, so the ring
sequence of a delivered route is non-increasing.

Trust bootstraps at zero, where the score is undefined (1/0). Ranking
therefore works on the score's denominator: a zero denominator is an
infinite score, ranked after every finite one, and all-degenerate pools
fall back to the lowest node id.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from .clustering import ClusterAssignment, nearest_cluster
from .network import EnergyLedger, NetworkConfig, Node, RX, TX, distance, polar_angle

DELIVERED = "delivered"
NO_CANDIDATE = "no-candidate"
REVISIT = "revisit"
HOP_LIMIT = "hop-limit"
ENERGY_EXHAUSTED = "energy-exhausted"


def relative_trust(a: Node, b: Node) -> float:
    """Pairwise forwarding score; undefined for co-located nodes or a
    pair with no trust on either side."""
    d = distance(a.pos, b.pos)
    if d == 0.0:
        raise ValueError("relative trust undefined at zero distance")
    norm = math.hypot(a.trust_score(), b.trust_score())
    if norm == 0.0:
        raise ValueError("relative trust undefined when both trust scores are zero")
    return 1.0 / (d * norm)


def _denominator(a: Node, b: Node) -> float:
    return distance(a.pos, b.pos) * math.hypot(a.trust_score(), b.trust_score())


def _pick(current: Node, candidates: List[Node], rtl_argmax: bool) -> Node:
    # Min relative trust == max denominator. Zero denominators sort as
    # infinite scores; id breaks ties either way.
    if rtl_argmax:
        return min(candidates, key=lambda n: (_denominator(current, n), n.id))
    return min(candidates, key=lambda n: (-_denominator(current, n), n.id))


def candidates_same_cluster(current: Node, dest: Node, members: List[Node],
                            mode: str, radio_range: float) -> List[Node]:
    """Intra-cluster candidate filter.

    literal mode keeps members farther than the current-destination
    separation from both endpoints; inverted mode keeps members closer
    than it to both, i.e. inside the lens between them. Either way the
    member must be radio-reachable from the current node.
    """
    ref = distance(current.pos, dest.pos)
    out = []
    for m in members:
        if m.id in (current.id, dest.id) or not m.alive:
            continue
        if distance(current.pos, m.pos) > radio_range:
            continue
        d_cur, d_dst = distance(current.pos, m.pos), distance(dest.pos, m.pos)
        if mode == "literal":
            keep = d_cur > ref and d_dst > ref
        else:
            keep = d_cur < ref and d_dst < ref
        if keep:
            out.append(m)
    return out


def next_hop(current: Node, dest: Node, assignment: ClusterAssignment,
             nodes: Dict[int, Node], mode: str, radio_range: float,
             rtl_argmax: bool = False,
             exclude: FrozenSet[int] = frozenset()) -> Optional[int]:
    """One forwarding decision; None when the node is stuck.

    Direct delivery wins when the destination is in range. Otherwise
    candidates in a strictly nearer ring are preferred; same-ring
    (lateral) moves are allowed only when no nearer ring is reachable,
    and no candidate in a farther ring is ever considered.
    """
    if current.id == dest.id:
        raise ValueError("already at destination")
    if distance(current.pos, dest.pos) <= radio_range:
        return dest.id
    amap = assignment.by_node
    cur_cid = amap.get(current.id)
    dest_cid = amap.get(dest.id)
    if cur_cid is None or dest_cid is None:
        raise ValueError("current and destination must be in the cluster assignment")
    pool = [
        n for nid, n in nodes.items()
        if nid not in exclude and nid != current.id and nid != dest.id
        and n.alive and nid in amap
        and distance(current.pos, n.pos) <= radio_range
    ]
    if cur_cid == dest_cid:
        cands = candidates_same_cluster(
            current, dest, [n for n in pool if amap[n.id] == cur_cid], mode, radio_range
        )
    else:
        reachable = {amap[n.id] for n in pool if amap[n.id].ring <= cur_cid.ring}
        if not reachable:
            return None
        toward = polar_angle(current.pos, around=dest.pos)
        chosen = nearest_cluster(reachable, toward, assignment.sector_count)
        cands = [n for n in pool if amap[n.id] == chosen]
    if not cands:
        return None
    return _pick(current, cands, rtl_argmax).id


@dataclass
class RouteTrace:
    src: int
    dest: int
    hops: List[int]
    delivered: bool
    reason: str
    per_hop_delay_ms: List[float] = field(default_factory=list)
    per_hop_energy_mj: List[float] = field(default_factory=list)

    def transit_ms(self) -> float:
        return sum(self.per_hop_delay_ms)


def route(src_id: int, dest_id: int, assignment: ClusterAssignment,
          nodes: Dict[int, Node], cfg: NetworkConfig, ledger: EnergyLedger,
          aliases: Optional[Dict[int, int]] = None) -> RouteTrace:
    """Forward hop by hop until delivery or a terminal condition.

    Each hop bills one tx at the sender and one rx at the receiver.
    `aliases` maps masqueraded identities to the node that actually
    holds the radio, so their energy lands on the real owner.
    """
    aliases = aliases or {}
    src, dest = nodes[src_id], nodes[dest_id]
    if src_id == dest_id:
        raise ValueError("source and destination must differ")
    if not (src.alive and dest.alive):
        raise ValueError("source and destination must be alive")
    trace = RouteTrace(src=src_id, dest=dest_id, hops=[src_id], delivered=False, reason="")
    visited = {src_id}
    current = src
    hop_budget = len(nodes)
    per_hop = cfg.per_hop_delay_ms()
    while True:
        if not current.alive:
            trace.reason = ENERGY_EXHAUSTED
            return trace
        if len(trace.hops) - 1 >= hop_budget:
            trace.reason = HOP_LIMIT
            return trace
        nxt = next_hop(current, dest, assignment, nodes, cfg.inequality_mode,
                       cfg.radio_range, cfg.rtl_argmax, exclude=frozenset(visited))
        if nxt is None:
            trace.reason = NO_CANDIDATE
            return trace
        if nxt in visited:
            trace.reason = REVISIT
            return trace
        receiver = nodes[nxt]
        sender_real = nodes[aliases.get(current.id, current.id)]
        receiver_real = nodes[aliases.get(nxt, nxt)]
        drawn = ledger.charge(sender_real, TX) + ledger.charge(receiver_real, RX)
        trace.per_hop_delay_ms.append(per_hop)
        trace.per_hop_energy_mj.append(drawn)
        trace.hops.append(nxt)
        visited.add(nxt)
        if nxt == dest_id:
            trace.delivered = True
            trace.reason = DELIVERED
            return trace
        current = receiver
