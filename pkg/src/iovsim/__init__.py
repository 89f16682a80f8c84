"""Deterministic simulator for trust-based IoV routing with a
side-chained block ledger."""

from .attacks import AttackProfile, mark_communications
from .bfo import BfoConfig, Bacterium, bounded_draw, optimize_split, split_fitness
from .clustering import ClusterAssignment, ClusterId, assign_clusters, nearest_cluster, ring_index
from .config import ConfigError, ScenarioConfig, config_from_dict, load_config
from .harness import MetricsReport, emit_csv, run_scenario, simulate, sweep
from .ledger import (
    Block,
    Chain,
    ChainCostModel,
    SidechainConfig,
    active_segment,
    append,
    append_delay,
    build_chain,
    split,
)
from .network import EnergyModel, NetworkConfig, Node, PacketQueue, Position, deploy, distance
from .routing import RouteTrace, next_hop, relative_trust, route
from .trust import CommRecord, TrustState, select_miners, trust_level

__version__ = "0.1.0"

__all__ = [
    "AttackProfile",
    "Bacterium",
    "BfoConfig",
    "Block",
    "Chain",
    "ChainCostModel",
    "ClusterAssignment",
    "ClusterId",
    "CommRecord",
    "ConfigError",
    "EnergyModel",
    "MetricsReport",
    "NetworkConfig",
    "Node",
    "PacketQueue",
    "Position",
    "RouteTrace",
    "ScenarioConfig",
    "SidechainConfig",
    "TrustState",
    "active_segment",
    "append",
    "append_delay",
    "assign_clusters",
    "bounded_draw",
    "build_chain",
    "config_from_dict",
    "deploy",
    "distance",
    "emit_csv",
    "load_config",
    "mark_communications",
    "nearest_cluster",
    "next_hop",
    "optimize_split",
    "relative_trust",
    "ring_index",
    "route",
    "run_scenario",
    "select_miners",
    "simulate",
    "split",
    "split_fitness",
    "sweep",
    "trust_level",
]
