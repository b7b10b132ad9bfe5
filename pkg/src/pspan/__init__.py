"""Frequent complete-subnet mining for pure Condition/Event Petri nets.

Nets are encoded as net graphs (one node per event, condition information
folded into taggings), canonicalized with minimal DFS codes, and mined with
a pattern-growth search.  See the README for a tour.
"""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .dfscode import (DfsCode, DfsCodeUnit, EdgeIdentification, NodeRendering, code_to_netgraph,
                      compare_units, edge_identification, enumerate_dfs_codes, minimal_dfs_code)
from .errors import PSpanError
from .generator import (GeneratorConfig, PlantingConfig, PlantingLedger, connect, gen_one_complete,
                        generate_reservoir, plant, planting_report)
from .miner import MiningResult, Pattern, build_and_filter, mine, patterns_to_subnets
from .net import (Arc, ConditionNode, EventNode, Net, SubclassReport, adjacency, complete_closure,
                  is_complete_subnet, labeled_isomorphic, validate_and_classify)
from .netgraph import NetGraph, c_complexes, net_to_netgraph, netgraph_to_net, validate_netgraph
from .oracle import brute_force_mine, diff_results, enumerate_connected_complete_subnets

__all__ = [
    "Arc", "ConditionNode", "DfsCode", "DfsCodeUnit", "EdgeIdentification", "EventNode",
    "GeneratorConfig", "MiningResult", "Net", "NetGraph", "NodeRendering", "PSpanError", "Pattern",
    "PlantingConfig", "PlantingLedger", "SubclassReport", "adjacency", "brute_force_mine",
    "build_and_filter", "c_complexes", "code_to_netgraph", "compare_units", "complete_closure",
    "connect", "diff_results", "edge_identification", "enumerate_connected_complete_subnets",
    "enumerate_dfs_codes", "gen_one_complete", "generate_reservoir", "is_complete_subnet",
    "labeled_isomorphic", "mine", "minimal_dfs_code", "net_to_netgraph", "netgraph_to_net",
    "patterns_to_subnets", "plant", "planting_report", "validate_and_classify", "validate_netgraph",
    "__version__",
]
