"""Weighted digraph model, in-edge tables and graph file formats."""

from .graph_core import (
    GraphFormat,
    InEdgeTable,
    InNeighborProfile,
    TieBreak,
    ValueKind,
    WeightedDigraph,
    chain_supports,
    dump_graph,
    in_neighbor_profile,
    load_graph,
    parse_graph,
    random_graph,
    tail_suffix_sums,
)

__all__ = [
    "GraphFormat",
    "InEdgeTable",
    "InNeighborProfile",
    "TieBreak",
    "ValueKind",
    "WeightedDigraph",
    "chain_supports",
    "dump_graph",
    "in_neighbor_profile",
    "load_graph",
    "parse_graph",
    "random_graph",
    "tail_suffix_sums",
]
