"""Exact slopes of the Shapley and Banzhaf values in a single edge weight.

Both values are linear in the edge weights as long as no in-neighbour ranking
changes, so every player's value is a sum of coefficient * weight over the
edges local to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

from ..core.validators import EdgeNotFoundError, validate_player
from ..graph.graph_core import Edge, InNeighborProfile, ValueKind, WeightedDigraph


class EffectCase(str, Enum):
    HEAD = "head"
    TAIL = "tail"
    SHARED = "shared"
    NONE = "none"


@dataclass(frozen=True)
class MarginalEffectReport:
    edge: Edge
    target: int
    method: ValueKind
    case: EffectCase
    internal_coeff: float
    external_coeff: float
    total_coeff: float
    rank_used: int
    valid_epsilon_window: Tuple[float, float]

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        name = (lambda i: labels[i]) if labels is not None else (lambda i: i)
        return {
            "edge": [name(self.edge[0]), name(self.edge[1])],
            "target": name(self.target),
            "method": self.method.value,
            "case": self.case.value,
            "internal_coeff": self.internal_coeff,
            "external_coeff": self.external_coeff,
            "total_coeff": self.total_coeff,
            "rank_used": self.rank_used,
            "valid_epsilon_window": list(self.valid_epsilon_window),
        }


def head_coefficient(rank: int, kind: ValueKind) -> float:
    """Own-chain slope of an in-edge of rank r: 1/(r(r+1)) or 2^-r."""
    if kind is ValueKind.SHAPLEY:
        return 1.0 / (rank * (rank + 1))
    return math.ldexp(1.0, -rank)


def tail_coefficient(rank: int, kind: ValueKind) -> float:
    """Slope of a player's own out-edge of rank r on the head's chain: -1/(r+1) or -2^-r."""
    if kind is ValueKind.SHAPLEY:
        return -1.0 / (rank + 1)
    return -math.ldexp(1.0, -rank)


def shared_coefficient(rank: int, kind: ValueKind) -> float:
    """Slope of a higher-ranked rival's edge into a shared out-neighbour."""
    return head_coefficient(rank, kind)


def epsilon_window(profile: InNeighborProfile, rank: int) -> Tuple[float, float]:
    """Perturbations that keep the edge between its ranked neighbours and inside [0, 1]."""
    weight = profile.b(rank)
    lower = profile.b(rank - 1) if rank > 1 else 0.0
    upper = profile.b(rank + 1) if rank < profile.m else 1.0
    return (lower - weight, upper - weight)


def marginal_effect(
    g: WeightedDigraph,
    edge: Edge,
    target: int,
    method: Union[ValueKind, str] = ValueKind.SHAPLEY,
) -> MarginalEffectReport:
    kind = ValueKind(method)
    k, j = (validate_player(g.n, v) for v in edge)
    target = validate_player(g.n, target)
    if (k, j) not in g.edges:
        raise EdgeNotFoundError(f"Edge ({g.labels[k]}->{g.labels[j]}) is not in the graph")

    profile = g.in_edges.profile(j)
    rank = profile.rank_of[k]
    window = epsilon_window(profile, rank)

    internal = 0.0
    external = 0.0
    rank_used = rank
    if target == j:
        case = EffectCase.HEAD
        internal = 0.5
        external = head_coefficient(rank, kind)
    elif target == k:
        case = EffectCase.TAIL
        internal = 0.5
        external = tail_coefficient(rank, kind)
    elif target in profile.rank_of and profile.rank_of[target] < rank:
        case = EffectCase.SHARED
        external = shared_coefficient(rank, kind)
    else:
        case = EffectCase.NONE
        rank_used = 0

    return MarginalEffectReport(
        edge=(k, j),
        target=target,
        method=kind,
        case=case,
        internal_coeff=internal,
        external_coeff=external,
        total_coeff=internal + external,
        rank_used=rank_used,
        valid_epsilon_window=window,
    )


def marginal_effect_shapley(g: WeightedDigraph, edge: Edge, target: int) -> MarginalEffectReport:
    return marginal_effect(g, edge, target, ValueKind.SHAPLEY)


def marginal_effect_banzhaf(g: WeightedDigraph, edge: Edge, target: int) -> MarginalEffectReport:
    return marginal_effect(g, edge, target, ValueKind.BANZHAF)


# ============================================================================
# Attribution
# ============================================================================

@dataclass(frozen=True)
class EdgeContribution:
    edge: Edge
    case: EffectCase
    coefficient: float
    weight: float

    @property
    def contribution(self) -> float:
        return self.coefficient * self.weight

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        name = (lambda i: labels[i]) if labels is not None else (lambda i: i)
        return {
            "edge": [name(self.edge[0]), name(self.edge[1])],
            "class": {EffectCase.TAIL: "self", EffectCase.HEAD: "incoming", EffectCase.SHARED: "shared"}[self.case],
            "coefficient": self.coefficient,
            "weight": self.weight,
            "contribution": self.contribution,
        }


def value_attribution(
    g: WeightedDigraph, i: int, method: Union[ValueKind, str] = ValueKind.SHAPLEY
) -> List[EdgeContribution]:
    """Player i's value split over the edges it depends on.

    Only i's own out-edges, its in-edges, and higher-ranked edges into its
    out-neighbours carry a nonzero coefficient.
    """
    kind = ValueKind(method)
    i = validate_player(g.n, i)
    table = g.in_edges
    contributions: List[EdgeContribution] = []

    for j in g.out_neighbors[i]:
        report = marginal_effect(g, (i, j), i, kind)
        contributions.append(EdgeContribution((i, j), EffectCase.TAIL, report.total_coeff, g.edges[(i, j)]))

    own = table.profile(i)
    for k, weight in own.ordered:
        report = marginal_effect(g, (k, i), i, kind)
        contributions.append(EdgeContribution((k, i), EffectCase.HEAD, report.total_coeff, weight))

    for j in g.out_neighbors[i]:
        profile = table.profile(j)
        my_rank = profile.rank_of[i]
        for rank, (k, weight) in enumerate(profile.ordered, start=1):
            if rank > my_rank:
                contributions.append(
                    EdgeContribution((k, j), EffectCase.SHARED, shared_coefficient(rank, kind), weight)
                )
    return contributions
