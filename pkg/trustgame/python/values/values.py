from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.validators import guard, validate_player
from ..game.game import coalition_values
from ..game.mobius import GameDecomposition
from ..graph.graph_core import (
    InEdgeTable,
    TieBreak,
    ValueKind,
    WeightedDigraph,
    unanimity_share,
)

DEFAULT_BRUTEFORCE_MAX_N = 12
TOLERANCE = 1e-9


class AllocationKind(str, Enum):
    SHAPLEY = "shapley"
    BANZHAF = "banzhaf"
    CORE = "core"
    SUBGAME = "subgame"
    CUSTOM = "custom"


@dataclass(frozen=True)
class Allocation:
    payoffs: Tuple[float, ...]
    kind: AllocationKind
    efficient: bool
    members: Optional[Tuple[int, ...]] = None

    def __post_init__(self) -> None:
        kind = AllocationKind(self.kind)
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "payoffs", tuple(float(x) for x in self.payoffs))
        if kind in (AllocationKind.SHAPLEY, AllocationKind.CORE) and not self.efficient:
            raise ValueError(f"{kind.value} allocations are efficient by construction")
        if self.members is not None and len(self.members) != len(self.payoffs):
            raise ValueError("members and payoffs differ in length")

    @property
    def players(self) -> Tuple[int, ...]:
        return self.members if self.members is not None else tuple(range(len(self.payoffs)))

    def __getitem__(self, player: int) -> float:
        return self.payoffs[self.players.index(player)] if self.members is not None else self.payoffs[player]

    def __len__(self) -> int:
        return len(self.payoffs)

    @property
    def total(self) -> float:
        return float(math.fsum(self.payoffs))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.payoffs, dtype=float)

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        players = [labels[p] for p in self.players] if labels is not None else list(self.players)
        return {
            "kind": self.kind.value,
            "players": players,
            "payoffs": list(self.payoffs),
            "sum": self.total,
            "efficient": self.efficient,
        }


# ============================================================================
# Closed forms
# ============================================================================

def _closed_form(g: WeightedDigraph, kind: ValueKind, tie_break: TieBreak) -> np.ndarray:
    """Internal half-degrees plus each player's own chain and its cross terms on out-neighbour chains.

    O(E log E): one sort of the in-edge table, then constant work per edge.
    """
    tails, heads, weights = g.arrays
    internal = 0.5 * (
        np.bincount(tails, weights=weights, minlength=g.n) + np.bincount(heads, weights=weights, minlength=g.n)
    )

    table = g.in_edges if tie_break is TieBreak.ASCENDING else InEdgeTable.build(g, tie_break)
    per_edge_tail, own_tail = table.suffix_sums(kind)
    correction = table.corrections(kind)

    own = own_tail - correction
    cross = per_edge_tail - correction[table.heads]
    external = own + np.bincount(table.tails, weights=cross, minlength=g.n)
    return internal + external


def shapley_closed_form(g: WeightedDigraph, tie_break: TieBreak = TieBreak.ASCENDING) -> Allocation:
    payoffs = _closed_form(g, ValueKind.SHAPLEY, TieBreak(tie_break))
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind.SHAPLEY, efficient=True)


def banzhaf_closed_form(g: WeightedDigraph, tie_break: TieBreak = TieBreak.ASCENDING) -> Allocation:
    payoffs = _closed_form(g, ValueKind.BANZHAF, TieBreak(tie_break))
    efficient = abs(math.fsum(payoffs.tolist()) - g.total_weight) <= TOLERANCE * max(1.0, g.total_weight)
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind.BANZHAF, efficient=efficient)


def closed_form(g: WeightedDigraph, method: Union[ValueKind, str], tie_break: TieBreak = TieBreak.ASCENDING) -> Allocation:
    if ValueKind(method) is ValueKind.SHAPLEY:
        return shapley_closed_form(g, tie_break)
    return banzhaf_closed_form(g, tie_break)


# ============================================================================
# Definitional oracles
# ============================================================================

def _popcounts(size: int) -> np.ndarray:
    masks = np.arange(size, dtype=np.int64)
    counts = np.zeros(size, dtype=np.int64)
    while masks.any():
        counts += masks & 1
        masks = masks >> 1
    return counts


def shapley_from_values(values: np.ndarray) -> np.ndarray:
    """φ_i = Σ_{S ∌ i} |S|!(n-|S|-1)!/n! · (v(S ∪ {i}) - v(S)) over a bitmask-indexed table."""
    n = len(values).bit_length() - 1
    if n == 0:
        return np.zeros(0)
    sizes = _popcounts(len(values))
    weight_by_size = np.array(
        [math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n) for s in range(n)]
    )
    masks = np.arange(len(values), dtype=np.int64)
    phi = np.zeros(n)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        marginal = values[without | bit] - values[without]
        phi[i] = float(np.sum(weight_by_size[sizes[without]] * marginal))
    return phi


def banzhaf_from_values(values: np.ndarray) -> np.ndarray:
    """β_i = 2^{1-n} Σ_{S ⊆ N∖{i}} (v(S ∪ {i}) - v(S))."""
    n = len(values).bit_length() - 1
    masks = np.arange(len(values), dtype=np.int64)
    beta = np.zeros(n)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        beta[i] = float(np.mean(values[without | bit] - values[without]))
    return beta


def shapley_bruteforce(g: WeightedDigraph, max_n: int = DEFAULT_BRUTEFORCE_MAX_N) -> Allocation:
    guard("shapley_bruteforce", g.n, max_n)
    payoffs = shapley_from_values(coalition_values(g, max_n, operation="shapley_bruteforce"))
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind.SHAPLEY, efficient=True)


def banzhaf_bruteforce(g: WeightedDigraph, max_n: int = DEFAULT_BRUTEFORCE_MAX_N) -> Allocation:
    guard("banzhaf_bruteforce", g.n, max_n)
    payoffs = banzhaf_from_values(coalition_values(g, max_n, operation="banzhaf_bruteforce"))
    efficient = abs(math.fsum(payoffs.tolist()) - g.total_weight) <= TOLERANCE * max(1.0, g.total_weight)
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind.BANZHAF, efficient=efficient)


def bruteforce(g: WeightedDigraph, method: Union[ValueKind, str], max_n: int = DEFAULT_BRUTEFORCE_MAX_N) -> Allocation:
    if ValueKind(method) is ValueKind.SHAPLEY:
        return shapley_bruteforce(g, max_n)
    return banzhaf_bruteforce(g, max_n)


def unanimity_game_values(n: int, support: Iterable[int]) -> np.ndarray:
    """u_T over all 2^n coalitions."""
    t_mask = 0
    for member in support:
        t_mask |= 1 << member
    masks = np.arange(1 << n, dtype=np.int64)
    return ((masks & t_mask) == t_mask).astype(float)


def unanimity_banzhaf_spot_check(n: int, support: Iterable[int], max_n: int = DEFAULT_BRUTEFORCE_MAX_N) -> np.ndarray:
    guard("unanimity_banzhaf_spot_check", n, max_n)
    return banzhaf_from_values(unanimity_game_values(n, support))


# ============================================================================
# Linearity over the unanimity representation
# ============================================================================

def unanimity_value(d: GameDecomposition, kind: Union[ValueKind, str]) -> Allocation:
    """Credit every term's coefficient to its support members: 1/|T| each for Shapley, 2^(1-|T|) for Banzhaf."""
    kind = ValueKind(kind)
    payoffs = np.zeros(d.n)
    for term in d.terms:
        share = float(unanimity_share(np.array([len(term.support)]), kind)[0])
        for member in term.support:
            payoffs[member] += term.coefficient * share
    total = float(sum(t.coefficient for t in d.terms if len(t.support) == 2 and t.origin == "internal"))
    efficient = kind is ValueKind.SHAPLEY or abs(float(payoffs.sum()) - total) <= TOLERANCE * max(1.0, total)
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind(kind.value), efficient=efficient)


# ============================================================================
# Zero-Shapley players
# ============================================================================

def is_zero_shapley_player(g: WeightedDigraph, i: int) -> bool:
    """All in-edges of i weigh 0, and every out-neighbour has i as its only in-neighbour or only zero-weight in-edges."""
    i = validate_player(g.n, i)
    table = g.in_edges

    def in_weights(k: int) -> np.ndarray:
        return table.weights[table.offsets[k]:table.offsets[k + 1]]

    if np.any(in_weights(i) != 0.0):
        return False
    for k in g.out_neighbors[i]:
        weights = in_weights(k)
        if len(weights) != 1 and np.any(weights != 0.0):
            return False
    return True
