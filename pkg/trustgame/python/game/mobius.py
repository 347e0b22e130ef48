"""Unanimity (Möbius) representation of the trust game.

Every edge contributes a pair term on {tail, head}. Every player with in-neighbours
contributes a chain of terms whose supports grow by one in-neighbour at a time,
cheapest first, closed by a correction term on the full chain.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.logger import logger
from ..core.serialization import coalition_key
from ..graph.graph_core import WeightedDigraph, chain_supports, in_neighbor_profile
from .game import Coalition, coalition_values, from_mask, label_members

DEFAULT_ORACLE_MAX_N = 16


@dataclass(frozen=True)
class UnanimityTerm:
    support: Coalition
    coefficient: float
    origin: str = "chain"

    def __post_init__(self) -> None:
        if not self.support:
            raise ValueError("unanimity support must be nonempty")


def _support_order(support: Coalition) -> tuple:
    return (len(support), tuple(sorted(support)))


@dataclass(frozen=True)
class GameDecomposition:
    n: int
    terms: Tuple[UnanimityTerm, ...]
    aggregated: Mapping[Coalition, float]

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[UnanimityTerm]) -> "GameDecomposition":
        terms = tuple(terms)
        sums: Dict[Coalition, float] = defaultdict(float)
        for term in terms:
            sums[term.support] += term.coefficient
        ordered = dict(sorted(sums.items(), key=lambda item: _support_order(item[0])))
        return cls(n=n, terms=terms, aggregated=MappingProxyType(ordered))

    def dividend(self, support: Iterable[int]) -> float:
        return self.aggregated.get(frozenset(support), 0.0)

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        return {
            "terms": [
                {"support": label_members(t.support, labels), "coeff": t.coefficient, "origin": t.origin}
                for t in self.terms
            ],
            "dividends": {
                coalition_key(support, labels): value
                for support, value in self.aggregated.items()
            },
        }


def external_chain_terms(g: WeightedDigraph, i: int) -> List[UnanimityTerm]:
    profile = in_neighbor_profile(g, i)
    if profile.m == 0:
        return []
    supports = chain_supports(profile)
    terms = [
        UnanimityTerm(supports[t - 1], profile.b(t) - profile.b(t - 1))
        for t in range(1, profile.m + 1)
    ]
    terms.append(UnanimityTerm(supports[profile.m], -profile.b(profile.m), origin="correction"))
    return terms


def full_decomposition(g: WeightedDigraph) -> GameDecomposition:
    terms = [UnanimityTerm(frozenset((u, v)), w, origin="internal") for (u, v), w in g.edges.items()]
    for i in range(g.n):
        terms.extend(external_chain_terms(g, i))
    return GameDecomposition.from_terms(g.n, terms)


def evaluate_decomposition(d: GameDecomposition, S: Iterable[int]) -> float:
    members = frozenset(S)
    return float(sum(value for support, value in d.aggregated.items() if support <= members))


def mobius_transform(values: np.ndarray) -> np.ndarray:
    """Dividends d(T) = Σ_{S ⊆ T} (-1)^{|T|-|S|} v(S) for a bitmask-indexed value table."""
    dividends = np.array(values, dtype=float, copy=True)
    size = len(dividends)
    n = size.bit_length() - 1
    for i in range(n):
        view = dividends.reshape(-1, 2, 1 << i)
        view[:, 1, :] -= view[:, 0, :]
    return dividends


def mobius_oracle(g: WeightedDigraph, max_n: int = DEFAULT_ORACLE_MAX_N) -> Dict[Coalition, float]:
    """Exact dividends of every nonempty coalition by exhaustive inversion."""
    values = coalition_values(g, max_n, operation="mobius_oracle")
    dividends = mobius_transform(values)
    logger.debug(f"Inverted {len(values)} coalition values (n={g.n})")
    return {from_mask(mask): float(dividends[mask]) for mask in range(1, len(dividends))}
