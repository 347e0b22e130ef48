"""Weighted directed graphs and the sorted in-neighbour structure behind every closed form."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from pathlib import Path
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.logger import logger
from ..core.validators import (
    EdgeNotFoundError,
    GraphFormatError,
    UnknownPlayerError,
    validate_player,
    weight_problem,
)

Edge = Tuple[int, int]


class GraphFormat(str, Enum):
    EDGE_LIST = "edge_list"
    JSON = "json"

    @classmethod
    def for_path(cls, path: Union[str, Path]) -> "GraphFormat":
        return cls.JSON if str(path).lower().endswith(".json") else cls.EDGE_LIST


class TieBreak(str, Enum):
    """Order among in-neighbours of equal weight."""

    ASCENDING = "ascending"
    DESCENDING = "descending"


class ValueKind(str, Enum):
    SHAPLEY = "shapley"
    BANZHAF = "banzhaf"


@dataclass(frozen=True, eq=False)
class WeightedDigraph:
    n: int
    edges: Mapping[Edge, float]
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels) or tuple(str(i) for i in range(self.n))
        if len(labels) != self.n:
            raise GraphFormatError(f"{len(labels)} labels given for {self.n} players")
        if len(set(labels)) != len(labels):
            raise GraphFormatError("Node labels must be unique")

        errors = []
        checked: Dict[Edge, float] = {}
        for (u, v), w in dict(self.edges).items():
            locus = f"edge ({labels[u] if 0 <= u < self.n else u}->{labels[v] if 0 <= v < self.n else v})"
            if not (0 <= u < self.n and 0 <= v < self.n):
                errors.append(f"{locus}: endpoint outside 0..{self.n - 1}")
                continue
            if u == v:
                errors.append(f"{locus}: self-loop")
                continue
            problem = weight_problem(w)
            if problem:
                errors.append(f"{locus}: {problem}")
                continue
            checked[(u, v)] = float(w)
        if errors:
            raise GraphFormatError("Graph validation failed:\n" + "\n".join(f"  - {e}" for e in errors))

        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "edges", MappingProxyType(dict(sorted(checked.items()))))

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Tuple[int, int, float]],
        labels: Sequence[str] = (),
    ) -> "WeightedDigraph":
        table: Dict[Edge, float] = {}
        for u, v, w in edges:
            if (u, v) in table:
                raise GraphFormatError(f"duplicate edge ({u}->{v})")
            table[(u, v)] = w
        return cls(n=n, edges=table, labels=tuple(labels))

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    @cached_property
    def label_index(self) -> Mapping[str, int]:
        return MappingProxyType({label: i for i, label in enumerate(self.labels)})

    def index_of(self, label: str) -> int:
        try:
            return self.label_index[str(label)]
        except KeyError:
            raise UnknownPlayerError(f"Unknown player label {label!r}")

    def weight(self, u: int, v: int) -> float:
        try:
            return self.edges[(u, v)]
        except KeyError:
            raise EdgeNotFoundError(f"Edge ({self.labels[u]}->{self.labels[v]}) is not in the graph")

    @cached_property
    def out_neighbors(self) -> Tuple[Tuple[int, ...], ...]:
        out: List[List[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            out[u].append(v)
        return tuple(tuple(targets) for targets in out)

    @cached_property
    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(tails, heads, weights) as parallel numpy arrays in sorted edge order."""
        if not self.edges:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty.copy(), np.zeros(0, dtype=float)
        pairs = np.array(list(self.edges.keys()), dtype=np.int64)
        weights = np.fromiter(self.edges.values(), dtype=float, count=len(self.edges))
        return pairs[:, 0], pairs[:, 1], weights

    @cached_property
    def total_weight(self) -> float:
        return float(np.sum(self.arrays[2]))

    @cached_property
    def in_edges(self) -> "InEdgeTable":
        return InEdgeTable.build(self, TieBreak.ASCENDING)

    def with_edge_weight(self, edge: Edge, weight: float) -> "WeightedDigraph":
        if edge not in self.edges:
            raise EdgeNotFoundError(f"Edge {edge} is not in the graph")
        edges = dict(self.edges)
        edges[edge] = weight
        return WeightedDigraph(n=self.n, edges=edges, labels=self.labels)

    def scaled(self, factor: float) -> "WeightedDigraph":
        if not 0.0 <= factor <= 1.0:
            raise GraphFormatError(f"scale factor {factor} outside [0, 1]")
        return WeightedDigraph(
            n=self.n, edges={e: w * factor for e, w in self.edges.items()}, labels=self.labels
        )

    def __repr__(self) -> str:
        return f"WeightedDigraph(n={self.n}, edges={len(self.edges)})"


# ============================================================================
# Sorted in-edge table
# ============================================================================

def unanimity_share(sizes: np.ndarray, kind: ValueKind) -> np.ndarray:
    """Value a member of a unanimity support of the given size receives: 1/|T| or 2^(1-|T|)."""
    sizes = np.asarray(sizes)
    if ValueKind(kind) is ValueKind.SHAPLEY:
        return 1.0 / sizes
    return np.ldexp(1.0, 1 - sizes.astype(np.int64))


@dataclass(frozen=True, eq=False)
class InEdgeTable:
    """Every in-edge of the graph, grouped by head and sorted by weight.

    Edge ``e`` of the table is the in-edge of rank ``ranks[e]`` (1-based) of
    player ``heads[e]``; the group of player ``i`` is ``offsets[i]:offsets[i+1]``.
    """

    n: int
    heads: np.ndarray
    tails: np.ndarray
    weights: np.ndarray
    ranks: np.ndarray
    offsets: np.ndarray
    tie_break: TieBreak = TieBreak.ASCENDING

    @classmethod
    def build(cls, g: WeightedDigraph, tie_break: TieBreak = TieBreak.ASCENDING) -> "InEdgeTable":
        tails, heads, weights = g.arrays
        secondary = tails if tie_break is TieBreak.ASCENDING else -tails
        # lexsort: last key is primary
        order = np.lexsort((secondary, weights, heads))
        heads, tails, weights = heads[order], tails[order], weights[order]

        degrees = np.bincount(heads, minlength=g.n) if len(heads) else np.zeros(g.n, dtype=np.int64)
        offsets = np.zeros(g.n + 1, dtype=np.int64)
        np.cumsum(degrees, out=offsets[1:])
        ranks = np.arange(len(heads), dtype=np.int64) - offsets[heads] + 1
        return cls(
            n=g.n,
            heads=heads,
            tails=tails,
            weights=weights,
            ranks=ranks,
            offsets=offsets,
            tie_break=tie_break,
        )

    @property
    def degrees(self) -> np.ndarray:
        return np.diff(self.offsets)

    @cached_property
    def increments(self) -> np.ndarray:
        """b(t) - b(t-1) per edge, with b(0) = 0."""
        previous = np.concatenate(([0.0], self.weights[:-1])) if len(self.weights) else self.weights
        return np.where(self.ranks == 1, self.weights, self.weights - previous)

    @cached_property
    def top_weights(self) -> np.ndarray:
        """b_i(m_i) per player, 0 for players without in-neighbours."""
        top = np.zeros(self.n, dtype=float)
        has_in = self.degrees > 0
        top[has_in] = self.weights[self.offsets[1:][has_in] - 1]
        return top

    def chain_terms(self, kind: ValueKind) -> np.ndarray:
        """Increment of rank t divided among its chain support T(t), which has t members."""
        return self.increments * unanimity_share(self.ranks, kind)

    def suffix_sums(self, kind: ValueKind) -> Tuple[np.ndarray, np.ndarray]:
        """(S at each edge's own rank, S(0) per player).

        S(r) = sum over t in r+1..m of chain term t, so an in-neighbour of rank r
        reads its cross term in constant time.
        """
        prefix = np.concatenate(([0.0], np.cumsum(self.chain_terms(kind))))
        group_end = prefix[self.offsets[1:]]
        per_edge = group_end[self.heads] - prefix[np.arange(1, len(self.heads) + 1)]
        per_player = group_end - prefix[self.offsets[:-1]]
        return per_edge, per_player

    def corrections(self, kind: ValueKind) -> np.ndarray:
        """b(m) share of the correction support T(m+1), which has m+1 members."""
        return self.top_weights * unanimity_share(self.degrees + 1, kind)

    def profile(self, i: int) -> "InNeighborProfile":
        lo, hi = int(self.offsets[i]), int(self.offsets[i + 1])
        ordered = tuple(
            (int(t), float(w)) for t, w in zip(self.tails[lo:hi], self.weights[lo:hi])
        )
        return InNeighborProfile(owner=i, ordered=ordered)


# ============================================================================
# Per-player profiles
# ============================================================================

@dataclass(frozen=True)
class InNeighborProfile:
    owner: int
    ordered: Tuple[Tuple[int, float], ...]

    @property
    def m(self) -> int:
        return len(self.ordered)

    @property
    def weights(self) -> Tuple[float, ...]:
        return tuple(w for _, w in self.ordered)

    @property
    def neighbors(self) -> Tuple[int, ...]:
        return tuple(k for k, _ in self.ordered)

    @cached_property
    def rank_of(self) -> Mapping[int, int]:
        return MappingProxyType({k: rank for rank, (k, _) in enumerate(self.ordered, start=1)})

    def b(self, t: int) -> float:
        """b(t) with the convention b(0) = 0."""
        if t == 0:
            return 0.0
        return self.ordered[t - 1][1]


def in_neighbor_profile(
    g: WeightedDigraph, i: int, tie_break: TieBreak = TieBreak.ASCENDING
) -> InNeighborProfile:
    i = validate_player(g.n, i)
    table = g.in_edges if tie_break is TieBreak.ASCENDING else InEdgeTable.build(g, tie_break)
    return table.profile(i)


def chain_supports(profile: InNeighborProfile) -> List[FrozenSet[int]]:
    """T(1), ..., T(m+1): the owner plus its first t-1 in-neighbours by rank."""
    supports = [frozenset([profile.owner])]
    for neighbor in profile.neighbors:
        supports.append(supports[-1] | {neighbor})
    return supports


def tail_suffix_sums(profile: InNeighborProfile, kind: ValueKind) -> List[float]:
    """S(r) for r = 0..m."""
    kind = ValueKind(kind)
    weights = np.asarray(profile.weights, dtype=float)
    if not len(weights):
        return [0.0]
    ranks = np.arange(1, len(weights) + 1)
    increments = np.diff(weights, prepend=0.0)
    terms = increments * unanimity_share(ranks, kind)
    tail = np.cumsum(terms[::-1])[::-1]
    return [float(x) for x in tail] + [0.0]


# ============================================================================
# Parsing and writing
# ============================================================================

class _LabelMap:
    def __init__(self) -> None:
        self.index: Dict[str, int] = {}

    def get(self, label: str) -> int:
        if label not in self.index:
            self.index[label] = len(self.index)
        return self.index[label]

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.index)


def _parse_weight(raw: object, *, line: Optional[int], locus: str) -> float:
    if isinstance(raw, bool):
        raise GraphFormatError(f"weight is not a number: {raw!r}", line=line, locus=locus)
    try:
        weight = float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise GraphFormatError(f"weight is not a number: {raw!r}", line=line, locus=locus)
    problem = weight_problem(weight)
    if problem:
        raise GraphFormatError(problem, line=line, locus=locus)
    return weight


def _add_edge(
    edges: Dict[Edge, float], labels: _LabelMap, src: str, dst: str, raw_weight: object,
    *, line: Optional[int], locus: str,
) -> None:
    if src == dst:
        raise GraphFormatError(f"self-loop on {src!r}", line=line, locus=locus)
    weight = _parse_weight(raw_weight, line=line, locus=locus)
    edge = (labels.get(src), labels.get(dst))
    if edge in edges:
        raise GraphFormatError(f"duplicate edge {src}->{dst}", line=line, locus=locus)
    edges[edge] = weight


def _parse_edge_list(text: str) -> WeightedDigraph:
    labels = _LabelMap()
    edges: Dict[Edge, float] = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if len(fields) == 1:
            # bare label declares an isolated player
            labels.get(fields[0])
            continue
        if len(fields) != 3:
            raise GraphFormatError(
                f"expected '<from> <to> <weight>', got {len(fields)} fields", line=lineno
            )
        src, dst, weight = fields
        _add_edge(edges, labels, src, dst, weight, line=lineno, locus=f"{src}->{dst}")
    return WeightedDigraph(n=len(labels.labels), edges=edges, labels=labels.labels)


def _parse_json(text: str) -> WeightedDigraph:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise GraphFormatError(e.msg, line=e.lineno, locus=f"column {e.colno}")
    if not isinstance(data, dict):
        raise GraphFormatError("top level must be an object with 'edges'")

    labels = _LabelMap()
    nodes = data.get("nodes") or []
    if not isinstance(nodes, list):
        raise GraphFormatError("'nodes' must be a list", locus="nodes")
    for pos, node in enumerate(nodes):
        label = str(node)
        if label in labels.index:
            raise GraphFormatError(f"duplicate node {label!r}", locus=f"nodes[{pos}]")
        labels.get(label)

    raw_edges = data.get("edges")
    if not isinstance(raw_edges, list):
        raise GraphFormatError("'edges' must be a list", locus="edges")
    edges: Dict[Edge, float] = {}
    for pos, item in enumerate(raw_edges):
        locus = f"edges[{pos}]"
        if not isinstance(item, list) or len(item) != 3:
            raise GraphFormatError("edge must be [from, to, weight]", locus=locus)
        src, dst, weight = item
        _add_edge(edges, labels, str(src), str(dst), weight, line=None, locus=locus)
    return WeightedDigraph(n=len(labels.labels), edges=edges, labels=labels.labels)


def parse_graph(text: str, format: Union[GraphFormat, str] = GraphFormat.EDGE_LIST) -> WeightedDigraph:
    fmt = GraphFormat(format)
    g = _parse_json(text) if fmt is GraphFormat.JSON else _parse_edge_list(text)
    logger.debug(f"Parsed {fmt.value} graph: n={g.n}, edges={len(g.edges)}")
    return g


def load_graph(path: Union[str, Path], format: Union[GraphFormat, str, None] = None) -> WeightedDigraph:
    fmt = GraphFormat(format) if format else GraphFormat.for_path(path)
    with open(path, "r", encoding="utf-8") as f:
        try:
            text = f.read()
        except UnicodeDecodeError as e:
            raise GraphFormatError(f"not valid UTF-8 ({e.reason})", locus=f"byte {e.start}")
    return parse_graph(text, fmt)


def dump_graph(g: WeightedDigraph, format: Union[GraphFormat, str] = GraphFormat.EDGE_LIST) -> str:
    fmt = GraphFormat(format)
    if fmt is GraphFormat.JSON:
        payload = {
            "nodes": list(g.labels),
            "edges": [[g.labels[u], g.labels[v], w] for (u, v), w in g.edges.items()],
        }
        return json.dumps(payload, indent=2) + "\n"

    # declare every player in id order first so a reparse keeps the same ids
    lines = list(g.labels)
    lines.extend(f"{g.labels[u]} {g.labels[v]} {w!r}" for (u, v), w in g.edges.items())
    return "\n".join(lines) + "\n"


def random_graph(
    rng: np.random.Generator,
    n: int,
    density: float = 0.5,
    zero_fraction: float = 0.3,
) -> WeightedDigraph:
    """Each ordered pair is an edge with probability ``density``; a ``zero_fraction`` share of edges weigh 0."""
    edges: Dict[Edge, float] = {}
    for u in range(n):
        for v in range(n):
            if u == v or rng.random() >= density:
                continue
            edges[(u, v)] = 0.0 if rng.random() < zero_fraction else float(rng.random())
    return WeightedDigraph(n=n, edges=edges)
