from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.logger import logger
from ..core.serialization import dump_tsv
from ..core.validators import EdgeNotFoundError, InvalidArgumentError, validate_player
from ..graph.graph_core import Edge, ValueKind, WeightedDigraph
from .marginal import marginal_effect
from .values import closed_form

# grid points this close to another in-edge weight are flagged as ties
TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SweepSegment:
    lo: float
    hi: float
    n_points: int
    slopes: Tuple[Optional[float], ...]
    predicted_slopes: Tuple[float, ...]
    residuals: Tuple[Optional[float], ...]

    def to_dict(self, target_names: Sequence) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "n_points": self.n_points,
            "slopes": dict(zip(map(str, target_names), self.slopes)),
            "predicted_slopes": dict(zip(map(str, target_names), self.predicted_slopes)),
            "residuals": dict(zip(map(str, target_names), self.residuals)),
        }


@dataclass(frozen=True)
class SweepTable:
    """Target values over a weight grid for one edge.

    Values are continuous in the weight. Breakpoints sit at the other in-edge
    weights of the edge's head, where its rank changes and the slope jumps.
    """

    edge: Edge
    targets: Tuple[int, ...]
    method: ValueKind
    weights: Tuple[float, ...]
    values: Tuple[Tuple[float, ...], ...]
    tie_flags: Tuple[bool, ...]
    breakpoints: Tuple[float, ...]
    segments: Tuple[SweepSegment, ...]

    def column(self, target: int) -> np.ndarray:
        idx = self.targets.index(target)
        return np.array([row[idx] for row in self.values])

    def _names(self, labels: Optional[Sequence[str]]) -> List:
        return [labels[t] if labels is not None else t for t in self.targets]

    def to_tsv(self, labels: Optional[Sequence[str]] = None, digits: int = 12) -> str:
        header = ["weight"] + [str(name) for name in self._names(labels)] + ["breakpoint"]
        rows = [
            [w, *row, tie] for w, row, tie in zip(self.weights, self.values, self.tie_flags)
        ]
        return dump_tsv(header, rows, digits)

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        names = self._names(labels)
        edge = [labels[v] for v in self.edge] if labels is not None else list(self.edge)
        return {
            "edge": edge,
            "method": self.method.value,
            "targets": names,
            "breakpoints": list(self.breakpoints),
            "rows": [
                {"weight": w, "values": list(row), "breakpoint": tie}
                for w, row, tie in zip(self.weights, self.values, self.tie_flags)
            ],
            "segments": [s.to_dict(names) for s in self.segments],
        }


def weight_grid(steps: int) -> List[float]:
    if steps < 2:
        raise InvalidArgumentError(f"a sweep needs at least 2 grid points, got {steps}")
    return np.linspace(0.0, 1.0, steps).tolist()


def _fit(x: np.ndarray, y: np.ndarray) -> Tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.max(np.abs(y - (slope * x + intercept))))
    return float(slope), residual


def sweep_edge(
    g: WeightedDigraph,
    edge: Edge,
    targets: Sequence[int],
    grid: Sequence[float],
    method: Union[ValueKind, str] = ValueKind.SHAPLEY,
) -> SweepTable:
    kind = ValueKind(method)
    k, j = edge
    if (k, j) not in g.edges:
        raise EdgeNotFoundError(f"Edge ({g.labels[k]}->{g.labels[j]}) is not in the graph")
    targets = tuple(validate_player(g.n, t) for t in targets)
    weights = sorted(float(w) for w in grid)
    if not weights or weights[0] < 0.0 or weights[-1] > 1.0:
        raise InvalidArgumentError("sweep grid values must lie in [0, 1]")

    others = [w for tail, w in g.in_edges.profile(j).ordered if tail != k]
    breakpoints = tuple(sorted({w for w in others if weights[0] < w < weights[-1]}))

    rows = []
    ties = []
    for w in weights:
        allocation = closed_form(g.with_edge_weight((k, j), w), kind)
        rows.append(tuple(allocation.payoffs[t] for t in targets))
        ties.append(any(abs(w - other) <= TIE_TOLERANCE for other in others))

    x = np.array(weights)
    y = np.array(rows).reshape(len(weights), len(targets))
    bounds = [weights[0], *breakpoints, weights[-1]]
    segments = []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        inside = (x >= lo - TIE_TOLERANCE) & (x <= hi + TIE_TOLERANCE)
        midpoint = g.with_edge_weight((k, j), 0.5 * (lo + hi))
        predicted = tuple(marginal_effect(midpoint, (k, j), t, kind).total_coeff for t in targets)
        slopes: List[Optional[float]] = []
        residuals: List[Optional[float]] = []
        for col in range(len(targets)):
            if int(inside.sum()) >= 2:
                slope, residual = _fit(x[inside], y[inside, col])
                slopes.append(slope)
                residuals.append(residual)
            else:
                slopes.append(None)
                residuals.append(None)
        segments.append(
            SweepSegment(
                lo=lo,
                hi=hi,
                n_points=int(inside.sum()),
                slopes=tuple(slopes),
                predicted_slopes=predicted,
                residuals=tuple(residuals),
            )
        )

    logger.debug(f"Swept edge {g.labels[k]}->{g.labels[j]} over {len(weights)} points, {len(segments)} segments")
    return SweepTable(
        edge=(k, j),
        targets=targets,
        method=kind,
        weights=tuple(weights),
        values=tuple(rows),
        tie_flags=tuple(ties),
        breakpoints=breakpoints,
        segments=tuple(segments),
    )
