"""Core of the trust game.

The core is a single point: every player receives the total weight of its
in-edges. Membership, the averaging identity behind uniqueness and the
subgame allocations that make the game totally balanced are all checked
exhaustively here.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.logger import logger
from ..core.validators import InvalidArgumentError, validate_members
from ..game.game import (
    MAX_REPORTED_VIOLATIONS,
    CheckReport,
    Violation,
    coalition_value,
    coalition_values,
    collect_report,
    external_player_value,
    from_mask,
    run_partitioned,
)
from ..graph.graph_core import WeightedDigraph
from ..values.values import Allocation, AllocationKind, banzhaf_closed_form, shapley_closed_form

DEFAULT_CORE_MAX_N = 16
DEFAULT_BALANCEDNESS_MAX_N = 10
TOLERANCE = 1e-9


def core_allocation(g: WeightedDigraph) -> Allocation:
    _, heads, weights = g.arrays
    payoffs = np.bincount(heads, weights=weights, minlength=g.n) if len(heads) else np.zeros(g.n)
    return Allocation(payoffs=tuple(payoffs.tolist()), kind=AllocationKind.CORE, efficient=True)


@dataclass(frozen=True)
class CoreReport:
    allocation: Allocation
    is_unique_checked: bool
    identity_lhs: Optional[float]
    identity_rhs: Optional[float]
    violations: Tuple[Violation, ...]
    n_violations: int
    n_checked: int
    upper_bounds: Tuple[float, ...]
    efficiency_gap: float
    tolerance: float = TOLERANCE

    @property
    def efficient(self) -> bool:
        return abs(self.efficiency_gap) <= self.tolerance

    @property
    def in_core(self) -> bool:
        return self.efficient and self.n_violations == 0

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        return {
            "allocation": self.allocation.to_dict(labels),
            "in_core": self.in_core,
            "efficiency_gap": self.efficiency_gap,
            "identity": {"lhs": self.identity_lhs, "rhs": self.identity_rhs},
            "upper_bounds": list(self.upper_bounds),
            "is_unique_checked": self.is_unique_checked,
            "n_checked": self.n_checked,
            "n_violations": self.n_violations,
            "violations": [v.to_dict(("S",), labels) for v in self.violations],
        }


def _as_payoffs(g: WeightedDigraph, x: Union[Allocation, Sequence[float]]) -> np.ndarray:
    payoffs = x.as_array() if isinstance(x, Allocation) else np.asarray(x, dtype=float)
    if payoffs.shape != (g.n,):
        raise InvalidArgumentError(f"allocation has {payoffs.size} payoffs, graph has {g.n} players")
    return payoffs


def _coalition_sums(payoffs: np.ndarray, masks: np.ndarray) -> np.ndarray:
    sums = np.zeros(len(masks), dtype=float)
    for i, x in enumerate(payoffs.tolist()):
        sums += x * ((masks >> i) & 1)
    return sums


def verify_core_identity(g: WeightedDigraph) -> Tuple[float, float]:
    """(Σ_i v(N∖{i}) / (n-1), v(N)); both sides agree for every graph."""
    if g.n < 2:
        raise InvalidArgumentError(f"the core identity needs at least 2 players, got {g.n}")
    everyone = set(range(g.n))
    lhs = math.fsum(coalition_value(g, everyone - {i}).total for i in range(g.n)) / (g.n - 1)
    rhs = coalition_value(g, everyone).total
    return lhs, rhs


def is_in_core(
    g: WeightedDigraph,
    x: Union[Allocation, Sequence[float]],
    tol: float = TOLERANCE,
    max_n: int = DEFAULT_CORE_MAX_N,
) -> CoreReport:
    """Efficiency plus x(S) >= v(S) - tol for every coalition.

    Also reports c_i = v(N) - v(N∖{i}). Every core point satisfies x_i <= c_i,
    so when the c_i add up to v(N) the core holds only c.
    """
    start = time.perf_counter()
    payoffs = _as_payoffs(g, x)
    values = coalition_values(g, max_n, operation="is_in_core")
    masks = np.arange(len(values), dtype=np.int64)
    sums = _coalition_sums(payoffs, masks)

    deficits = values - sums
    failing = np.flatnonzero(deficits[1:] > tol) + 1
    found = sorted(
        (Violation((from_mask(int(s)),), float(deficits[s])) for s in failing.tolist()),
        key=Violation.sort_key,
    )

    full = len(values) - 1
    upper = tuple(float(values[full] - values[full ^ (1 << i)]) for i in range(g.n))
    gap = float(math.fsum(payoffs.tolist()) - values[full])
    unique = abs(math.fsum(upper) - float(values[full])) <= tol * max(1.0, abs(float(values[full])))
    lhs, rhs = verify_core_identity(g) if g.n >= 2 else (None, None)

    allocation = x if isinstance(x, Allocation) else Allocation(
        payoffs=tuple(payoffs.tolist()), kind=AllocationKind.CUSTOM, efficient=abs(gap) <= tol
    )
    logger.debug(
        f"Core check over {len(values) - 1} coalitions: {len(found)} violations, "
        f"efficiency gap {gap:.3g} ({time.perf_counter() - start:.3f}s)"
    )
    return CoreReport(
        allocation=allocation,
        is_unique_checked=unique,
        identity_lhs=lhs,
        identity_rhs=rhs,
        violations=tuple(found[:MAX_REPORTED_VIOLATIONS]),
        n_violations=len(found),
        n_checked=len(values) - 1,
        upper_bounds=upper,
        efficiency_gap=gap,
        tolerance=tol,
    )


def core_report(g: WeightedDigraph, tol: float = TOLERANCE, max_n: int = DEFAULT_CORE_MAX_N) -> CoreReport:
    return is_in_core(g, core_allocation(g), tol, max_n)


# ============================================================================
# Total balancedness
# ============================================================================

def subgame_allocation(g: WeightedDigraph, S: Iterable[int]) -> Allocation:
    """x̄_j: weight j receives from inside S plus its cheapest in-edge from outside S."""
    members = tuple(sorted(set(validate_members(g.n, S))))
    if not members:
        raise InvalidArgumentError("subgame allocation needs a nonempty coalition")
    inside = np.zeros(g.n, dtype=bool)
    inside[list(members)] = True

    tails, heads, weights = g.arrays
    keep = inside[tails] & inside[heads]
    internal = np.bincount(heads[keep], weights=weights[keep], minlength=g.n) if keep.any() else np.zeros(g.n)
    frozen = frozenset(members)
    payoffs = [float(internal[j]) + external_player_value(g, frozen, j) for j in members]

    total = coalition_value(g, frozen).total
    efficient = abs(math.fsum(payoffs) - total) <= TOLERANCE * max(1.0, total)
    return Allocation(payoffs=tuple(payoffs), kind=AllocationKind.SUBGAME, efficient=efficient, members=members)


@dataclass(frozen=True)
class BalancednessReport(CheckReport):
    n_subgames: int = 0

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        data = super().to_dict(labels)
        data["n_subgames"] = self.n_subgames
        return data


def verify_total_balancedness(
    g: WeightedDigraph,
    max_n: int = DEFAULT_BALANCEDNESS_MAX_N,
    *,
    threads: int = 1,
    tol: float = TOLERANCE,
) -> BalancednessReport:
    """Every subgame allocation lies in the core of its subgame.

    x̄(S) = v(S) and x̄(T) >= v(T) for every T ⊆ S. A witness with T == S means
    x̄(S) missed v(S) by more than ``tol`` in either direction.
    """
    start = time.perf_counter()
    values = coalition_values(g, max_n, operation="verify_total_balancedness")
    masks = np.arange(len(values), dtype=np.int64)
    subgames = sorted(range(1, len(values)), key=lambda s: (bin(s).count("1"), s))

    def work(part: range) -> Tuple[int, List[Violation]]:
        count = 0
        found = []
        for idx in part:
            s = subgames[idx]
            members = sorted(from_mask(s))
            allocation = subgame_allocation(g, members)
            excess = allocation.total - float(values[s])
            if excess > tol:
                # over-allocation; a shortfall shows up below as T == S
                found.append(Violation((from_mask(s), from_mask(s)), excess))
            payoffs = np.zeros(g.n)
            payoffs[members] = allocation.payoffs
            ts = masks[(masks & ~s) == 0]
            count += len(ts)
            deficits = values[ts] - _coalition_sums(payoffs, ts)
            for t, deficit in zip(ts[deficits > tol].tolist(), deficits[deficits > tol].tolist()):
                found.append(Violation((from_mask(s), from_mask(t)), float(deficit)))
        return count, found

    report = collect_report(
        "totally_balanced",
        "exhaustive",
        run_partitioned(work, len(subgames), threads),
        ("S", "T"),
        report_cls=BalancednessReport,
        n_subgames=len(subgames),
    )
    logger.debug(
        f"totally_balanced: {report.n_subgames} subgames, {report.n_checked} pairs, "
        f"{report.n_violations} violations ({time.perf_counter() - start:.3f}s)"
    )
    return report


# ============================================================================
# Distance between the core point and the values
# ============================================================================

@dataclass(frozen=True)
class StabilityGap:
    shapley: float
    banzhaf: float

    def to_dict(self) -> dict:
        return {"shapley": self.shapley, "banzhaf": self.banzhaf}


def stability_gap(g: WeightedDigraph) -> StabilityGap:
    """L1 distance from the core point to the Shapley and Banzhaf values."""
    core = core_allocation(g).as_array()
    shapley = float(np.abs(shapley_closed_form(g).as_array() - core).sum())
    banzhaf = float(np.abs(banzhaf_closed_form(g).as_array() - core).sum())
    return StabilityGap(shapley=shapley, banzhaf=banzhaf)
