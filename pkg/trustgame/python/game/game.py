from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from types import MappingProxyType
from typing import Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from ..core.logger import logger
from ..core.validators import guard, validate_members, validate_player
from ..graph.graph_core import WeightedDigraph

Coalition = FrozenSet[int]

DEFAULT_CHECK_MAX_N = 12
DEFAULT_SEED = 20240611
TOLERANCE = 1e-9
MAX_REPORTED_VIOLATIONS = 100


def coalition(g: WeightedDigraph, members: Iterable[int]) -> Coalition:
    return frozenset(validate_members(g.n, members))


def to_mask(members: Iterable[int]) -> int:
    mask = 0
    for m in members:
        mask |= 1 << m
    return mask


def from_mask(mask: int) -> Coalition:
    members = []
    i = 0
    while mask:
        if mask & 1:
            members.append(i)
        mask >>= 1
        i += 1
    return frozenset(members)


def label_members(members: Iterable[int], labels: Optional[Sequence[str]] = None) -> List:
    ordered = sorted(members)
    if labels is None:
        return ordered
    return [labels[m] for m in ordered]


# ============================================================================
# Characteristic function
# ============================================================================

@dataclass(frozen=True)
class ValueBreakdown:
    internal: float
    external: float
    total: float
    per_player_external: Mapping[int, float]

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        name = (lambda i: labels[i]) if labels is not None else (lambda i: str(i))
        return {
            "internal": self.internal,
            "external": self.external,
            "total": self.total,
            "per_player_external": {name(i): w for i, w in sorted(self.per_player_external.items())},
        }


def external_player_value(g: WeightedDigraph, S: Iterable[int], i: int) -> float:
    """w_i(S): cheapest in-edge of i from outside S, 0 if i is not in S or has none."""
    i = validate_player(g.n, i)
    members = S if isinstance(S, frozenset) else frozenset(S)
    if i not in members:
        return 0.0
    table = g.in_edges
    lo, hi = int(table.offsets[i]), int(table.offsets[i + 1])
    for tail, weight in zip(table.tails[lo:hi].tolist(), table.weights[lo:hi].tolist()):
        if tail not in members:
            return weight
    return 0.0


def coalition_value(g: WeightedDigraph, S: Iterable[int]) -> ValueBreakdown:
    members = coalition(g, S)
    internal = 0.0
    for (u, v), w in g.edges.items():
        if u in members and v in members:
            internal += w
    per_player = {i: external_player_value(g, members, i) for i in sorted(members)}
    external = float(sum(per_player.values()))
    return ValueBreakdown(
        internal=internal,
        external=external,
        total=internal + external,
        per_player_external=MappingProxyType(per_player),
    )


def coalition_values(g: WeightedDigraph, max_n: int = 16, *, operation: str = "coalition_values") -> np.ndarray:
    """v(S) for every coalition, indexed by bitmask.

    Evaluated column-wise over all 2^n masks at once; the external term of
    each player walks its profile from the top rank down so the last outside
    neighbour written is the cheapest one.
    """
    guard(operation, g.n, max_n)
    masks = np.arange(1 << g.n, dtype=np.int64)
    member = [((masks >> i) & 1).astype(bool) for i in range(g.n)]
    values = np.zeros(len(masks), dtype=float)

    for (u, v), w in g.edges.items():
        values += w * (member[u] & member[v])

    table = g.in_edges
    for i in range(g.n):
        lo, hi = int(table.offsets[i]), int(table.offsets[i + 1])
        if lo == hi:
            continue
        cheapest = np.zeros(len(masks), dtype=float)
        for e in range(hi - 1, lo - 1, -1):
            outside = ~member[int(table.tails[e])]
            cheapest = np.where(outside, table.weights[e], cheapest)
        values += np.where(member[i], cheapest, 0.0)
    return values


# ============================================================================
# Property checkers
# ============================================================================

@dataclass(frozen=True)
class Violation:
    coalitions: Tuple[Coalition, ...]
    deficit: float

    def sort_key(self) -> tuple:
        return (sum(len(c) for c in self.coalitions), tuple(tuple(sorted(c)) for c in self.coalitions))

    def to_dict(self, names: Sequence[str], labels: Optional[Sequence[str]] = None) -> dict:
        entry: Dict[str, object] = {n: label_members(c, labels) for n, c in zip(names, self.coalitions)}
        entry["deficit"] = self.deficit
        return entry


@dataclass(frozen=True)
class CheckReport:
    claim: str
    n_checked: int
    violations: Tuple[Violation, ...] = ()
    n_violations: int = 0
    mode: str = "exhaustive"
    witness_names: Tuple[str, ...] = ("S", "T")

    @property
    def passed(self) -> bool:
        return self.n_violations == 0

    @property
    def minimal_witness(self) -> Optional[Violation]:
        return self.violations[0] if self.violations else None

    def to_dict(self, labels: Optional[Sequence[str]] = None) -> dict:
        return {
            "claim": self.claim,
            "n_checked": self.n_checked,
            "mode": self.mode,
            "n_violations": self.n_violations,
            "violations": [v.to_dict(self.witness_names, labels) for v in self.violations],
        }


def collect_report(
    claim: str,
    mode: str,
    chunks: List[Tuple[int, List[Violation]]],
    names: Tuple[str, ...],
    *,
    report_cls: type = CheckReport,
    **extra,
) -> CheckReport:
    """Merge per-thread chunks; violations are ordered by witness size so the first is minimal."""
    n_checked = sum(count for count, _ in chunks)
    found = sorted((v for _, vs in chunks for v in vs), key=Violation.sort_key)
    return report_cls(
        claim=claim,
        n_checked=n_checked,
        violations=tuple(found[:MAX_REPORTED_VIOLATIONS]),
        n_violations=len(found),
        mode=mode,
        witness_names=names,
        **extra,
    )


def run_partitioned(work: Callable[[range], Tuple[int, List[Violation]]], total: int, threads: int):
    threads = max(1, int(threads))
    if threads == 1 or total < 2:
        return [work(range(total))]
    step = -(-total // threads)
    parts = [range(lo, min(lo + step, total)) for lo in range(0, total, step)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(work, parts))


def check_superadditive(
    g: WeightedDigraph,
    max_n: int = DEFAULT_CHECK_MAX_N,
    *,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    tol: float = TOLERANCE,
) -> CheckReport:
    """v(S ∪ T) >= v(S) + v(T) for disjoint S, T."""
    claim = "superadditive"
    start = time.perf_counter()

    if sample:
        rng = np.random.default_rng(seed)
        violations = []
        for _ in range(int(sample)):
            side = rng.integers(0, 3, size=g.n)
            S = frozenset(np.flatnonzero(side == 1).tolist())
            T = frozenset(np.flatnonzero(side == 2).tolist())
            gap = coalition_value(g, S).total + coalition_value(g, T).total - coalition_value(g, S | T).total
            if gap > tol:
                violations.append(Violation((S, T), gap))
        report = collect_report(claim, "sampled", [(int(sample), violations)], ("S", "T"))
    else:
        values = coalition_values(g, max_n, operation="check_superadditive")
        masks = np.arange(len(values), dtype=np.int64)

        def work(part: range) -> Tuple[int, List[Violation]]:
            count = 0
            found = []
            for s in part:
                ts = masks[(masks & s) == 0]
                count += len(ts)
                gap = values[s] + values[ts] - values[s | ts]
                for t in ts[gap > tol].tolist():
                    found.append(Violation((from_mask(s), from_mask(t)), float(values[s] + values[t] - values[s | t])))
            return count, found

        report = collect_report(claim, "exhaustive", run_partitioned(work, len(values), threads), ("S", "T"))

    logger.debug(
        f"{claim}: {report.mode} over {report.n_checked} pairs, "
        f"{report.n_violations} violations ({time.perf_counter() - start:.3f}s)"
    )
    return report


def check_monotone(
    g: WeightedDigraph,
    max_n: int = DEFAULT_CHECK_MAX_N,
    *,
    sample: Optional[int] = None,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    tol: float = TOLERANCE,
) -> CheckReport:
    """v(S) <= v(T) for S ⊆ T, checked on covering pairs T = S ∪ {i}."""
    claim = "monotone"
    start = time.perf_counter()

    if sample:
        rng = np.random.default_rng(seed)
        violations = []
        checked = 0
        for _ in range(int(sample)):
            inside = rng.random(g.n) < 0.5
            outside = np.flatnonzero(~inside)
            if not len(outside):
                continue
            i = int(rng.choice(outside))
            S = frozenset(np.flatnonzero(inside).tolist())
            checked += 1
            gap = coalition_value(g, S).total - coalition_value(g, S | {i}).total
            if gap > tol:
                violations.append(Violation((S, S | {i}), gap))
        report = collect_report(claim, "sampled", [(checked, violations)], ("S", "T"))
    else:
        values = coalition_values(g, max_n, operation="check_monotone")
        masks = np.arange(len(values), dtype=np.int64)

        def work(part: range) -> Tuple[int, List[Violation]]:
            count = 0
            found = []
            for i in part:
                bit = 1 << i
                ss = masks[(masks & bit) == 0]
                count += len(ss)
                gap = values[ss] - values[ss | bit]
                for s in ss[gap > tol].tolist():
                    found.append(Violation((from_mask(s), from_mask(s | bit)), float(values[s] - values[s | bit])))
            return count, found

        report = collect_report(claim, "exhaustive", run_partitioned(work, g.n, threads), ("S", "T"))

    logger.debug(
        f"{claim}: {report.mode} over {report.n_checked} pairs, "
        f"{report.n_violations} violations ({time.perf_counter() - start:.3f}s)"
    )
    return report
