from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import psutil

from ..core.config_utils import TrustGameConfig
from ..core.logger import logger
from ..core.validators import InvalidArgumentError
from ..game.game import check_monotone, check_superadditive, coalition_values, to_mask
from ..game.mobius import evaluate_decomposition, full_decomposition, mobius_oracle
from ..graph.graph_core import ValueKind, WeightedDigraph
from ..stability.core_solver import core_report, verify_total_balancedness
from ..values.values import bruteforce, closed_form

SUITES = ("superadditive", "monotone", "mobius", "values", "core", "total_balancedness")


@dataclass
class SuiteResult:
    suite: str
    status: str
    details: Dict[str, object] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_dict(self) -> dict:
        return {"suite": self.suite, "status": self.status, **self.details}


@dataclass
class VerifyReport:
    n: int
    n_edges: int
    results: List[SuiteResult]

    @property
    def passed(self) -> bool:
        return not any(r.failed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "graph": {"n": self.n, "edges": self.n_edges},
            "passed": self.passed,
            "suites": [r.to_dict() for r in self.results],
        }


@dataclass(frozen=True)
class SuiteContext:
    g: WeightedDigraph
    config: TrustGameConfig
    threads: int
    sample: Optional[int]
    seed: int
    labels: Sequence[str]

    @property
    def tol(self) -> float:
        return self.config.tolerance


def _status(ok: bool) -> str:
    return "pass" if ok else "fail"


def _superadditive(ctx: SuiteContext) -> SuiteResult:
    report = check_superadditive(
        ctx.g, ctx.config.guards.check_superadditive,
        sample=ctx.sample, seed=ctx.seed, threads=ctx.threads, tol=ctx.tol,
    )
    return SuiteResult("superadditive", _status(report.passed), report.to_dict(ctx.labels))


def _monotone(ctx: SuiteContext) -> SuiteResult:
    report = check_monotone(
        ctx.g, ctx.config.guards.check_monotone,
        sample=ctx.sample, seed=ctx.seed, threads=ctx.threads, tol=ctx.tol,
    )
    return SuiteResult("monotone", _status(report.passed), report.to_dict(ctx.labels))


def _mobius(ctx: SuiteContext) -> SuiteResult:
    decomposition = full_decomposition(ctx.g)
    oracle = mobius_oracle(ctx.g, ctx.config.guards.mobius_oracle)
    dividend_diff = max((abs(decomposition.dividend(s) - d) for s, d in oracle.items()), default=0.0)

    values = coalition_values(ctx.g, ctx.config.guards.mobius_oracle, operation="mobius_oracle")
    reconstruction_diff = max(
        (abs(evaluate_decomposition(decomposition, s) - values[to_mask(s)]) for s in oracle),
        default=0.0,
    )
    ok = dividend_diff <= ctx.tol and reconstruction_diff <= ctx.tol
    return SuiteResult(
        "mobius",
        _status(ok),
        {
            "n_checked": len(oracle),
            "max_dividend_diff": dividend_diff,
            "max_reconstruction_diff": reconstruction_diff,
        },
    )


def _values(ctx: SuiteContext) -> SuiteResult:
    details: Dict[str, object] = {}
    ok = True
    for kind in ValueKind:
        guard = getattr(ctx.config.guards, f"{kind.value}_bruteforce")
        exact = closed_form(ctx.g, kind)
        oracle = bruteforce(ctx.g, kind, guard)
        diff = float(np.max(np.abs(exact.as_array() - oracle.as_array()))) if ctx.g.n else 0.0
        details[kind.value] = {"max_abs_diff": diff, "sum": exact.total, "efficient": exact.efficient}
        ok = ok and diff <= ctx.tol
    ok = ok and abs(details["shapley"]["sum"] - ctx.g.total_weight) <= ctx.tol * max(1.0, ctx.g.total_weight)
    return SuiteResult("values", _status(ok), details)


def _core(ctx: SuiteContext) -> SuiteResult:
    report = core_report(ctx.g, ctx.tol, ctx.config.guards.is_in_core)
    identity_ok = report.identity_lhs is None or abs(report.identity_lhs - report.identity_rhs) <= ctx.tol
    ok = report.in_core and identity_ok and report.is_unique_checked
    return SuiteResult("core", _status(ok), report.to_dict(ctx.labels))


def _total_balancedness(ctx: SuiteContext) -> SuiteResult:
    report = verify_total_balancedness(
        ctx.g, ctx.config.guards.verify_total_balancedness, threads=ctx.threads, tol=ctx.tol
    )
    return SuiteResult("total_balancedness", _status(report.passed), report.to_dict(ctx.labels))


_RUNNERS: Dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "superadditive": _superadditive,
    "monotone": _monotone,
    "mobius": _mobius,
    "values": _values,
    "core": _core,
    "total_balancedness": _total_balancedness,
}

# guard of each suite that has no sampled mode
_GUARD_OF = {
    "mobius": ("mobius_oracle",),
    "values": ("shapley_bruteforce", "banzhaf_bruteforce"),
    "core": ("is_in_core",),
    "total_balancedness": ("verify_total_balancedness",),
}


def validate_suites(names: Sequence[str]) -> List[str]:
    unknown = [s for s in names if s not in _RUNNERS]
    if unknown:
        raise InvalidArgumentError(f"Unknown verify suites: {', '.join(unknown)} (known: {', '.join(SUITES)})")
    return list(names)


def run_suites(
    g: WeightedDigraph,
    config: TrustGameConfig,
    *,
    suites: Sequence[str] = SUITES,
    threads: int = 1,
    sample: Optional[int] = None,
    seed: Optional[int] = None,
) -> VerifyReport:
    """Run the named suites in order. With ``sample`` set, exhaustive-only suites past their guard are skipped."""
    ctx = SuiteContext(
        g=g,
        config=config,
        threads=threads,
        sample=sample or None,
        seed=config.sampling.seed if seed is None else seed,
        labels=g.labels,
    )
    results = []
    process = psutil.Process()
    for name in validate_suites(suites):
        exceeded = [gn for gn in _GUARD_OF.get(name, ()) if g.n > getattr(config.guards, gn)]
        if ctx.sample and exceeded:
            logger.warning(f"{name}: skipped, n={g.n} exceeds guard {exceeded[0]} and the suite cannot be sampled")
            results.append(SuiteResult(name, "skipped", {"reason": f"n exceeds {exceeded[0]}"}))
            continue

        start = time.perf_counter()
        result = _RUNNERS[name](ctx)
        result.elapsed = time.perf_counter() - start
        results.append(result)

        rss_mb = process.memory_info().rss / 1024 / 1024
        logger.info(f"{name:<20s} {result.status:<8s} {result.elapsed:7.3f}s  rss {rss_mb:.1f} MB")
        if result.failed:
            logger.error(f"{name}: violations found")
    return VerifyReport(n=g.n, n_edges=len(g.edges), results=results)
