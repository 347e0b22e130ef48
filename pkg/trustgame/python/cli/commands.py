"""Verb dispatch behind ``app.py``.

Every verb loads one graph, runs one library operation and writes a single
JSON document (TSV for ``sweep``) to the output stream. Diagnostics go
through the shared logger on stderr.
"""

from __future__ import annotations

import os
import sys
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, TextIO, Tuple

import numpy as np
import psutil

from ..core.config_utils import TrustGameConfig, resolve_config
from ..core.logger import logger
from ..core.serialization import dump_json
from ..core.validators import InvalidArgumentError, TrustGameError
from ..game.game import coalition, coalition_value, label_members
from ..game.mobius import full_decomposition
from ..graph.graph_core import Edge, ValueKind, WeightedDigraph, load_graph
from ..stability.core_solver import core_report, stability_gap
from ..values.marginal import marginal_effect, value_attribution
from ..values.sweep import sweep_edge, weight_grid
from ..values.values import bruteforce, closed_form, is_zero_shapley_player
from .suites import SUITES, run_suites

VERBS = ("value", "shapley", "banzhaf", "core", "decompose", "marginal", "sweep", "verify", "props", "attribution")

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_VIOLATIONS = 2


@dataclass(frozen=True)
class Command:
    verb: str
    graph_path: str
    options: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.verb not in VERBS:
            raise InvalidArgumentError(f"Unknown verb '{self.verb}' (expected one of: {', '.join(VERBS)})")

    def option(self, name: str, default: Any = None) -> Any:
        value = self.options.get(name)
        return default if value is None else value


@dataclass(frozen=True)
class RunContext:
    command: Command
    g: WeightedDigraph
    config: TrustGameConfig
    threads: int

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.g.labels


def default_threads(config: TrustGameConfig) -> int:
    physical = psutil.cpu_count(logical=False) or 1
    return max(1, min(physical, config.max_threads))


# ============================================================================
# Option parsing
# ============================================================================

def _split(raw: str) -> List[str]:
    return [part.strip() for part in str(raw).split(",") if part.strip()]


def _player(g: WeightedDigraph, label: Any) -> int:
    return g.index_of(str(label))


def _edge(g: WeightedDigraph, raw: Optional[str]) -> Edge:
    if not raw:
        raise InvalidArgumentError("--edge is required (format: from,to)")
    parts = _split(raw)
    if len(parts) != 2:
        raise InvalidArgumentError(f"--edge expects 'from,to', got {raw!r}")
    return _player(g, parts[0]), _player(g, parts[1])


def _method(command: Command) -> ValueKind:
    raw = command.option("method", ValueKind.SHAPLEY.value)
    try:
        return ValueKind(str(raw).lower())
    except ValueError:
        raise InvalidArgumentError(f"--method must be shapley or banzhaf, got {raw!r}")


# ============================================================================
# Verbs
# ============================================================================

def _value(ctx: RunContext) -> Tuple[Any, int]:
    members = coalition(ctx.g, [_player(ctx.g, p) for p in _split(ctx.command.option("coalition", ""))])
    payload = {"coalition": label_members(members, ctx.labels)}
    payload.update(coalition_value(ctx.g, members).to_dict(ctx.labels))
    return payload, EXIT_OK


def _allocation(ctx: RunContext) -> Tuple[Any, int]:
    kind = ValueKind(ctx.command.verb)
    allocation = closed_form(ctx.g, kind)
    payload = allocation.to_dict(ctx.labels)
    if ctx.command.option("oracle", False):
        guard = getattr(ctx.config.guards, f"{kind.value}_bruteforce")
        oracle = bruteforce(ctx.g, kind, guard)
        payload["oracle"] = list(oracle.payoffs)
        payload["max_abs_diff"] = float(np.max(np.abs(allocation.as_array() - oracle.as_array()))) if ctx.g.n else 0.0
    return payload, EXIT_OK


def _core(ctx: RunContext) -> Tuple[Any, int]:
    report = core_report(ctx.g, ctx.config.tolerance, ctx.config.guards.is_in_core)
    payload = report.to_dict(ctx.labels)
    payload["stability_gap"] = stability_gap(ctx.g).to_dict()
    return payload, EXIT_OK


def _decompose(ctx: RunContext) -> Tuple[Any, int]:
    return full_decomposition(ctx.g).to_dict(ctx.labels), EXIT_OK


def _marginal(ctx: RunContext) -> Tuple[Any, int]:
    edge = _edge(ctx.g, ctx.command.option("edge"))
    target = ctx.command.option("target")
    if target is None:
        raise InvalidArgumentError("--target is required")
    report = marginal_effect(ctx.g, edge, _player(ctx.g, target), _method(ctx.command))
    return report.to_dict(ctx.labels), EXIT_OK


def _sweep(ctx: RunContext) -> Tuple[Any, int]:
    edge = _edge(ctx.g, ctx.command.option("edge"))
    raw_targets = ctx.command.option("targets")
    targets = [_player(ctx.g, t) for t in _split(raw_targets)] if raw_targets else [edge[1], edge[0]]
    steps = int(ctx.command.option("steps", ctx.config.sweep_steps))
    table = sweep_edge(ctx.g, edge, targets, weight_grid(steps), _method(ctx.command))
    if ctx.command.option("json", False):
        return table.to_dict(ctx.labels), EXIT_OK
    return table.to_tsv(ctx.labels, ctx.config.output.significant_digits), EXIT_OK


def _verify(ctx: RunContext) -> Tuple[Any, int]:
    suites = ctx.command.option("suites") or SUITES
    if isinstance(suites, str):
        suites = _split(suites)
    report = run_suites(
        ctx.g,
        ctx.config,
        suites=suites,
        threads=ctx.threads,
        sample=ctx.command.option("sample", ctx.config.sampling.samples),
        seed=ctx.command.option("seed", ctx.config.sampling.seed),
    )
    return report.to_dict(), EXIT_OK if report.passed else EXIT_VIOLATIONS


def _props(ctx: RunContext) -> Tuple[Any, int]:
    g = ctx.g
    degrees = g.in_edges.degrees.tolist()
    isolated = [i for i in range(g.n) if degrees[i] == 0 and not g.out_neighbors[i]]
    zero = [i for i in range(g.n) if is_zero_shapley_player(g, i)]
    return {
        "n": g.n,
        "edges": len(g.edges),
        "total_weight": g.total_weight,
        "in_degree": {ctx.labels[i]: int(m) for i, m in enumerate(degrees)},
        "isolated": label_members(isolated, ctx.labels),
        "zero_shapley": label_members(zero, ctx.labels),
    }, EXIT_OK


def _attribution(ctx: RunContext) -> Tuple[Any, int]:
    player = ctx.command.option("player")
    if player is None:
        raise InvalidArgumentError("--player is required")
    i = _player(ctx.g, player)
    kind = _method(ctx.command)
    contributions = value_attribution(ctx.g, i, kind)
    return {
        "player": ctx.labels[i],
        "method": kind.value,
        "value": closed_form(ctx.g, kind)[i],
        "sum": float(sum(c.contribution for c in contributions)),
        "contributions": [c.to_dict(ctx.labels) for c in contributions],
    }, EXIT_OK


_HANDLERS: Dict[str, Callable[[RunContext], Tuple[Any, int]]] = {
    "value": _value,
    "shapley": _allocation,
    "banzhaf": _allocation,
    "core": _core,
    "decompose": _decompose,
    "marginal": _marginal,
    "sweep": _sweep,
    "verify": _verify,
    "props": _props,
    "attribution": _attribution,
}


def configure_logging(config: TrustGameConfig, verbose: bool = False) -> None:
    if verbose:
        logger.set_level("debug")
    else:
        logger.set_level(os.environ.get("TRUSTGAME_LOG_LEVEL") or config.log_level)


def run(command: Command, out: Optional[TextIO] = None) -> int:
    """Execute one command; returns 0 on success, 1 on input errors, 2 when a verify suite fails."""
    out = out if out is not None else sys.stdout
    try:
        config = resolve_config(command.option("config"), max_n=command.option("max_n"))
        configure_logging(config, bool(command.option("verbose", False)))
        threads = int(command.option("threads", default_threads(config)))
        if threads < 1:
            raise InvalidArgumentError(f"--threads must be at least 1, got {threads}")

        g = load_graph(command.graph_path, command.option("format"))
        logger.debug(f"{command.verb}: {command.graph_path} (n={g.n}, edges={len(g.edges)}, threads={threads})")

        payload, code = _HANDLERS[command.verb](RunContext(command, g, config, threads))
    except TrustGameError as e:
        logger.error(str(e))
        return EXIT_INPUT_ERROR
    except OSError as e:
        logger.error(f"Cannot read {command.graph_path}: {e.strerror or e}")
        return EXIT_INPUT_ERROR

    out.write(payload if isinstance(payload, str) else dump_json(payload, config.output.significant_digits))
    out.flush()
    return code
