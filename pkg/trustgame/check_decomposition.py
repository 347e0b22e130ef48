#!/usr/bin/env python3
"""Re-evaluate a saved decomposition over every coalition and compare it with v(S).

Usage:
    python app.py decompose graph.txt > decompose.json
    python trustgame/check_decomposition.py graph.txt decompose.json
"""

import argparse
import json
import sys
from pathlib import Path


script_dir = Path(__file__).parent
repo_root = script_dir.parent
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

from trustgame.python.core import logger
from trustgame.python.core.validators import TrustGameError
from trustgame.python.game import GameDecomposition, UnanimityTerm, coalition_values, evaluate_decomposition, from_mask
from trustgame.python.graph import load_graph

DEFAULT_MAX_N = 12


def load_decomposition(path: str, labels) -> GameDecomposition:
    with open(path, 'r', encoding='utf-8') as f:
        data = json.load(f)
    index = {label: i for i, label in enumerate(labels)}
    terms = []
    for pos, term in enumerate(data.get('terms', [])):
        try:
            support = frozenset(index[str(member)] for member in term['support'])
        except KeyError as e:
            raise TrustGameError(f"terms[{pos}]: unknown player {e.args[0]!r}")
        terms.append(UnanimityTerm(support, float(term['coeff']), term.get('origin', 'chain')))
    return GameDecomposition.from_terms(len(labels), terms)


def check(graph_path: str, decomposition_path: str, max_n: int = DEFAULT_MAX_N, tol: float = 1e-9) -> int:
    g = load_graph(graph_path)
    decomposition = load_decomposition(decomposition_path, g.labels)
    values = coalition_values(g, max_n, operation="check_decomposition")

    worst = 0.0
    mismatches = 0
    for mask in range(len(values)):
        got = evaluate_decomposition(decomposition, from_mask(mask))
        diff = abs(got - float(values[mask]))
        worst = max(worst, diff)
        if diff > tol:
            mismatches += 1
            if mismatches <= 10:
                members = ",".join(g.labels[i] for i in sorted(from_mask(mask)))
                logger.error(f"v({{{members}}}) = {float(values[mask])!r}, decomposition gives {got!r} (off by {diff:.3g})")

    logger.info(f"Checked {len(values)} coalitions, max abs diff {worst:.3g}, {mismatches} mismatches")
    return 0 if mismatches == 0 else 2


def main():
    parser = argparse.ArgumentParser(description='Round-trip check of a decompose output')
    parser.add_argument('graph', help='Graph file the decomposition was computed from')
    parser.add_argument('decomposition', help='JSON written by "app.py decompose"')
    parser.add_argument('--max-n', type=int, default=DEFAULT_MAX_N, help='Exhaustive guard')
    args = parser.parse_args()

    try:
        return check(args.graph, args.decomposition, args.max_n)
    except (TrustGameError, OSError, json.JSONDecodeError) as e:
        logger.error(str(e))
        return 1


if __name__ == '__main__':
    sys.exit(main())
