import io
from pathlib import Path

import pytest

from trustgame.python.cli import EXIT_OK, Command, run

from conftest import EXAMPLES_DIR

GOLDEN_DIR = Path(__file__).parent / "golden"

GRAPHS = {"g2": "g2.txt", "g3": "g3.txt", "gf": "gf.json"}
SWEEP_EDGES = {"g2": "1,2", "g3": "3,1", "gf": "i,j"}
VERBS = ("shapley", "banzhaf", "core", "decompose", "sweep")


def render(name, verb, threads):
    options = {"threads": threads}
    if verb == "sweep":
        options.update(edge=SWEEP_EDGES[name], steps=11)
    out = io.StringIO()
    code = run(Command(verb=verb, graph_path=str(EXAMPLES_DIR / GRAPHS[name]), options=options), out)
    assert code == EXIT_OK
    return out.getvalue().encode("utf-8")


@pytest.mark.parametrize("threads", [1, 4])
@pytest.mark.parametrize("verb", VERBS)
@pytest.mark.parametrize("name", sorted(GRAPHS))
def test_output_matches_golden(name, verb, threads):
    suffix = "tsv" if verb == "sweep" else "json"
    expected = (GOLDEN_DIR / f"{name}_{verb}.{suffix}").read_bytes()
    assert render(name, verb, threads) == expected
