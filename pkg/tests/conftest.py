import sys
from pathlib import Path

import numpy as np
import pytest

repo_root = Path(__file__).resolve().parent.parent
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))

from trustgame.python.graph import WeightedDigraph, load_graph, random_graph

EXAMPLES_DIR = repo_root / "trustgame" / "examples"
TOL = 1e-9
SEED = 20240611


@pytest.fixture
def examples_dir() -> Path:
    return EXAMPLES_DIR


@pytest.fixture
def g2() -> WeightedDigraph:
    return load_graph(EXAMPLES_DIR / "g2.txt")


@pytest.fixture
def g3() -> WeightedDigraph:
    return load_graph(EXAMPLES_DIR / "g3.txt")


@pytest.fixture
def gf() -> WeightedDigraph:
    return load_graph(EXAMPLES_DIR / "gf.json")


@pytest.fixture
def edgeless3() -> WeightedDigraph:
    return WeightedDigraph(n=3, edges={})


def make_random_graphs(count: int, n_min: int = 2, n_max: int = 8, seed: int = SEED):
    """Seeded graphs: density 0.5, weights uniform in [0, 1], 30% forced to zero."""
    rng = np.random.default_rng(seed)
    return [
        random_graph(rng, int(rng.integers(n_min, n_max + 1)), density=0.5, zero_fraction=0.3)
        for _ in range(count)
    ]


@pytest.fixture(scope="session")
def random_graphs():
    return make_random_graphs(200)
