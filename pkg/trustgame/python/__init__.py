"""
Trust game Python package
Graph model, characteristic function, values, core and command front end.
"""

__version__ = "1.0.0"

# Re-export commonly used modules for convenient imports
from . import core
from . import graph
from . import game
from . import values
from . import stability

# Direct exports of most commonly used items
from .core import logger
from .graph import WeightedDigraph, load_graph, parse_graph

__all__ = [
    "core",
    "graph",
    "game",
    "values",
    "stability",
    "logger",
    "WeightedDigraph",
    "load_graph",
    "parse_graph",
]
