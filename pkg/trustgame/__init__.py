"""Trust game toolkit: closed-form values, decomposition and core of the game induced by a weighted digraph."""

__version__ = "1.0.0"
