"""Wall spaces on piecewise-Euclidean 2-complexes: development, walls, cubulation."""

__version__ = "0.1.0"
