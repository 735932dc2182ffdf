"""Exact non-regular path homology of digraphs."""

__version__ = "0.1.0"
