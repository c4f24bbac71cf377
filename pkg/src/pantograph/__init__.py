"""Enumeration and bijective decomposition of bipartite planar maps
with three tight boundaries."""

__version__ = "0.1.0"
