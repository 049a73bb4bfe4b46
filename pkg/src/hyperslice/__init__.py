"""Exact generating functions of planar hypermaps via slice decomposition."""

__version__ = "0.1.0"
