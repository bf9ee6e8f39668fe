"""Exact-arithmetic generalized pairs on complete toric surfaces."""

__version__ = "0.1.0"
