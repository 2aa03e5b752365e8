"""Exact verification of Laplacian symmetries and conformally invariant pairings."""

__version__ = "0.1.0"
