"""Exact combinatorial intersection cohomology of toric varieties.

Computes intersection cohomology Betti numbers of (possibly singular,
possibly non-simplicial) toric varieties directly from fan data, using
exact rational arithmetic throughout.
"""

__version__ = "0.1.0"
