"""Exact-arithmetic workbench for Yang R-matrix, fusion, and
reflection-equation structures, verified with zero numerical tolerance."""

__version__ = "0.1.0"
