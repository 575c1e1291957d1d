"""Exact-arithmetic geometry of numbers: lattices, convex bodies, counting,
packing, and the classical theorems as constructive, certified operations."""

__version__ = "0.1.0"
