"""Exact algorithms for coprime bases, lattices, abelian groups, orders,
fractional ideals, finite rings and quadratic symbols."""

__version__ = "0.1.0"
