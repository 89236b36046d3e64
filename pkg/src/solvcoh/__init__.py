"""Exact rational cohomology of polycyclic groups through their algebraic hulls."""

__version__ = "0.1.0"
