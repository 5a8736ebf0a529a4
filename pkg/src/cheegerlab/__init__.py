"""Exact Cheeger constants, l1 coboundary gaps and finite-scale property-A
obstructions for expander families."""

__version__ = "0.1.0"
