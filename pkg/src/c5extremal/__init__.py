"""Exact and certified computations around the induced-pentagon extremal problem."""

__version__ = "0.1.0"
