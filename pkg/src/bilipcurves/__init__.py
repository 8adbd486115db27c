"""Exact bi-Lipschitz classification of complex algebraic curves."""

__version__ = "0.1.0"
