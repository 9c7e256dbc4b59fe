"""Exact proximity spaces over finitely presented models and their coproducts."""

__version__ = "0.1.0"
