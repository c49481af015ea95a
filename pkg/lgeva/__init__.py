"""Leggett-Garg evaluator: temporal correlations of arbitrary spin."""

__version__ = '1.0.0'
