"""Brandubh rules engine and exact state-space bound."""

__version__ = "0.1.0"
