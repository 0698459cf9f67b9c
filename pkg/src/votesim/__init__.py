"""Deterministic agent-based election simulator with scandal dynamics."""

__version__ = "0.1.0"
