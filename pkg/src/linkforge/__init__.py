"""Tricolored link diagrams: colorings, allowed moves and classification."""

__version__ = "0.1.0"
