"""Boundary slopes of knot complements from ideal triangulations via degeneration indices."""

__version__ = "0.1.0"
