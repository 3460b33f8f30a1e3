"""Boundary algebras, boundary states and type classification for LTO spin systems."""

__version__ = "0.1.0"
