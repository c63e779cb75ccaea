"""Exact-arithmetic tautological systems for CY hypersurfaces in flag varieties."""

__version__ = "0.1.0"
