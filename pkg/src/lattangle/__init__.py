"""Rational angles in plane lattices: exact search and verification tools."""

__version__ = "0.1.0"
