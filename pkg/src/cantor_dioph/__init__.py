"""Exact rational approximation to Cantor sets."""
__version__ = "0.1.0"
