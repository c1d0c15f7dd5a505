"""Quaternionic Weierstrass machinery for minimal surfaces in R^4."""

__version__ = "0.1.0"
