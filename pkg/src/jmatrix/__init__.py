"""Spectral analysis of Schrodinger-type operators through tridiagonal (J-matrix) representations."""

__version__ = "0.1.0"
