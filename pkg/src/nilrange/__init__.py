"""Numerical ranges of small complex matrices and their flat boundary portions."""

__version__ = "0.1.0"
