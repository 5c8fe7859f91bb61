"""Exact computations with Kac modules of type I Lie superalgebras."""

__version__ = "0.1.0"
