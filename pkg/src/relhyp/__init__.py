"""Coarse-geometry workbench for electric spaces and trees of relatively hyperbolic graphs."""

__version__ = "0.1.0"
