"""Finite-group classification engine for free, homologically trivial actions on rational homology 3-spheres."""

__version__ = "0.1.0"
