"""Constructions of (possibly discontinuous) strongly quasiconvex functions and
numerical checks of the strong quasiconvexity inequality."""

__version__ = "0.1.0"
