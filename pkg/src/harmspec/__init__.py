"""Numerical toolkit for boundary behaviour of harmonic functions and
resolvent descriptions of spectral subspaces of matrix groups."""

from . import construction, geometry, harmonic, opgroup, potential  # noqa: F401

__version__ = "0.1.0"
