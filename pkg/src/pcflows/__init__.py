"""Integrable curve flows in the pseudoconformal 3-sphere.

Symbolic hierarchies and their geometric realizations, numerical moving
frames for Legendrian and transverse curves, and pseudo-spectral evolution
of the curve invariants.
"""

from . import diffpoly, evolution, frames, hierarchies, linop, spectral, uv
from .diffpoly import DiffPoly, parse_expr
from .spectral import Grid1D

__all__ = ["DiffPoly", "Grid1D", "diffpoly", "evolution", "frames", "hierarchies", "linop",
           "parse_expr", "spectral", "uv"]
__version__ = "0.1.0"
