"""Milling tours of grid polyhedra and their canonical / zig-zag strip foldings."""

from __future__ import annotations

__version__ = "0.1.0"

from .bands import BandSet, enumerate_bands, overlap_graph
from .errors import StripFoldError
from .folding import StripFolding, StripKind, validate_folding
from .surface import GridSurface, extract_surface, load_voxels
from .tour import MillingTour, doubled_tree_tour, tree_tour

__all__ = [
    "BandSet",
    "GridSurface",
    "MillingTour",
    "StripFoldError",
    "StripFolding",
    "StripKind",
    "doubled_tree_tour",
    "enumerate_bands",
    "extract_surface",
    "load_voxels",
    "overlap_graph",
    "tree_tour",
    "validate_folding",
]
