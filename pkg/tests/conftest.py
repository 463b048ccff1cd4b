from __future__ import annotations

import pytest

from stripfold.bands import BandCover, band_graph, enumerate_bands, overlap_graph, spanning_tree
from stripfold.surface import GridSurface, Square, extract_surface
from stripfold.tour import tree_tour

CUBE = frozenset({(0, 0, 0)})
BAR = frozenset({(0, 0, 0), (0, 0, 1)})  # long axis Z
BLOCK = frozenset((x, y, z) for x in range(2) for y in range(2) for z in range(2))
L_TROMINO = frozenset({(0, 0, 0), (1, 0, 0), (0, 1, 0)})
RING = frozenset((x, y, 0) for x in range(3) for y in range(3) if (x, y) != (1, 1))


def flat_patch(w: int, h: int) -> GridSurface:
    return GridSurface.from_squares([Square((x, y, 0), 2, 1) for x in range(w) for y in range(h)], closed=False)


def band_id(bandset, axis: int) -> int:
    return next(b.id for b in bandset.bands if b.axis == axis)


def cube_tour(axes=(0, 1)):
    s = extract_surface(CUBE)
    bs = enumerate_bands(s)
    ids = frozenset(band_id(bs, a) for a in axes)
    tree = spanning_tree(band_graph(BandCover(ids), overlap_graph(bs)))
    return s, bs, tree_tour(bs, tree)


@pytest.fixture
def cube():
    return extract_surface(CUBE)


@pytest.fixture
def bar():
    return extract_surface(BAR)


@pytest.fixture
def block():
    return extract_surface(BLOCK)
