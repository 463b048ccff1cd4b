from __future__ import annotations

import pytest

from stripfold.bands import (
    BandCover,
    band_graph,
    brute_force_min_band_cover,
    cover_from_vertex_cover,
    enumerate_bands,
    overlap_graph,
    spanning_tree,
    uncovered_squares,
)
from stripfold.corpus import polycube_corpus
from stripfold.errors import CoverError, OracleLimitError, UnsupportedError
from stripfold.surface import Square, extract_surface

from conftest import BAR, BLOCK, CUBE, band_id, flat_patch


def test_cube_bands(cube):
    bs = enumerate_bands(cube)
    assert len(bs) == 3
    assert sorted(b.axis for b in bs.bands) == [0, 1, 2]
    assert all(len(b) == 4 for b in bs.bands)


def test_bar_bands(bar):
    bs = enumerate_bands(bar)
    by_axis = sorted((b.axis, len(b)) for b in bs.bands)
    assert by_axis == [(0, 6), (1, 6), (2, 4), (2, 4)]


def test_band_cycles_are_slab_cycles(block):
    bs = enumerate_bands(block)
    for b in bs.bands:
        for i, s in enumerate(b.cycle):
            assert s.axis != b.axis
            t = b.cycle[(i + 1) % len(b)]
            e = block.shared_edge(s, t)
            assert e.axis == b.axis
        assert len(set(b.cycle)) == len(b) and len(b) % 2 == 0


def test_each_square_in_two_bands():
    for _, s in polycube_corpus(5, 20, 10):
        bs = enumerate_bands(s)
        count = {sq: 0 for sq in s.squares}
        for b in bs.bands:
            for sq in b.cycle:
                count[sq] += 1
        assert set(count.values()) == {2}


def test_open_surface_rejected():
    with pytest.raises(UnsupportedError):
        enumerate_bands(flat_patch(2, 2))


def test_cube_overlap_triangle(cube):
    g = overlap_graph(enumerate_bands(cube))
    assert g.edges == {(0, 1), (0, 2), (1, 2)}
    assert {g.part(v) for v in g.vertices} == {0, 1, 2}


def test_bar_overlap(bar):
    bs = enumerate_bands(bar)
    g = overlap_graph(bs)
    x, y = band_id(bs, 0), band_id(bs, 1)
    z0, z1 = [b.id for b in bs.bands if b.axis == 2]
    assert len(g.vertices) == 4
    assert g.edges == {tuple(sorted(p)) for p in [(x, y), (x, z0), (x, z1), (y, z0), (y, z1)]}


def test_overlap_edge_count_half_area():
    shapes = [extract_surface(v) for v in (CUBE, BAR, BLOCK)] + [s for _, s in polycube_corpus(6, 30, 12)]
    for s in shapes:
        g = overlap_graph(enumerate_bands(s))
        assert len(g.edges) == s.N // 2
        assert all(g.part(a) != g.part(b) for a, b in g.edges)


def test_overlapping_bands_share_two_squares():
    for _, s in polycube_corpus(7, 20, 12):
        bs = enumerate_bands(s)
        for a, b in overlap_graph(bs).edges:
            assert len(bs[a].squares & bs[b].squares) >= 2


def test_cover_from_vertex_cover(cube):
    bs = enumerate_bands(cube)
    x, y = band_id(bs, 0), band_id(bs, 1)
    assert cover_from_vertex_cover({x, y}, bs).size == 2
    with pytest.raises(CoverError) as ei:
        cover_from_vertex_cover({x}, bs)
    # the X band misses both X-normal squares; the first is the -X ("left") face
    assert ei.value.square == Square((0, 0, 0), 0, -1)
    assert cover_from_vertex_cover(set(range(len(bs))), bs).size == 3


def _min_cover_by_sets(bs) -> int:
    from itertools import combinations

    universe = set(bs.surface.squares)
    for k in range(1, len(bs) + 1):
        for combo in combinations(bs.bands, k):
            if set().union(*(b.squares for b in combo)) == universe:
                return k


# 2x2x2 block: each face pair's 8 squares needs both bands of one other axis,
# and covering all three face pairs that way takes 4 bands, not 3
@pytest.mark.parametrize("vox,k", [(CUBE, 2), (BAR, 2), (BLOCK, 4)])
def test_oracle_minimum(vox, k):
    bs = enumerate_bands(extract_surface(vox))
    size, witness = brute_force_min_band_cover(bs)
    assert size == k == witness.size == _min_cover_by_sets(bs)
    assert uncovered_squares(bs, witness.bands) == []


def test_oracle_limit():
    long_bar = extract_surface({(0, 0, z) for z in range(25)})
    bs = enumerate_bands(long_bar)
    assert len(bs) > 24
    with pytest.raises(OracleLimitError):
        brute_force_min_band_cover(bs)


def test_band_graph_and_tree(cube):
    bs = enumerate_bands(cube)
    g = overlap_graph(bs)
    bg = band_graph(BandCover(frozenset({0, 1})), g)
    assert bg.edges == {(0, 1)} and bg.is_connected()
    bg3 = band_graph(BandCover(frozenset({0, 1, 2})), g)
    assert len(bg3.edges) == 3
    tree = spanning_tree(bg3)
    assert tree.root == 0 and len(tree.edges) == 2


def test_single_band_tree():
    from stripfold.bands import BandGraph

    tree = spanning_tree(BandGraph((4,), frozenset()))
    assert tree.root == 4 and tree.edges == []


def test_cover_graphs_connected_on_corpus():
    from stripfold.pipeline import overlap_tripartite
    from stripfold.vcover import approx_vertex_cover

    for _, s in polycube_corpus(8, 30, 12, max_bands=24):
        bs = enumerate_bands(s)
        g = overlap_graph(bs)
        for ids in (approx_vertex_cover(overlap_tripartite(bs)), brute_force_min_band_cover(bs)[1].bands):
            bg = band_graph(BandCover(frozenset(ids)), g)
            assert bg.is_connected()
            assert len(spanning_tree(bg).edges) == len(ids) - 1
