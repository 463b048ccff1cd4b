from __future__ import annotations

import json
from itertools import permutations, product

import pytest
from hypothesis import given, settings, strategies as st

from stripfold.errors import ConnectivityError, InputError, NonManifoldError, UnsupportedError
from stripfold.surface import (
    Edge,
    GridSurface,
    MoveKind,
    Square,
    SurfaceEdgeKind,
    classify_step,
    dual_graph,
    edge_dihedral,
    euler_characteristic,
    extract_surface,
    feature_size_at_least_2,
    genus,
    load_voxels,
    scale_voxels,
)

from conftest import BAR, BLOCK, CUBE, L_TROMINO, RING, flat_patch


def face_pairs(vox) -> int:
    return sum(1 for v in vox for a in range(3) if tuple(c + (i == a) for i, c in enumerate(v)) in vox)


# -- load_voxels ----------------------------------------------------------------


def test_load_single_and_pair():
    assert load_voxels("0 0 0") == {(0, 0, 0)}
    assert len(load_voxels("0 0 0\n0 0 1")) == 2


def test_load_dedup_and_comments():
    assert load_voxels("0 0 0\n0 0 0  # again\n\n# only comment") == {(0, 0, 0)}


@pytest.mark.parametrize("text,line", [("0 0 0\n1 2\n", 2), ("a b c", 1), ("0 0 0\n0 0 0\n5 5 x", 3)])
def test_load_reports_line(text, line):
    with pytest.raises(InputError) as ei:
        load_voxels(text)
    assert ei.value.line == line


def test_load_empty():
    with pytest.raises(InputError):
        load_voxels("# nothing\n")


def test_world_box():
    with pytest.raises(InputError):
        load_voxels(f"{2**21} 0 0")


# -- extract_surface --------------------------------------------------------------


@pytest.mark.parametrize("vox,n", [(CUBE, 6), (BAR, 10), (BLOCK, 24)])
def test_square_counts(vox, n):
    s = extract_surface(vox)
    assert s.N == n == 6 * len(vox) - 2 * face_pairs(vox)


def test_normals_point_to_empty_side():
    s = extract_surface(BAR)
    for sq in s.squares:
        inside = tuple(a - (1 if (i == sq.axis and sq.sign > 0) else 0) for i, a in enumerate(sq.anchor))
        outside = tuple(a - (1 if (i == sq.axis and sq.sign < 0) else 0) for i, a in enumerate(sq.anchor))
        assert inside in BAR and outside not in BAR


def test_disconnected_voxels_rejected():
    with pytest.raises(ConnectivityError):
        extract_surface({(0, 0, 0), (2, 0, 0)})


def test_edge_touching_voxels_rejected():
    # face-connected through (1,0,0) is absent: only an edge is shared
    with pytest.raises(InputError):
        extract_surface({(0, 0, 0), (1, 1, 0)})
    # face-connected but two cubes touch along an edge only
    with pytest.raises(NonManifoldError):
        extract_surface({(0, 0, 0), (1, 0, 0), (1, 1, 0), (1, 1, 1), (0, 1, 1)} - {(1, 1, 0)} | {(0, 0, 1)})


def test_scale_by_two_quadruples_squares():
    for vox in (CUBE, BAR, L_TROMINO, BLOCK):
        assert extract_surface(scale_voxels(vox)).N == 4 * extract_surface(vox).N


def test_json_round_trip():
    s = extract_surface(L_TROMINO)
    t = GridSurface.from_json(json.dumps(s.to_json()))
    assert t.squares == s.squares and t.closed


# -- dual graph, genus ---------------------------------------------------------------


@pytest.mark.parametrize("vox,v,e", [(CUBE, 6, 12), (BAR, 10, 20)])
def test_dual_graph_closed(vox, v, e):
    g = dual_graph(extract_surface(vox))
    assert len(g.vertices) == v and len(g.edges) == e
    assert all(g.degree(s) == 4 for s in g.vertices)


def test_dual_graph_single_free_square():
    g = dual_graph(flat_patch(1, 1))
    assert len(g.vertices) == 1 and g.edges == ()


def test_every_edge_has_two_squares_when_closed(block):
    assert all(len(v) == 2 for v in block.edges.values())


@pytest.mark.parametrize("vox,g", [(CUBE, 0), (BAR, 0), (BLOCK, 0), (L_TROMINO, 0), (RING, 1)])
def test_genus(vox, g):
    assert genus(extract_surface(vox)) == g


def test_euler_counts_by_hand():
    # bar: 12 lattice vertices, 20 unit edges, 10 squares
    assert euler_characteristic(extract_surface(BAR)) == 12 - 20 + 10
    # ring: 32 vertices, 64 edges, 32 squares -> chi 0
    assert euler_characteristic(extract_surface(RING)) == 0


def test_genus_open_unsupported():
    with pytest.raises(UnsupportedError):
        genus(flat_patch(2, 2))


# -- classify_step -------------------------------------------------------------------


TOP = Square((0, 0, 1), 2, 1)  # normal +Z
SOUTH, NORTH = Edge((0, 0, 1), 0), Edge((0, 1, 1), 0)
WEST, EAST = Edge((0, 0, 1), 1), Edge((1, 0, 1), 1)


def test_classify_examples():
    assert classify_step(TOP, SOUTH, NORTH) is MoveKind.STRAIGHT
    assert classify_step(TOP, SOUTH, SOUTH) is MoveKind.UTURN
    assert classify_step(TOP, SOUTH, EAST) is MoveKind.RIGHT
    assert classify_step(TOP, SOUTH, WEST) is MoveKind.LEFT


def test_classify_flipped_normal_swaps_hands():
    bottom = Square((0, 0, 1), 2, -1)
    assert classify_step(bottom, SOUTH, EAST) is MoveKind.LEFT


def _rot(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(3)) for i in range(3))


def _rotations():
    out = []
    for perm in permutations(range(3)):
        for signs in product((1, -1), repeat=3):
            m = [[signs[i] if j == perm[i] else 0 for j in range(3)] for i in range(3)]
            det = (
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            )
            if det == 1:
                out.append(m)
    return out


ROTATIONS = _rotations()


def _rot_square(m, s: Square) -> Square:
    vs = [_rot(m, v) for v in s.vertices()]
    n = _rot(m, s.normal)
    axis = next(i for i in range(3) if n[i])
    return Square(min(vs), axis, n[axis])


def _rot_edge(m, e: Edge) -> Edge:
    a = _rot(m, e.start)
    b = _rot(m, tuple(c + (i == e.axis) for i, c in enumerate(e.start)))
    axis = next(i for i in range(3) if a[i] != b[i])
    return Edge(min(a, b), axis)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(ROTATIONS), st.sampled_from(list(extract_surface(L_TROMINO).squares)), st.data())
def test_classify_rotation_invariant(m, sq, data):
    edges = sq.edges()
    a = data.draw(st.sampled_from(edges))
    b = data.draw(st.sampled_from(edges))
    rs = _rot_square(m, sq)
    assert set(rs.edges()) == {_rot_edge(m, e) for e in edges}
    assert classify_step(rs, _rot_edge(m, a), _rot_edge(m, b)) is classify_step(sq, a, b)


def test_classify_foreign_edge():
    with pytest.raises(InputError):
        classify_step(TOP, SOUTH, Edge((5, 5, 5), 0))


# -- dihedral and feature size -----------------------------------------------------


def test_cube_edges_convex(cube):
    assert {edge_dihedral(cube, e) for e in cube.edges} == {SurfaceEdgeKind.CONVEX}


def test_slab_middle_edge_flat():
    s = extract_surface({(0, 0, 0), (1, 0, 0)})
    assert edge_dihedral(s, Edge((1, 0, 1), 1)) is SurfaceEdgeKind.FLAT


def test_tromino_inner_edge_reflex():
    s = extract_surface(L_TROMINO)
    assert edge_dihedral(s, Edge((1, 1, 0), 2)) is SurfaceEdgeKind.REFLEX


def test_boundary_edge_unsupported():
    with pytest.raises(UnsupportedError):
        edge_dihedral(flat_patch(1, 1), Edge((0, 0, 0), 0))


def test_feature_size_examples():
    assert feature_size_at_least_2(CUBE)
    assert not feature_size_at_least_2({(0, 0, 0), (2, 0, 0)})
    # the inner corner voxel of an L still sees an empty box on its far side
    assert feature_size_at_least_2(L_TROMINO)
    assert not feature_size_at_least_2(L_TROMINO | {(2, 1, 0)})
    for vox in (CUBE, BAR, L_TROMINO, BLOCK, RING):
        assert feature_size_at_least_2(scale_voxels(vox))
