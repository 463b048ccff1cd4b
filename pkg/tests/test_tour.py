from __future__ import annotations

import pytest

from stripfold.bands import enumerate_bands
from stripfold.corpus import open_surface_corpus, polycube_corpus
from stripfold.errors import InputError
from stripfold.pipeline import band_tour
from stripfold.surface import MoveKind, extract_surface
from stripfold.tour import (
    JunctionKind,
    MillingTour,
    doubled_tree_tour,
    enforce_alternation,
    tour_from_squares,
    tour_lower_bounds,
    tree_tour,
    verify_properties,
)

from conftest import BAR, BLOCK, CUBE, cube_tour, flat_patch


def test_cube_two_band_tour():
    s, _, t = cube_tour((0, 1))
    assert (t.L, t.t) == (8, 2)
    rep = verify_properties(t, s)
    assert rep.well_formed and rep.covers_all
    assert rep.max_visits == 2 and rep.u_turns == 0
    assert rep.counts() == {"single": 4, "straight-junction": 1, "turn-junction": 1}
    assert rep.gaps_even and rep.alternating
    assert sorted(m.value for m in t.turn_sequence()) == ["L", "R"]


def test_cube_three_band_tour():
    s, _, t = cube_tour((0, 1, 2))
    assert (t.L, t.t) == (12, 4)
    turns = t.turn_sequence()
    assert all(turns[i] is not turns[i - 1] for i in range(4))


def test_start_must_be_on_root(cube):
    s, bs, _ = cube_tour()
    from stripfold.bands import BandCover, band_graph, overlap_graph, spanning_tree

    tree = spanning_tree(band_graph(BandCover(frozenset({0, 1})), overlap_graph(bs)))
    off_root = next(sq for sq in s.squares if sq not in bs[tree.root].squares)
    with pytest.raises(InputError):
        tree_tour(bs, tree, start=off_root)


def test_start_and_direction_variants():
    s, bs, _ = cube_tour()
    from stripfold.bands import BandCover, band_graph, overlap_graph, spanning_tree

    tree = spanning_tree(band_graph(BandCover(frozenset({0, 1})), overlap_graph(bs)))
    for start in bs[tree.root].cycle:
        for rev in (False, True):
            for first in (MoveKind.LEFT, MoveKind.RIGHT):
                t = tree_tour(bs, tree, start=start, reverse=rev, first_turn=first)
                rep = verify_properties(t, s)
                assert t.L == 8 and t.t == 2 and rep.property1 and rep.property2 and rep.property3


def test_enforce_alternation_flips_with_depth():
    from stripfold.bands import BandTree

    tree = BandTree(0, {0: None, 1: 0, 2: 1, 3: 0}, {0: (1, 3), 1: (2,), 2: (), 3: ()})
    out = enforce_alternation(tree, MoveKind.LEFT)
    assert out == {1: MoveKind.LEFT, 3: MoveKind.LEFT, 2: MoveKind.RIGHT}


def test_band_tours_on_corpus():
    for _, s in polycube_corpus(21, 100, 12):
        res = band_tour(s)
        t = res.tour
        rep = verify_properties(t, s)
        assert rep.well_formed and rep.covers_all
        assert t.t == 2 * (len(res.cover.bands) - 1)
        assert t.L == sum(len(res.bandset[b]) for b in res.cover.bands) <= 2 * s.N
        assert rep.property1 and rep.property2 and rep.property3
        assert all(k is not JunctionKind.OTHER for k in rep.junctions.values())


def test_doubled_tree_small_cases():
    one = flat_patch(1, 1)
    t = doubled_tree_tour(one)
    assert t.L == 1 and t.steps[0].move is MoveKind.STRAIGHT
    two = doubled_tree_tour(flat_patch(2, 1))
    assert two.L == 2 and two.u_turns == 2
    cube = doubled_tree_tour(extract_surface(CUBE))
    assert cube.L <= 10


def test_doubled_tree_bounds():
    surfaces = list(open_surface_corpus(4, 40)) + [s for _, s in polycube_corpus(4, 20, 10)]
    for s in surfaces:
        t = doubled_tree_tour(s)
        rep = verify_properties(t, s)
        assert rep.well_formed and rep.covers_all
        assert t.L <= max(1, 2 * s.N - 2)
        assert rep.max_visits <= 4
        # straight-first DFS: a square visited four times turns at most twice
        for sq, idx in t.visits().items():
            if len(idx) == 4:
                assert sum(t.steps[i].move.is_turn for i in idx) <= 2


def test_verify_flags_u_turn():
    s = flat_patch(2, 1)
    t = tour_from_squares(s, list(s.squares))
    assert verify_properties(t, s).u_turns == 2
    assert not verify_properties(t, s).property1


def test_verify_detects_broken_chain(cube):
    _, _, t = cube_tour()
    broken = MillingTour(t.steps[:3] + t.steps[4:])
    assert not verify_properties(broken, cube).well_formed


def test_json_round_trip():
    _, _, t = cube_tour()
    assert MillingTour.from_json(t.to_json()) == t


@pytest.mark.parametrize("vox,lb", [(CUBE, (6, 2)), (BAR, (10, 2)), (BLOCK, (24, 4))])
def test_lower_bounds(vox, lb):
    s = extract_surface(vox)
    b = tour_lower_bounds(s, enumerate_bands(s))
    assert (b.length, b.turns) == lb and b.turns_exact


def test_lower_bound_lp_fallback():
    s = extract_surface({(0, 0, z) for z in range(25)})
    b = tour_lower_bounds(s, enumerate_bands(s))
    assert not b.turns_exact and b.turns == 2
