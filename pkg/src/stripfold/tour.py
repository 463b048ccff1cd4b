"""Milling tours: band-tree tours on grid polyhedra and doubled spanning trees on any grid surface."""

from __future__ import annotations

import enum
from collections import Counter, defaultdict
from dataclasses import dataclass
from math import ceil

from .bands import BandSet, BandTree, brute_force_min_band_cover, ORACLE_MAX_BANDS, overlap_graph
from .errors import InputError, InvariantError
from .surface import Edge, GridSurface, MoveKind, Square, classify_step
from .vcover import TripartiteGraph, lp_half_integral, lp_value


@dataclass(frozen=True)
class Step:
    square: Square
    entry: Edge | None
    exit: Edge | None
    move: MoveKind

    def to_json(self) -> dict:
        def edge(e):
            return None if e is None else {"start": list(e.start), "axis": e.axis}

        return {
            "square": {"anchor": list(self.square.anchor), "axis": self.square.axis, "sign": self.square.sign},
            "entry": edge(self.entry),
            "exit": edge(self.exit),
            "move": self.move.value,
        }


@dataclass(frozen=True)
class MillingTour:
    steps: tuple[Step, ...]

    @property
    def L(self) -> int:
        return len(self.steps)

    @property
    def t(self) -> int:
        return sum(1 for s in self.steps if s.move.is_turn)

    @property
    def u_turns(self) -> int:
        return sum(1 for s in self.steps if s.move is MoveKind.UTURN)

    @property
    def squares(self) -> list[Square]:
        return [s.square for s in self.steps]

    def visits(self) -> dict[Square, list[int]]:
        out: dict[Square, list[int]] = defaultdict(list)
        for i, s in enumerate(self.steps):
            out[s.square].append(i)
        return out

    def turn_sequence(self) -> list[MoveKind]:
        return [s.move for s in self.steps if s.move.is_turn]

    def to_json(self) -> dict:
        return {"L": self.L, "t": self.t, "steps": [s.to_json() for s in self.steps]}

    @classmethod
    def from_json(cls, doc: dict) -> MillingTour:
        def edge(d):
            return None if d is None else Edge(tuple(d["start"]), d["axis"])

        steps = []
        for d in doc["steps"]:
            sq = d["square"]
            steps.append(
                Step(Square(tuple(sq["anchor"]), sq["axis"], sq["sign"]), edge(d["entry"]), edge(d["exit"]), MoveKind(d["move"]))
            )
        return cls(tuple(steps))


def tour_from_squares(surface: GridSurface, seq: list[Square]) -> MillingTour:
    """Cyclic square sequence -> tour with entry/exit edges and move kinds."""
    if len(seq) == 1:
        return MillingTour((Step(seq[0], None, None, MoveKind.STRAIGHT),))
    n = len(seq)
    steps = []
    for i, sq in enumerate(seq):
        entry = surface.shared_edge(seq[i - 1], sq)
        exit = surface.shared_edge(sq, seq[(i + 1) % n])
        steps.append(Step(sq, entry, exit, classify_step(sq, entry, exit)))
    return MillingTour(tuple(steps))


# -- band-tree tour -------------------------------------------------------------


def enforce_alternation(tree: BandTree, first: MoveKind = MoveKind.RIGHT) -> dict[int, MoveKind]:
    """Entry-turn direction per non-root band so the tour's turns alternate.

    Returns are forced opposite to entries, so entries must flip with tree
    depth: siblings share a direction and each child uses the opposite of its
    parent's entry.
    """
    out = {}
    for v in tree.nodes:
        if tree.parent[v] is None:
            continue
        out[v] = first if tree.depth(v) % 2 == 1 else first.flipped()
    return out


def tree_tour(
    bandset: BandSet,
    tree: BandTree,
    start: Square | None = None,
    reverse: bool = False,
    first_turn: MoveKind = MoveKind.RIGHT,
) -> MillingTour:
    """Walk every band of the tree, detouring into each child at its first overlap square.

    ``start`` defaults to the smallest square of the root band; the walk heads
    toward the smaller cycle neighbour unless ``reverse`` is set.
    """
    surface = bandset.surface
    root = bandset[tree.root]
    if start is None:
        start = root.cycle[0]
    if start not in root.squares:
        raise InputError(f"start square {start} is not on root band {root.name}")
    m = len(root)
    i0 = root.index(start)
    step = -1 if reverse else 1
    turn_dir = enforce_alternation(tree, first_turn)
    visited = {tree.root}
    seq: list[Square] = []

    def detours(band_id: int, sq: Square, prev: Square) -> None:
        child = bandset.other_band(sq, band_id)
        if child in visited or tree.parent.get(child) != band_id:
            return
        visited.add(child)
        cb = bandset[child]
        j = cb.index(sq)
        k = len(cb)
        want = turn_dir[child]
        for d in (1, -1):
            nxt = cb.cycle[(j + d) % k]
            mv = classify_step(sq, surface.shared_edge(prev, sq), surface.shared_edge(sq, nxt))
            if mv is want:
                break
        else:
            raise InvariantError(f"no {want.name} turn from band {band_id} onto {cb.name}")
        walk(child, j, d, k)

    def walk(band_id: int, j: int, d: int, k: int) -> None:
        band = bandset[band_id]
        for r in range(1, k):
            sq = band.cycle[(j + d * r) % k]
            seq.append(sq)
            detours(band_id, sq, band.cycle[(j + d * (r - 1)) % k])
        seq.append(band.cycle[j])

    for r in range(m):
        sq = root.cycle[(i0 + step * r) % m]
        seq.append(sq)
        detours(tree.root, sq, root.cycle[(i0 + step * (r - 1)) % m])
    if visited != set(tree.nodes):
        raise InvariantError("band tree walk missed bands")
    tour = tour_from_squares(surface, seq)
    if tour.t != 2 * (len(tree.nodes) - 1):
        raise InvariantError(f"tour has {tour.t} turns, expected {2 * (len(tree.nodes) - 1)}")
    return tour


# -- doubled spanning tree --------------------------------------------------------


def doubled_tree_tour(surface: GridSurface) -> MillingTour:
    """Euler tour of a DFS tree of the dual graph.

    At every square the DFS tries the neighbour straight ahead first, so a
    square with four tree edges is crossed straight twice and turned at most
    twice.
    """
    sqs = surface.squares
    root = sqs[0]
    if len(sqs) == 1:
        return tour_from_squares(surface, [root])
    seen = {root}
    seq = [root]

    def order(sq: Square, entry: Edge | None) -> list[Square]:
        edges = list(sq.edges())
        if entry is None:
            first = next(e for e in edges if surface.other(sq, e) is not None)
        else:
            first = sq.opposite(entry)
        opp = sq.opposite(first)
        rest = [e for e in edges if e not in (first, opp)]
        out = []
        for e in [first, opp, *rest]:
            t = surface.other(sq, e)
            if t is not None and e != entry:
                out.append(t)
        return out

    stack = [(root, None, iter(order(root, None)))]
    while stack:
        sq, entry, it = stack[-1]
        for t in it:
            if t not in seen:
                seen.add(t)
                seq.append(t)
                e = surface.shared_edge(sq, t)
                stack.append((t, e, iter(order(t, e))))
                break
        else:
            stack.pop()
            if stack:
                seq.append(stack[-1][0])
    seq.pop()
    return tour_from_squares(surface, seq)


# -- verification ---------------------------------------------------------------


class JunctionKind(enum.Enum):
    SINGLE = "single"
    STRAIGHT_JUNCTION = "straight-junction"
    TURN_JUNCTION = "turn-junction"
    OTHER = "other"


@dataclass(frozen=True)
class PropertyReport:
    L: int
    t: int
    well_formed: bool
    covers_all: bool | None
    max_visits: int
    u_turns: int
    junctions: dict[Square, JunctionKind]
    turn_gaps: dict[Square, int]
    alternating: bool

    @property
    def gaps_even(self) -> bool:
        return all(g % 2 == 0 for g in self.turn_gaps.values())

    @property
    def property1(self) -> bool:
        return self.u_turns == 0 and self.max_visits <= 2 and JunctionKind.OTHER not in self.junctions.values()

    @property
    def property2(self) -> bool:
        return self.gaps_even

    @property
    def property3(self) -> bool:
        return self.alternating

    def counts(self) -> dict[str, int]:
        c = Counter(k.value for k in self.junctions.values())
        return dict(sorted(c.items()))

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "t": self.t,
            "well_formed": self.well_formed,
            "covers_all": self.covers_all,
            "max_visits": self.max_visits,
            "u_turns": self.u_turns,
            "junctions": self.counts(),
            "turn_gaps_even": self.gaps_even,
            "alternating": self.alternating,
            "property1": self.property1,
            "property2": self.property2,
            "property3": self.property3,
        }


def verify_properties(tour: MillingTour, surface: GridSurface | None = None) -> PropertyReport:
    steps = tour.steps
    n = len(steps)
    well_formed = True
    for i, s in enumerate(steps):
        if n == 1:
            break
        nxt = steps[(i + 1) % n]
        if s.exit is None or s.exit != nxt.entry:
            well_formed = False
        elif surface is not None and surface.other(s.square, s.exit) != nxt.square:
            well_formed = False
        elif classify_step(s.square, s.entry, s.exit) is not s.move:
            well_formed = False
    covers = None if surface is None else set(surface.squares) <= set(tour.squares)

    visits = tour.visits()
    junctions: dict[Square, JunctionKind] = {}
    gaps: dict[Square, int] = {}
    for sq, idx in visits.items():
        moves = [steps[i].move for i in idx]
        if len(idx) == 1 and moves[0] is MoveKind.STRAIGHT:
            junctions[sq] = JunctionKind.SINGLE
        elif len(idx) == 2 and all(m is MoveKind.STRAIGHT for m in moves):
            junctions[sq] = JunctionKind.STRAIGHT_JUNCTION
        elif len(idx) == 2 and all(m.is_turn for m in moves) and moves[0] is moves[1].flipped():
            junctions[sq] = JunctionKind.TURN_JUNCTION
            gaps[sq] = (idx[1] - idx[0]) % n
        else:
            junctions[sq] = JunctionKind.OTHER

    turns = tour.turn_sequence()
    alternating = len(turns) % 2 == 0 and all(turns[i] is not turns[i - 1] for i in range(len(turns))) if turns else True
    return PropertyReport(
        L=n,
        t=tour.t,
        well_formed=well_formed,
        covers_all=covers,
        max_visits=max(len(v) for v in visits.values()),
        u_turns=tour.u_turns,
        junctions=junctions,
        turn_gaps=gaps,
        alternating=alternating,
    )


# -- bounds ---------------------------------------------------------------------


@dataclass(frozen=True)
class LowerBounds:
    length: int
    turns: int
    turns_exact: bool


def tour_lower_bounds(surface: GridSurface, bandset: BandSet | None = None) -> LowerBounds:
    """Surface area bounds length; minimum band cover bounds turns.

    Above the oracle limit the turn bound falls back to the rounded-up LP
    value of the overlap graph's vertex cover, which is still a valid bound.
    """
    if bandset is None:
        return LowerBounds(surface.N, 0, False)
    if len(bandset) <= ORACLE_MAX_BANDS:
        size, _ = brute_force_min_band_cover(bandset)
        return LowerBounds(surface.N, size, True)
    g = overlap_graph(bandset)
    tg = TripartiteGraph.build({v: g.part(v) for v in g.vertices}, g.edges)
    return LowerBounds(surface.N, ceil(lp_value(lp_half_integral(tg))), False)


def tour_well_formed_or_raise(tour: MillingTour, surface: GridSurface) -> None:
    rep = verify_properties(tour, surface)
    if not rep.well_formed:
        raise InvariantError("tour steps do not chain through shared edges")
    if not rep.covers_all:
        raise InvariantError("tour misses squares")

