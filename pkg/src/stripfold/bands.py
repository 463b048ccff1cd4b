"""Axis bands of a grid polyhedron and the tripartite overlap graph between them."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from itertools import combinations

from .errors import CoverError, InvariantError, OracleLimitError, UnsupportedError
from .surface import AXIS_NAMES, GridSurface, Square

ORACLE_MAX_BANDS = 24


@dataclass(frozen=True)
class Band:
    id: int
    axis: int
    slab_index: int
    cycle: tuple[Square, ...]

    @property
    def squares(self) -> frozenset[Square]:
        return frozenset(self.cycle)

    @property
    def name(self) -> str:
        return f"{AXIS_NAMES[self.axis]}{self.slab_index}#{self.id}"

    def __len__(self) -> int:
        return len(self.cycle)

    def index(self, square: Square) -> int:
        return self.cycle.index(square)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "axis": AXIS_NAMES[self.axis],
            "slab": self.slab_index,
            "cycle": [[list(s.anchor), s.axis, s.sign] for s in self.cycle],
        }


@dataclass(frozen=True)
class BandSet:
    """All bands of one surface plus the square -> (band, band) incidence."""

    surface: GridSurface
    bands: tuple[Band, ...]
    of_square: dict[Square, tuple[int, int]]

    def __len__(self) -> int:
        return len(self.bands)

    def __getitem__(self, i: int) -> Band:
        return self.bands[i]

    def other_band(self, square: Square, band_id: int) -> int:
        a, b = self.of_square[square]
        return b if a == band_id else a


def enumerate_bands(surface: GridSurface) -> BandSet:
    if not surface.closed:
        raise UnsupportedError("bands are only defined on closed surfaces")
    lo = surface.min_corner()
    raw = []
    for axis in range(3):
        slabs: dict[int, set[Square]] = defaultdict(set)
        for s in surface.squares:
            if s.axis != axis:
                slabs[s.anchor[axis]].add(s)
        for coord in sorted(slabs):
            remaining = set(slabs[coord])
            while remaining:
                cycle = _walk_cycle(surface, axis, min(remaining))
                remaining.difference_update(cycle)
                raw.append((axis, coord - lo[axis], cycle))
    raw.sort(key=lambda r: (r[0], r[1], r[2][0]))
    bands = tuple(Band(i, a, k, c) for i, (a, k, c) in enumerate(raw))

    members: dict[Square, list[int]] = defaultdict(list)
    for b in bands:
        for s in b.cycle:
            members[s].append(b.id)
    for s in surface.squares:
        if len(members[s]) != 2:
            raise InvariantError(f"square {s} lies in {len(members[s])} bands")
    for b in bands:
        if len(b) % 2:
            raise InvariantError(f"band {b.name} has odd length {len(b)}")
    return BandSet(surface, bands, {s: (v[0], v[1]) for s, v in members.items()})


def _walk_cycle(surface: GridSurface, axis: int, start: Square) -> tuple[Square, ...]:
    """Cycle through ``start`` in the slab, oriented toward the smaller neighbour."""

    def slab_neighbors(s: Square) -> list[Square]:
        out = []
        for e in s.edges():
            if e.axis == axis:
                t = surface.other(s, e)
                if t is None:
                    raise UnsupportedError(f"boundary edge {e} inside a slab")
                out.append(t)
        return out

    first, _ = sorted(slab_neighbors(start))
    cycle = [start, first]
    prev, cur = start, first
    while True:
        a, b = slab_neighbors(cur)
        nxt = b if a == prev else a
        if nxt == start:
            break
        if nxt in cycle:
            raise InvariantError(f"band walk revisited {nxt}")
        cycle.append(nxt)
        prev, cur = cur, nxt
    return tuple(cycle)


@dataclass(frozen=True)
class OverlapGraph:
    bandset: BandSet
    edges: frozenset[tuple[int, int]]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(b.id for b in self.bandset.bands)

    def part(self, v: int) -> int:
        return self.bandset.bands[v].axis

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj


def overlap_graph(bandset: BandSet) -> OverlapGraph:
    edges = set()
    for a, b in bandset.of_square.values():
        if bandset[a].axis == bandset[b].axis:
            raise InvariantError(f"bands {a} and {b} share an axis but overlap")
        edges.add((min(a, b), max(a, b)))
    return OverlapGraph(bandset, frozenset(edges))


@dataclass(frozen=True)
class BandCover:
    bands: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.bands)


def uncovered_squares(bandset: BandSet, band_ids) -> list[Square]:
    chosen = set(band_ids)
    return [s for s in bandset.surface.squares if not chosen.intersection(bandset.of_square[s])]


def cover_from_vertex_cover(vc, bandset: BandSet) -> BandCover:
    """Band cover induced by a vertex cover of the overlap graph (same size)."""
    ids = frozenset(vc)
    missing = uncovered_squares(bandset, ids)
    if missing:
        raise CoverError(f"band set leaves square {missing[0]} uncovered", square=missing[0])
    return BandCover(ids)


def brute_force_min_band_cover(bandset: BandSet) -> tuple[int, BandCover]:
    """Exact minimum band cover by exhaustive search in order of increasing size."""
    n = len(bandset)
    if n > ORACLE_MAX_BANDS:
        raise OracleLimitError(f"{n} bands exceeds oracle limit of {ORACLE_MAX_BANDS}")
    index = {s: i for i, s in enumerate(bandset.surface.squares)}
    full = (1 << len(index)) - 1
    masks = []
    for b in bandset.bands:
        m = 0
        for s in b.cycle:
            m |= 1 << index[s]
        masks.append(m)
    for k in range(1, n + 1):
        for combo in combinations(range(n), k):
            acc = 0
            for i in combo:
                acc |= masks[i]
            if acc == full:
                return k, BandCover(frozenset(combo))
    raise InvariantError("the full band set does not cover the surface")


@dataclass(frozen=True)
class BandGraph:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {v: [] for v in self.nodes}
        for a, b in sorted(self.edges):
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def is_connected(self) -> bool:
        if not self.nodes:
            return True
        adj = self.adjacency()
        seen = {self.nodes[0]}
        queue = deque([self.nodes[0]])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == len(self.nodes)


def band_graph(cover: BandCover, graph: OverlapGraph) -> BandGraph:
    nodes = tuple(sorted(cover.bands))
    chosen = set(nodes)
    edges = frozenset(e for e in graph.edges if e[0] in chosen and e[1] in chosen)
    bg = BandGraph(nodes, edges)
    if not bg.is_connected():
        raise InvariantError(f"induced band graph on {nodes} is disconnected")
    return bg


@dataclass(frozen=True)
class BandTree:
    root: int
    parent: dict[int, int | None]
    children: dict[int, tuple[int, ...]]

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted(self.parent))

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, c) for c, p in sorted(self.parent.items()) if p is not None]

    def depth(self, v: int) -> int:
        d = 0
        while self.parent[v] is not None:
            v = self.parent[v]
            d += 1
        return d


def spanning_tree(bg: BandGraph) -> BandTree:
    """BFS tree rooted at the lowest band id, neighbours taken in id order."""
    if not bg.nodes:
        raise InvariantError("empty band graph")
    adj = bg.adjacency()
    root = bg.nodes[0]
    parent: dict[int, int | None] = {root: None}
    children: dict[int, list[int]] = {v: [] for v in bg.nodes}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                children[v].append(w)
                queue.append(w)
    if len(parent) != len(bg.nodes):
        raise InvariantError("band graph is disconnected")
    return BandTree(root, parent, {v: tuple(c) for v, c in children.items()})
