"""Grid surfaces on the unit cube lattice.

A surface is a connected set of oriented unit squares.  Closed surfaces come
from voxel sets (the boundary of a polycube); open ones are given as explicit
square lists.  Everything here is immutable once built.
"""

from __future__ import annotations

import enum
import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, NamedTuple

from .errors import (
    ConnectivityError,
    InputError,
    NonManifoldError,
    PreconditionError,
    UnsupportedError,
)

Vec = tuple[int, int, int]

WORLD_BOUND = 1 << 20
AXIS_NAMES = "XYZ"


def unit(axis: int, sign: int = 1) -> Vec:
    v = [0, 0, 0]
    v[axis] = sign
    return (v[0], v[1], v[2])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def neg(a: Vec) -> Vec:
    return (-a[0], -a[1], -a[2])


def dot(a: Vec, b: Vec) -> int:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def cross(a: Vec, b: Vec) -> Vec:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _in_plane_axes(axis: int) -> tuple[int, int]:
    b, c = (i for i in range(3) if i != axis)
    return b, c


class Edge(NamedTuple):
    """Unit lattice segment from ``start`` to ``start + e_axis``."""

    start: Vec
    axis: int


class Square(NamedTuple):
    """Unit square with min corner ``anchor``, normal along ``axis``, facing ``sign``."""

    anchor: Vec
    axis: int
    sign: int

    @property
    def key(self) -> tuple[Vec, int]:
        return (self.anchor, self.axis)

    @property
    def normal(self) -> Vec:
        return unit(self.axis, self.sign)

    def edges(self) -> tuple[Edge, Edge, Edge, Edge]:
        b, c = _in_plane_axes(self.axis)
        a = self.anchor
        return (
            Edge(a, b),
            Edge(add(a, unit(c)), b),
            Edge(a, c),
            Edge(add(a, unit(b)), c),
        )

    def vertices(self) -> tuple[Vec, Vec, Vec, Vec]:
        b, c = _in_plane_axes(self.axis)
        a = self.anchor
        return (a, add(a, unit(b)), add(add(a, unit(b)), unit(c)), add(a, unit(c)))

    def outward(self, edge: Edge) -> Vec:
        """In-plane unit vector from the square's center toward ``edge``."""
        if edge not in self.edges():
            raise InputError(f"edge {edge} is not on square {self}")
        b, c = _in_plane_axes(self.axis)
        # doubled coordinates keep everything integral
        mid = [2 * edge.start[i] + (1 if i == edge.axis else 0) for i in range(3)]
        ctr = [2 * self.anchor[i] + (1 if i in (b, c) else 0) for i in range(3)]
        d = tuple(m - x for m, x in zip(mid, ctr))
        return (d[0], d[1], d[2])

    def edge_toward(self, direction: Vec) -> Edge:
        for e in self.edges():
            if self.outward(e) == direction:
                return e
        raise InputError(f"no edge of {self} in direction {direction}")

    def opposite(self, edge: Edge) -> Edge:
        return self.edge_toward(neg(self.outward(edge)))


class SurfaceEdgeKind(enum.Enum):
    CONVEX = "convex"
    FLAT = "flat"
    REFLEX = "reflex"


class MoveKind(enum.Enum):
    STRAIGHT = "S"
    LEFT = "L"
    RIGHT = "R"
    UTURN = "U"

    @property
    def is_turn(self) -> bool:
        return self in (MoveKind.LEFT, MoveKind.RIGHT)

    def flipped(self) -> MoveKind:
        return {MoveKind.LEFT: MoveKind.RIGHT, MoveKind.RIGHT: MoveKind.LEFT}.get(self, self)


def classify_step(square: Square, entry: Edge, exit: Edge) -> MoveKind:
    """Intrinsic move at ``square`` for a path entering through ``entry`` and leaving through ``exit``.

    Left/right is measured in the frame (heading, outward normal): a turn is
    left when heading_in x heading_out points along the normal.
    """
    o_in = square.outward(entry)
    o_out = square.outward(exit)
    if entry == exit:
        return MoveKind.UTURN
    if o_in == neg(o_out):
        return MoveKind.STRAIGHT
    z = dot(cross(neg(o_in), o_out), square.normal)
    return MoveKind.LEFT if z > 0 else MoveKind.RIGHT


# -- voxels -----------------------------------------------------------------


def load_voxels(text: str) -> frozenset[Vec]:
    """Parse whitespace-separated integer triples, one per line; ``#`` starts a comment."""
    voxels: set[Vec] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InputError(f"expected 3 integers, got {len(parts)} fields", line=lineno)
        try:
            v = tuple(int(p) for p in parts)
        except ValueError:
            raise InputError(f"non-integer coordinate in {line!r}", line=lineno) from None
        if any(abs(x) > WORLD_BOUND for x in v):
            raise InputError(f"coordinate outside world box |c| <= {WORLD_BOUND}", line=lineno)
        voxels.add((v[0], v[1], v[2]))
    if not voxels:
        raise InputError("empty voxel set")
    return frozenset(voxels)


def dump_voxels(voxels: Iterable[Vec]) -> str:
    return "".join(f"{x} {y} {z}\n" for x, y, z in sorted(voxels))


def scale_voxels(voxels: Iterable[Vec], factor: int = 2) -> frozenset[Vec]:
    out = set()
    for x, y, z in voxels:
        for i, j, k in product(range(factor), repeat=3):
            out.add((factor * x + i, factor * y + j, factor * z + k))
    return frozenset(out)


FACE_DIRS: tuple[Vec, ...] = tuple(unit(a, s) for a in range(3) for s in (-1, 1))


def _voxels_connected(voxels: frozenset[Vec]) -> bool:
    start = min(voxels)
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for d in FACE_DIRS:
            w = add(v, d)
            if w in voxels and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(voxels)


def feature_size_at_least_2(voxels: Iterable[Vec]) -> bool:
    """True iff every empty voxel next to the solid lies in some all-empty 2x2x2 box.

    Empty voxels at Chebyshev distance >= 2 always qualify, so only the
    26-neighbourhood of the solid is examined.
    """
    solid = frozenset(voxels)
    near = set()
    for v in solid:
        for d in product((-1, 0, 1), repeat=3):
            w = add(v, d)
            if w not in solid:
                near.add(w)
    for w in near:
        ok = False
        for lo in product((-1, 0), repeat=3):
            base = add(w, lo)
            if all(add(base, off) not in solid for off in product((0, 1), repeat=3)):
                ok = True
                break
        if not ok:
            return False
    return True


# -- surfaces ---------------------------------------------------------------


@dataclass(frozen=True)
class GridSurface:
    squares: tuple[Square, ...]
    closed: bool
    voxels: frozenset[Vec] | None = None
    _edge_map: dict[Edge, tuple[Square, ...]] = field(default=None, repr=False, compare=False)  # type: ignore[assignment]

    def __post_init__(self) -> None:
        edge_map: dict[Edge, list[Square]] = defaultdict(list)
        for sq in self.squares:
            for e in sq.edges():
                edge_map[e].append(sq)
        object.__setattr__(self, "_edge_map", {e: tuple(v) for e, v in edge_map.items()})

    # construction ----------------------------------------------------------

    @classmethod
    def from_squares(cls, squares: Iterable[Square], closed: bool) -> GridSurface:
        sqs = sorted(set(squares))
        if not sqs:
            raise InputError("surface has no squares")
        keys = [s.key for s in sqs]
        if len(set(keys)) != len(keys):
            raise InputError("duplicate square (same anchor and axis)")
        for s in sqs:
            if s.sign not in (-1, 1) or s.axis not in (0, 1, 2):
                raise InputError(f"bad square {s}")
        surf = cls(tuple(sqs), closed)
        surf._validate()
        return surf

    def _validate(self) -> None:
        for e, inc in self._edge_map.items():
            if len(inc) > 2:
                raise NonManifoldError(f"edge {e} is shared by {len(inc)} squares")
            if self.closed and len(inc) != 2:
                raise NonManifoldError(f"closed surface has boundary edge {e}")
            if len(inc) == 2:
                a, b = inc
                if cross(a.normal, a.outward(e)) != neg(cross(b.normal, b.outward(e))):
                    raise InputError(f"squares {a} and {b} have inconsistent orientation")
        if not self._dual_connected():
            raise ConnectivityError("surface dual graph is disconnected")
        if self.closed:
            self._check_vertex_links()

    def _dual_connected(self) -> bool:
        start = self.squares[0]
        seen = {start}
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for t in self.neighbors(s):
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
        return len(seen) == len(self.squares)

    def _check_vertex_links(self) -> None:
        at_vertex: dict[Vec, list[Square]] = defaultdict(list)
        for s in self.squares:
            for v in s.vertices():
                at_vertex[v].append(s)
        for v, sqs in at_vertex.items():
            member = set(sqs)
            seen = {sqs[0]}
            stack = [sqs[0]]
            while stack:
                s = stack.pop()
                for e in s.edges():
                    if v not in (e.start, add(e.start, unit(e.axis))):
                        continue
                    for t in self._edge_map[e]:
                        if t in member and t not in seen:
                            seen.add(t)
                            stack.append(t)
            if len(seen) != len(member):
                raise NonManifoldError(f"surface pinches at vertex {v}")

    # queries -----------------------------------------------------------------

    @property
    def N(self) -> int:
        return len(self.squares)

    @property
    def edges(self) -> dict[Edge, tuple[Square, ...]]:
        return self._edge_map

    def incident(self, edge: Edge) -> tuple[Square, ...]:
        return self._edge_map.get(edge, ())

    def other(self, square: Square, edge: Edge) -> Square | None:
        for t in self._edge_map.get(edge, ()):
            if t != square:
                return t
        return None

    def neighbors(self, square: Square) -> list[Square]:
        out = []
        for e in square.edges():
            t = self.other(square, e)
            if t is not None:
                out.append(t)
        return out

    def shared_edge(self, a: Square, b: Square) -> Edge:
        common = set(a.edges()) & set(b.edges())
        for e in sorted(common):
            if b in self._edge_map.get(e, ()) and a in self._edge_map[e]:
                return e
        raise InputError(f"squares {a} and {b} are not dual-adjacent")

    def min_corner(self) -> Vec:
        pts = [v for s in self.squares for v in s.vertices()]
        return (min(p[0] for p in pts), min(p[1] for p in pts), min(p[2] for p in pts))

    def to_json(self) -> dict:
        return {
            "squares": [{"anchor": list(s.anchor), "axis": s.axis, "sign": s.sign} for s in self.squares],
            "closed": self.closed,
        }

    @classmethod
    def from_json(cls, doc: dict | str) -> GridSurface:
        if isinstance(doc, str):
            try:
                doc = json.loads(doc)
            except json.JSONDecodeError as exc:
                raise InputError(f"invalid surface JSON: {exc.msg}", line=exc.lineno) from None
        try:
            squares = [Square(tuple(d["anchor"]), int(d["axis"]), int(d["sign"])) for d in doc["squares"]]
            closed = bool(doc.get("closed", False))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed surface document: {exc}") from None
        return cls.from_squares(squares, closed)


def extract_surface(voxels: Iterable[Vec]) -> GridSurface:
    """Boundary of a face-connected polycube, with outward normals."""
    vox = frozenset(voxels)
    if not vox:
        raise InputError("empty voxel set")
    if not _voxels_connected(vox):
        raise ConnectivityError("voxel set is not face-connected")
    squares = []
    for v in vox:
        for axis in range(3):
            for sign in (-1, 1):
                if add(v, unit(axis, sign)) in vox:
                    continue
                anchor = add(v, unit(axis)) if sign > 0 else v
                squares.append(Square(anchor, axis, sign))
    surf = GridSurface.from_squares(squares, closed=True)
    return GridSurface(surf.squares, True, vox)


@dataclass(frozen=True)
class DualGraph:
    vertices: tuple[Square, ...]
    edges: tuple[tuple[Square, Square], ...]

    def degree(self, s: Square) -> int:
        return sum(1 for a, b in self.edges if s in (a, b))


def dual_graph(surface: GridSurface) -> DualGraph:
    edges = []
    for e in sorted(surface.edges):
        inc = surface.edges[e]
        if len(inc) == 2:
            a, b = sorted(inc)
            edges.append((a, b))
    return DualGraph(surface.squares, tuple(edges))


def euler_characteristic(surface: GridSurface) -> int:
    verts = {v for s in surface.squares for v in s.vertices()}
    return len(verts) - len(surface.edges) + surface.N


def genus(surface: GridSurface) -> int:
    if not surface.closed:
        raise UnsupportedError("genus is only defined here for closed surfaces")
    chi = euler_characteristic(surface)
    return (2 - chi) // 2


def edge_dihedral(surface: GridSurface, edge: Edge) -> SurfaceEdgeKind:
    """Dihedral type of an interior edge, measured through the exterior."""
    inc = surface.incident(edge)
    if len(inc) != 2:
        raise UnsupportedError(f"edge {edge} is a boundary edge")
    a, b = inc
    if a.axis == b.axis:
        return SurfaceEdgeKind.FLAT
    # b lies on a's solid side iff the wedge is convex
    return SurfaceEdgeKind.CONVEX if dot(b.outward(edge), a.normal) > 0 else SurfaceEdgeKind.REFLEX


def require_closed_genus0(surface: GridSurface) -> None:
    if not surface.closed:
        raise PreconditionError("closed surface required")
    g = genus(surface)
    if g != 0:
        raise PreconditionError(f"genus-0 surface required (genus is {g})")
