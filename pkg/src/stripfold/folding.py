"""Compile milling tours into canonical- and zig-zag-strip foldings, and check them.

Every visit of the tour is handled in a local frame: the visited square is
[0,1]^2, the strip enters through the bottom edge heading +y, and the outward
normal points at the viewer.  A placement is an integer affine isometry from
strip coordinates into that frame.  Gadgets are not tabulated: for each visit
the compiler searches the few cell/fold combinations that keep every piece
inside the square and leave through the required edge, so the footprints
come out of the reflections themselves.

Layers are counted at one generic point per quarter of each square (the four
triangles cut by both diagonals).  Every hinge image is a square edge or a
diagonal, so these points never lie on a crease.
"""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import InputError, PreconditionError
from .surface import Edge, GridSurface, MoveKind, Square, SurfaceEdgeKind, cross, edge_dihedral, neg
from .tour import MillingTour, verify_properties

Affine = tuple[int, int, int, int, int, int]  # x' = a x + b y + e, y' = c x + d y + f
Point = tuple
IDENTITY: Affine = (1, 0, 0, 1, 0, 0)


def apply(T: Affine, p: Point) -> Point:
    a, b, c, d, e, f = T
    return (a * p[0] + b * p[1] + e, c * p[0] + d * p[1] + f)


def compose(T: Affine, S: Affine) -> Affine:
    """T after S."""
    a, b, c, d, e, f = T
    a2, b2, c2, d2, e2, f2 = S
    return (
        a * a2 + b * c2,
        a * b2 + b * d2,
        c * a2 + d * c2,
        c * b2 + d * d2,
        a * e2 + b * f2 + e,
        c * e2 + d * f2 + f,
    )


def inverse(T: Affine) -> Affine:
    a, b, c, d, e, f = T
    # orthogonal linear part: inverse is the transpose
    return (a, c, b, d, -(a * e + c * f), -(b * e + d * f))


def det(T: Affine) -> int:
    return T[0] * T[3] - T[1] * T[2]


def reflection(p: Point, q: Point) -> Affine:
    """Reflection across the line through lattice points p and q (axis-parallel or diagonal)."""
    vx, vy = q[0] - p[0], q[1] - p[1]
    n2 = vx * vx + vy * vy
    m = [[2 * vx * vx, 2 * vx * vy], [2 * vx * vy, 2 * vy * vy]]
    if any(x % n2 for row in m for x in row):
        raise ValueError("reflection line must be axis-parallel or diagonal")
    a, b = m[0][0] // n2 - 1, m[0][1] // n2
    c, d = m[1][0] // n2, m[1][1] // n2 - 1
    # fix p
    e = p[0] - (a * p[0] + b * p[1])
    f = p[1] - (c * p[0] + d * p[1])
    return (a, b, c, d, e, f)


# -- local frame ------------------------------------------------------------------

LOCAL_EDGES: dict[str, tuple[Point, Point]] = {
    "S": ((0, 0), (1, 0)),
    "E": ((1, 0), (1, 1)),
    "N": ((0, 1), (1, 1)),
    "W": ((0, 0), (0, 1)),
}
# crossing into the next square re-bases the frame on the exit edge
CROSS: dict[str, Affine] = {
    "N": (1, 0, 0, 1, 0, -1),
    "E": (0, -1, 1, 0, 1, -1),
    "S": (-1, 0, 0, -1, 1, 0),
    "W": (0, 1, -1, 0, 0, 0),
}
QUARTER_POINTS: dict[str, Point] = {
    "S": (Fraction(1, 2), Fraction(1, 6)),
    "E": (Fraction(5, 6), Fraction(1, 2)),
    "N": (Fraction(1, 2), Fraction(5, 6)),
    "W": (Fraction(1, 6), Fraction(1, 2)),
}
EXIT_DIR = {MoveKind.STRAIGHT: "N", MoveKind.RIGHT: "E", MoveKind.LEFT: "W", MoveKind.UTURN: "S"}


@dataclass(frozen=True)
class Frame:
    """A visit's square together with the edge the strip enters through."""

    square: Square
    entry: Edge

    def edge(self, d: str) -> Edge:
        sq = self.square
        if d == "S":
            return self.entry
        if d == "N":
            return sq.opposite(self.entry)
        heading = neg(sq.outward(self.entry))
        right = cross(heading, sq.normal)
        return sq.edge_toward(right if d == "E" else neg(right))

    def quarter_edges(self) -> dict[str, Edge]:
        return {d: self.edge(d) for d in "SENW"}


def _segment_dir(seg: tuple[Point, Point]) -> str | None:
    s = frozenset(seg)
    for d, ls in LOCAL_EDGES.items():
        if frozenset(ls) == s:
            return d
    return None


# -- strip geometry ------------------------------------------------------------------


class StripKind(enum.Enum):
    CANONICAL = "canonical"
    ZIGZAG = "zigzag"


class CanonicalStrip:
    """1 x n strip, cell k = [k, k+1] x [0, 1], diagonal (k,0)-(k+1,1) in every cell."""

    kind = StripKind.CANONICAL
    has_diagonals = True

    def polygon(self, k: int, part: str) -> list[Point]:
        if part == "full":
            return [(k, 0), (k + 1, 0), (k + 1, 1), (k, 1)]
        if part == "first":
            return [(k, 0), (k + 1, 1), (k, 1)]
        return [(k, 0), (k + 1, 0), (k + 1, 1)]

    def entry(self, k: int) -> tuple[Point, Point]:
        return ((k, 0), (k, 1))

    def exit(self, k: int) -> tuple[Point, Point]:
        return ((k + 1, 0), (k + 1, 1))

    def diagonal(self, k: int) -> tuple[Point, Point]:
        return ((k, 0), (k + 1, 1))

    def initial(self, phase: int) -> Affine:
        # u runs up the first square; phase picks which side of the strip faces out
        return (0, 1, 1, 0, 0, 0) if phase == 0 else (0, -1, 1, 0, 1, 0)

    def layout(self, k: int) -> tuple[int, int]:
        return (k, 0)


class ZigZagStrip:
    """Staircase of unit cells; even cells leave to the right, odd cells leave upward."""

    kind = StripKind.ZIGZAG
    has_diagonals = False

    def layout(self, k: int) -> tuple[int, int]:
        return ((k + 1) // 2, k // 2)

    def polygon(self, k: int, part: str = "full") -> list[Point]:
        x, y = self.layout(k)
        return [(x, y), (x + 1, y), (x + 1, y + 1), (x, y + 1)]

    def entry(self, k: int) -> tuple[Point, Point]:
        x, y = self.layout(k)
        return ((x, y), (x + 1, y)) if k % 2 == 0 else ((x, y), (x, y + 1))

    def exit(self, k: int) -> tuple[Point, Point]:
        x, y = self.layout(k)
        return ((x + 1, y), (x + 1, y + 1)) if k % 2 == 0 else ((x, y + 1), (x + 1, y + 1))

    def diagonal(self, k: int):
        raise ValueError("zig-zag strips have no diagonal hinges")

    def initial(self, phase: int) -> Affine:
        # phase 0: cell 0 leaves through the right edge (natural right turn)
        return IDENTITY if phase == 0 else (-1, 0, 0, 1, 1, 0)


def strip_geometry(kind: StripKind | str):
    kind = StripKind(kind)
    return CanonicalStrip() if kind is StripKind.CANONICAL else ZigZagStrip()


def _inside(poly: list[Point], p: Point) -> bool:
    """Strict containment in a convex polygon given counter-clockwise or clockwise."""
    sign = 0
    n = len(poly)
    for i in range(n):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % n]
        c = (x2 - x1) * (p[1] - y1) - (y2 - y1) * (p[0] - x1)
        if c == 0:
            return False
        s = 1 if c > 0 else -1
        if sign == 0:
            sign = s
        elif s != sign:
            return False
    return True


def _footprint(geom, cell: int, part: str, T: Affine) -> tuple[str, ...] | None:
    """Local quarters covered by a piece, or None if it leaves the unit square."""
    poly = geom.polygon(cell, part)
    for p in poly:
        x, y = apply(T, p)
        if not (0 <= x <= 1 and 0 <= y <= 1):
            return None
    inv = inverse(T)
    return tuple(d for d in "SENW" if _inside(poly, apply(inv, QUARTER_POINTS[d])))


# -- folding model -----------------------------------------------------------------


@dataclass(frozen=True)
class Crease:
    hinge: str  # "edge:k" (boundary before cell k) or "diag:k"
    angle: int

    @property
    def kind(self) -> str:
        return self.hinge.split(":")[0]

    @property
    def index(self) -> int:
        return int(self.hinge.split(":")[1])


@dataclass(frozen=True)
class Piece:
    cell: int
    part: str
    visit: int
    square: Square
    quarters: tuple[Edge, ...]


@dataclass(frozen=True)
class VisitRecord:
    visit: int
    square: Square
    first_cell: int
    cells: int
    face: int  # +1 when the strip's top side faces outward on the visit's first cell
    move: MoveKind


@dataclass(frozen=True)
class StripFolding:
    kind: StripKind
    length: int
    phase: int
    start: Frame
    creases: tuple[Crease, ...]
    pieces: tuple[Piece, ...]
    visits: tuple[VisitRecord, ...] = ()
    mode: str = "band"

    @property
    def folds180(self) -> int:
        return sum(1 for c in self.creases if abs(c.angle) == 180)

    @property
    def diagonal_folds(self) -> int:
        return sum(1 for c in self.creases if c.kind == "diag" and c.angle)

    def angles(self) -> dict[str, int]:
        return {c.hinge: c.angle for c in self.creases}

    def to_json(self) -> dict:
        return {
            "strip": {"kind": self.kind.value, "length": self.length},
            "mode": self.mode,
            "phase": self.phase,
            "start": {"square": _sq_json(self.start.square), "entry": _edge_json(self.start.entry)},
            "creases": [{"hinge": c.hinge, "angle": c.angle} for c in self.creases],
            "placement": [
                {
                    "cell": p.cell,
                    "part": p.part,
                    "square": _sq_json(p.square),
                    "visit": p.visit,
                    "quarters": [_edge_json(e) for e in p.quarters],
                }
                for p in self.pieces
            ],
            "visits": [
                {
                    "visit": v.visit,
                    "square": _sq_json(v.square),
                    "first_cell": v.first_cell,
                    "cells": v.cells,
                    "face": v.face,
                    "move": v.move.value,
                }
                for v in self.visits
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def _sq_json(s: Square) -> list:
    return [list(s.anchor), s.axis, s.sign]


def _edge_json(e: Edge) -> list:
    return [list(e.start), e.axis]


def _sq(d) -> Square:
    return Square(tuple(d[0]), d[1], d[2])


def _edge(d) -> Edge:
    return Edge(tuple(d[0]), d[1])


def folding_from_json(doc: dict | str) -> StripFolding:
    if isinstance(doc, str):
        doc = json.loads(doc)
    try:
        return StripFolding(
            kind=StripKind(doc["strip"]["kind"]),
            length=int(doc["strip"]["length"]),
            phase=int(doc["phase"]),
            start=Frame(_sq(doc["start"]["square"]), _edge(doc["start"]["entry"])),
            creases=tuple(Crease(c["hinge"], int(c["angle"])) for c in doc["creases"]),
            pieces=tuple(
                Piece(p["cell"], p["part"], p["visit"], _sq(p["square"]), tuple(_edge(e) for e in p["quarters"]))
                for p in doc["placement"]
            ),
            visits=tuple(
                VisitRecord(v["visit"], _sq(v["square"]), v["first_cell"], v["cells"], v["face"], MoveKind(v["move"]))
                for v in doc.get("visits", [])
            ),
            mode=doc.get("mode", "band"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed folding document: {exc}") from None


# -- compiler ------------------------------------------------------------------------


@dataclass
class _Plan:
    pieces: list[tuple[int, str, Affine, tuple[str, ...]]]
    diag: tuple[bool, ...]
    end: Affine


def _plan_visit(geom, T: Affine, k: int, exit_dir: str | None, max_cells: int, require_full: bool) -> _Plan | None:
    """Cheapest cell/fold sequence for one visit; every internal hinge folds by 180."""
    for m in range(1, max_cells + 1):
        masks = product((False, True), repeat=m) if geom.has_diagonals else [(False,) * m]
        for mask in masks:
            cur = T
            pieces = []
            ok = True
            for j, dg in enumerate(mask):
                cell = k + j
                parts = []
                if dg:
                    parts.append(("first", cur))
                    cur = compose(cur, reflection(*geom.diagonal(cell)))
                    parts.append(("second", cur))
                else:
                    parts.append(("full", cur))
                for part, Tp in parts:
                    fp = _footprint(geom, cell, part, Tp)
                    if fp is None:
                        ok = False
                        break
                    pieces.append((cell, part, Tp, fp))
                if not ok:
                    break
                if j < m - 1:
                    cur = compose(cur, reflection(*geom.exit(cell)))
            if not ok:
                continue
            if exit_dir is not None:
                seg = tuple(apply(cur, p) for p in geom.exit(k + m - 1))
                if _segment_dir(seg) != exit_dir:
                    continue
            if require_full and {q for *_, fp in pieces for q in fp} != set("SENW"):
                continue
            return _Plan(pieces, tuple(mask), cur)
    return None


def _crossing_angle(surface: GridSurface, edge: Edge, face: int) -> int:
    kind = edge_dihedral(surface, edge)
    if kind is SurfaceEdgeKind.FLAT:
        return 0
    return (-90 if kind is SurfaceEdgeKind.CONVEX else 90) * face


def _start_frame(tour: MillingTour) -> Frame:
    s0 = tour.steps[0]
    return Frame(s0.square, s0.entry if s0.entry is not None else s0.square.edges()[0])


def compile_folding(
    tour: MillingTour,
    surface: GridSurface,
    kind: StripKind | str,
    *,
    phase: int = 0,
    max_cells: int = 4,
    require_full: bool = True,
    mode: str = "generic",
) -> StripFolding:
    geom = strip_geometry(kind)
    T0 = geom.initial(phase)
    face0 = det(T0)
    T = T0
    frame = _start_frame(tour)
    k = 0
    creases: list[Crease] = []
    pieces: list[Piece] = []
    visits: list[VisitRecord] = []
    L = tour.L
    for i, step in enumerate(tour.steps):
        if frame.square != step.square:
            raise PreconditionError(f"visit {i}: strip reached {frame.square}, tour expects {step.square}")
        exit_dir = EXIT_DIR[step.move] if L > 1 else None
        plan = _plan_visit(geom, T, k, exit_dir, max_cells, require_full)
        if plan is None:
            raise PreconditionError(
                f"visit {i} ({step.move.name} at {step.square}): no {geom.kind.value} gadget within {max_cells} cells"
            )
        qe = frame.quarter_edges()
        for cell, part, Tp, fp in plan.pieces:
            pieces.append(Piece(cell, part, i, step.square, tuple(qe[d] for d in fp)))
        first_face = det(plan.pieces[0][2]) * face0
        visits.append(VisitRecord(i, step.square, k, len(plan.diag), first_face, step.move))
        for j, dg in enumerate(plan.diag):
            cell = k + j
            cell_T = next(Tp for c, _, Tp, _ in plan.pieces if c == cell)
            face = det(cell_T) * face0
            if j > 0:
                prev_T = [Tp for c, _, Tp, _ in plan.pieces if c == cell - 1][-1]
                creases.append(Crease(f"edge:{cell}", 180 * det(prev_T) * face0))
            if geom.has_diagonals:
                creases.append(Crease(f"diag:{cell}", 180 * face if dg else 0))
        k += len(plan.diag)
        if i < L - 1:
            end_face = det(plan.end) * face0
            creases.append(Crease(f"edge:{k}", _crossing_angle(surface, step.exit, end_face)))
            T = compose(CROSS[exit_dir], plan.end)
            nxt = surface.other(step.square, step.exit)
            if nxt is None:
                raise PreconditionError(f"visit {i} exits through boundary edge {step.exit}")
            frame = Frame(nxt, step.exit)
    creases.sort(key=lambda c: (c.index, c.kind == "diag"))
    return StripFolding(
        kind=geom.kind,
        length=k,
        phase=phase,
        start=_start_frame(tour),
        creases=tuple(creases),
        pieces=tuple(pieces),
        visits=tuple(visits),
        mode=mode,
    )


def _require(report, names: list[int], what: str) -> None:
    checks = {1: report.property1, 2: report.property2, 3: report.property3}
    for n in names:
        if not checks[n]:
            raise PreconditionError(f"{what} needs tour property ({n}), which fails")
    if not report.well_formed:
        raise PreconditionError(f"{what} needs a well-formed tour")


def fold_canonical_band_tour(tour: MillingTour, surface: GridSurface) -> StripFolding:
    """One strip cell per visit; every turn is a single 180-degree diagonal fold."""
    _require(verify_properties(tour, surface), [1, 3], "canonical band folding")
    err = None
    for phase in (0, 1):
        try:
            return compile_folding(tour, surface, StripKind.CANONICAL, phase=phase, max_cells=1, require_full=False, mode="band")
        except PreconditionError as exc:
            err = exc
    raise PreconditionError(f"turns do not match the diagonal hinges: {err}")


def fold_zigzag_band_tour(tour: MillingTour, surface: GridSurface) -> StripFolding:
    _require(verify_properties(tour, surface), [1, 2], "zig-zag band folding")
    return compile_folding(tour, surface, StripKind.ZIGZAG, phase=0, max_cells=3, require_full=True, mode="band")


def fold_generic_canonical(tour: MillingTour, surface: GridSurface) -> StripFolding:
    return compile_folding(tour, surface, StripKind.CANONICAL, phase=0, max_cells=4, require_full=True)


def fold_generic_zigzag(tour: MillingTour, surface: GridSurface) -> StripFolding:
    """Either starting parity works; keep the shorter strip."""
    options = [compile_folding(tour, surface, StripKind.ZIGZAG, phase=p, max_cells=4, require_full=True) for p in (0, 1)]
    return min(options, key=lambda f: (f.length, f.phase))


def zigzag_turn_cost(cell: int, move: MoveKind, face: int = 1, phase: int = 0) -> int:
    """Cells a zig-zag turn starting at ``cell`` costs; the cell's natural turn is free.

    Even cells leave to the right in strip coordinates, odd cells to the left
    (as seen from the direction of travel); a cell lying mirrored on the
    surface swaps the two.
    """
    mirrored = (face < 0) != (phase == 1)
    natural = MoveKind.RIGHT if (cell % 2 == 0) != mirrored else MoveKind.LEFT
    return 1 if move is natural else 3


# -- validation --------------------------------------------------------------------


@dataclass
class ValidationReport:
    length: int
    folds180: int
    diagonal_folds: int
    covered: bool
    missing: Square | None
    max_layers: int
    isometric: bool
    layer_histogram: dict[int, int]
    problems: list[str] = field(default_factory=list)
    layers: dict[tuple[Square, Edge], int] = field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "length": self.length,
            "folds180": self.folds180,
            "diagonal_folds": self.diagonal_folds,
            "covered": self.covered,
            "missing": None if self.missing is None else _sq_json(self.missing),
            "max_layers": self.max_layers,
            "isometric": self.isometric,
            "layer_histogram": {str(k): v for k, v in sorted(self.layer_histogram.items())},
            "problems": self.problems,
        }


def validate_folding(folding: StripFolding, surface: GridSurface) -> ValidationReport:
    """Re-fold the strip from its crease list alone and measure the result.

    The replay uses only the start frame, the crease angles and the surface;
    the compiler's recorded placement is compared against it, not trusted.
    """
    geom = strip_geometry(folding.kind)
    angles = folding.angles()
    T0 = geom.initial(folding.phase)
    face0 = det(T0)
    T = T0
    frame = folding.start
    visit = 0
    problems: list[str] = []
    layers: Counter = Counter()
    replayed: list[Piece] = []
    n = folding.length
    for cell in range(n):
        diag = angles.get(f"diag:{cell}", 0)
        if diag not in (0, 180, -180):
            problems.append(f"diag:{cell} has unsupported angle {diag}")
            break
        parts = [("full", T)]
        if diag:
            parts = [("first", T), ("second", compose(T, reflection(*geom.diagonal(cell))))]
        bad = False
        for part, Tp in parts:
            fp = _footprint(geom, cell, part, Tp)
            if fp is None:
                problems.append(f"cell {cell} ({part}) leaves square {frame.square}")
                bad = True
                break
            qe = frame.quarter_edges()
            edges = tuple(qe[d] for d in fp)
            replayed.append(Piece(cell, part, visit, frame.square, edges))
            for e in edges:
                layers[(frame.square, e)] += 1
        if bad:
            break
        T = parts[-1][1]
        if cell == n - 1:
            break
        a = angles.get(f"edge:{cell + 1}")
        if a is None:
            problems.append(f"missing hinge edge:{cell + 1}")
            break
        if abs(a) == 180:
            T = compose(T, reflection(*geom.exit(cell)))
            continue
        d = _segment_dir(tuple(apply(T, p) for p in geom.exit(cell)))
        if d is None:
            problems.append(f"hinge edge:{cell + 1} does not lie on a square edge")
            break
        edge = frame.edge(d)
        nxt = surface.other(frame.square, edge)
        if nxt is None:
            problems.append(f"hinge edge:{cell + 1} crosses boundary edge {edge}")
            break
        want = _crossing_angle(surface, edge, det(T) * face0)
        if a != want:
            problems.append(f"hinge edge:{cell + 1} folds {a}, surface needs {want}")
        T = compose(CROSS[d], T)
        frame = Frame(nxt, edge)
        visit += 1

    if not problems and tuple(replayed) != folding.pieces:
        problems.append("recorded placement differs from the re-folded strip")
    missing = None
    for s in surface.squares:
        if any(layers[(s, e)] == 0 for e in s.edges()):
            missing = s
            break
    hist = Counter(layers[(s, e)] for s in surface.squares for e in s.edges())
    return ValidationReport(
        length=n,
        folds180=folding.folds180,
        diagonal_folds=folding.diagonal_folds,
        covered=missing is None,
        missing=missing,
        max_layers=max(layers.values(), default=0),
        isometric=not problems,
        layer_histogram=dict(hist),
        problems=problems,
        layers=dict(layers),
    )


def truncated(folding: StripFolding, length: int) -> StripFolding:
    """Prefix of a folding; handy for exercising the validator."""
    keep = tuple(c for c in folding.creases if (c.kind == "edge" and c.index < length) or (c.kind == "diag" and c.index < length))
    return StripFolding(
        kind=folding.kind,
        length=length,
        phase=folding.phase,
        start=folding.start,
        creases=keep,
        pieces=tuple(p for p in folding.pieces if p.cell < length),
        visits=tuple(v for v in folding.visits if v.first_cell < length),
        mode=folding.mode,
    )
