"""Case taxonomy for collision-free rigid folding of a strip onto a polyhedron.

No motion is simulated.  Each tour step is mapped to the local case whose
accordion moves are known to work, given the dihedral types of the entry
edge e12 and exit edge e23, the move, the side of the accordion facing the
surface and (for zig-zag strips) the cost of the turn.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import InvariantError, PreconditionError
from .folding import StripFolding, StripKind, zigzag_turn_cost
from .surface import GridSurface, MoveKind, SurfaceEdgeKind, Vec, edge_dihedral, feature_size_at_least_2
from .tour import MillingTour


class Facing(enum.Enum):
    UP = "up"
    DOWN = "down"


class CaseLabel(enum.Enum):
    FACE_UP_STRAIGHT = "FaceUpStraight"
    FACE_UP_TURN = "FaceUpTurn"
    FR_TURN = "FR_Turn"
    RR_TURN = "RR_Turn"
    RC_STRAIGHT = "RC_Straight"
    FR1_ZIG = "FR1_Zig"
    RFSTAR_ZIG = "RFstar_Zig"
    RR1_ZIG = "RR1_Zig"
    RR3_ZIG = "RR3_Zig"


@dataclass(frozen=True)
class StepCase:
    index: int
    e12: SurfaceEdgeKind
    e23: SurfaceEdgeKind
    move: MoveKind
    facing: Facing
    zigzag_cost: int | None
    label: CaseLabel

    def to_json(self) -> dict:
        return {
            "step": self.index,
            "e12": self.e12.value,
            "e23": self.e23.value,
            "move": self.move.value,
            "facing": self.facing.value,
            "zigzag_cost": self.zigzag_cost,
            "label": self.label.value,
        }


@dataclass(frozen=True)
class MoveScript:
    strip: StripKind
    cases: tuple[StepCase, ...]

    @property
    def entries(self) -> list[tuple[int, CaseLabel]]:
        return [(c.index, c.label) for c in self.cases]

    def histogram(self) -> dict[str, int]:
        c = Counter(x.label.value for x in self.cases)
        return {lab.value: c.get(lab.value, 0) for lab in CaseLabel}

    def to_json(self) -> dict:
        return {"strip": self.strip.value, "histogram": self.histogram(), "steps": [c.to_json() for c in self.cases]}

    def to_text(self) -> str:
        lines = [f"{c.index:5d}  {c.label.value:15s} {c.move.value} {c.facing.value:4s} e12={c.e12.value} e23={c.e23.value}" for c in self.cases]
        lines.append("")
        lines.extend(f"{k:15s} {v}" for k, v in self.histogram().items())
        return "\n".join(lines) + "\n"


def require_feature_size(voxels: Iterable[Vec]) -> None:
    if not feature_size_at_least_2(voxels):
        raise PreconditionError("feature size is below 2; scale the shape by a factor of 2 (scale_voxels) first")


def _label(strip: StripKind, e12, e23, move: MoveKind, facing: Facing, cost: int | None) -> CaseLabel:
    R = SurfaceEdgeKind.REFLEX
    if move is MoveKind.UTURN:
        raise PreconditionError("rigid cases cover tours without U-turns")
    if move is MoveKind.STRAIGHT and e12 is R and e23 is R:
        raise InvariantError("reflex-reflex straight step on a shape with feature size 2")
    if facing is Facing.UP:
        return CaseLabel.FACE_UP_STRAIGHT if move is MoveKind.STRAIGHT else CaseLabel.FACE_UP_TURN
    if move is MoveKind.STRAIGHT:
        return CaseLabel.RC_STRAIGHT
    if strip is StripKind.CANONICAL:
        return CaseLabel.RR_TURN if (e12 is R and e23 is R) else CaseLabel.FR_TURN
    if e23 is not R:
        return CaseLabel.RFSTAR_ZIG
    if cost == 3:
        return CaseLabel.RR3_ZIG
    if cost == 1:
        return CaseLabel.RR1_ZIG if e12 is R else CaseLabel.FR1_ZIG
    raise InvariantError(f"zig-zag turn with cost {cost}")


def classify_cases(tour: MillingTour, surface: GridSurface, folding: StripFolding) -> MoveScript:
    """Label every step of ``tour`` as folded by ``folding``.

    Facing is read off the folding: a visit whose first cell shows the strip's
    top side outward has the accordion (the rest of the strip, lying on that
    cell) facing down onto the square.
    """
    if not surface.closed:
        raise PreconditionError("closed surface required")
    if surface.voxels is not None:
        require_feature_size(surface.voxels)
    if len(folding.visits) != tour.L:
        raise InvariantError("folding and tour disagree on the number of visits")
    cases = []
    for i, (step, visit) in enumerate(zip(tour.steps, folding.visits)):
        if visit.square != step.square:
            raise InvariantError(f"visit {i} of the folding is not on the tour square")
        e12 = edge_dihedral(surface, step.entry)
        e23 = edge_dihedral(surface, step.exit)
        facing = Facing.DOWN if visit.face > 0 else Facing.UP
        cost = None
        if folding.kind is StripKind.ZIGZAG and step.move.is_turn:
            cost = visit.cells
            if cost != zigzag_turn_cost(visit.first_cell, step.move, visit.face, folding.phase):
                raise InvariantError(f"step {i}: zig-zag turn cost {cost} disagrees with the parity rule")
        cases.append(StepCase(i, e12, e23, step.move, facing, cost, _label(folding.kind, e12, e23, step.move, facing, cost)))
    return MoveScript(folding.kind, tuple(cases))
