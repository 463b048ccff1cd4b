"""End-to-end stages shared by the CLI and the tests."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .bands import BandCover, BandSet, BandTree, band_graph, cover_from_vertex_cover, enumerate_bands, overlap_graph, spanning_tree
from .errors import StripFoldError
from .folding import (
    StripFolding,
    StripKind,
    fold_canonical_band_tour,
    fold_generic_canonical,
    fold_generic_zigzag,
    fold_zigzag_band_tour,
    validate_folding,
)
from .pattern import emit_crease_pattern
from .surface import GridSurface, require_closed_genus0
from .tour import MillingTour, doubled_tree_tour, tour_lower_bounds, tour_well_formed_or_raise, tree_tour, verify_properties
from .vcover import TripartiteGraph, approx_vertex_cover


@dataclass(frozen=True)
class BandTourResult:
    bandset: BandSet
    cover: BandCover
    tree: BandTree
    tour: MillingTour


@dataclass(frozen=True)
class PipelineConfig:
    strip: StripKind = StripKind.CANONICAL
    mode: str = "band"  # band | generic

    def __post_init__(self) -> None:
        if self.mode not in ("band", "generic"):
            raise ValueError(f"unknown tour mode {self.mode!r}")


class StageError(StripFoldError):
    """A module error tagged with the pipeline stage it came from."""

    def __init__(self, stage: str, cause: StripFoldError) -> None:
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code


def overlap_tripartite(bandset: BandSet) -> TripartiteGraph:
    g = overlap_graph(bandset)
    return TripartiteGraph.build({v: g.part(v) for v in g.vertices}, g.edges)


def band_tour(surface: GridSurface) -> BandTourResult:
    require_closed_genus0(surface)
    bandset = enumerate_bands(surface)
    vc = approx_vertex_cover(overlap_tripartite(bandset))
    cover = cover_from_vertex_cover(vc, bandset)
    tree = spanning_tree(band_graph(cover, overlap_graph(bandset)))
    tour = tree_tour(bandset, tree)
    tour_well_formed_or_raise(tour, surface)
    return BandTourResult(bandset, cover, tree, tour)


def make_tour(surface: GridSurface, mode: str) -> tuple[MillingTour, BandTourResult | None]:
    if mode == "band":
        res = band_tour(surface)
        return res.tour, res
    return doubled_tree_tour(surface), None


def fold(tour: MillingTour, surface: GridSurface, strip: StripKind, mode: str) -> StripFolding:
    if mode == "band":
        fn = fold_canonical_band_tour if strip is StripKind.CANONICAL else fold_zigzag_band_tour
    else:
        fn = fold_generic_canonical if strip is StripKind.CANONICAL else fold_generic_zigzag
    return fn(tour, surface)


def length_bound(strip: StripKind, mode: str, N: int) -> int:
    """Certified strip length bound for the chosen tour and strip."""
    if mode == "band":
        return 2 * N if strip is StripKind.CANONICAL else 4 * N
    return 4 * N if strip is StripKind.CANONICAL else 6 * N


def layer_bound(strip: StripKind, mode: str) -> int:
    if mode == "band":
        return 2 if strip is StripKind.CANONICAL else 4
    return 8 if strip is StripKind.CANONICAL else 12


def ratio_table(surface: GridSurface, tour: MillingTour, folding: StripFolding, bandset: BandSet | None, mode: str) -> list[dict]:
    lb = tour_lower_bounds(surface, bandset)
    rows = [
        {"quantity": "L / N", "value": tour.L, "bound": surface.N, "ratio": round(tour.L / surface.N, 6)},
    ]
    if bandset is not None:
        rows.append(
            {
                "quantity": "t / turns_lb" + ("" if lb.turns_exact else " (LP bound)"),
                "value": tour.t,
                "bound": lb.turns,
                "ratio": round(tour.t / lb.turns, 6) if lb.turns else None,
            }
        )
    cap = length_bound(folding.kind, mode, surface.N)
    rows.append({"quantity": "strip length / certified bound", "value": folding.length, "bound": cap, "ratio": round(folding.length / cap, 6)})
    return rows


def run_pipeline(surface: GridSurface, config: PipelineConfig) -> dict[str, str]:
    """All artifacts as name -> text; deterministic for a fixed surface and config."""
    stage = "tour"
    try:
        tour, res = make_tour(surface, config.mode)
        stage = "fold"
        folding = fold(tour, surface, config.strip, config.mode)
        stage = "validate"
        report = validate_folding(folding, surface)
    except StripFoldError as exc:
        raise StageError(stage, exc) from exc
    bandset = res.bandset if res else None
    props = verify_properties(tour, surface)
    cap_len = length_bound(config.strip, config.mode, surface.N)
    cap_layers = layer_bound(config.strip, config.mode)
    doc = {
        "surface": {"N": surface.N, "closed": surface.closed},
        "config": {"strip": config.strip.value, "mode": config.mode},
        "tour": props.to_json(),
        "cover": None if res is None else sorted(res.cover.bands),
        "validation": report.to_json(),
        "bounds": {
            "length": cap_len,
            "layers": cap_layers,
            "length_ok": report.length <= cap_len,
            "layers_ok": report.max_layers <= cap_layers,
        },
        "ratios": ratio_table(surface, tour, folding, bandset, config.mode),
    }
    if not (report.covered and report.isometric and doc["bounds"]["length_ok"] and doc["bounds"]["layers_ok"]):
        doc["status"] = "failed"
    else:
        doc["status"] = "ok"
    return {
        "tour.json": json.dumps(tour.to_json(), sort_keys=True, indent=1) + "\n",
        "folding.json": folding.dumps() + "\n",
        "pattern.svg": emit_crease_pattern(folding, "svg"),
        "report.json": json.dumps(doc, sort_keys=True, indent=1) + "\n",
    }


def write_artifacts(artifacts: dict[str, str], outdir: Path) -> list[Path]:
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in sorted(artifacts):
        p = outdir / name
        p.write_text(artifacts[name], encoding="utf-8")
        paths.append(p)
    return paths

