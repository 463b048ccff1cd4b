"""stripfold command line: check -> bands -> tour -> fold -> validate -> emit.

Exit codes: 0 ok, 1 usage, 2 invalid input, 3 unmet precondition
(genus, closedness, feature size), 4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .bands import ORACLE_MAX_BANDS, brute_force_min_band_cover, enumerate_bands, overlap_graph
from .corpus import MAX_CUBES, polycube_corpus
from .errors import InputError, PreconditionError, StripFoldError
from .folding import StripKind, folding_from_json, validate_folding
from .pattern import FORMATS, emit_crease_pattern
from .pipeline import PipelineConfig, StageError, fold, make_tour, overlap_tripartite, run_pipeline, write_artifacts
from .rigid import classify_cases
from .surface import GridSurface, dump_voxels, extract_surface, feature_size_at_least_2, genus, load_voxels, scale_voxels
from .vcover import approx_vertex_cover, lp_half_integral, lp_value

log = logging.getLogger("stripfold")

EXIT_OK, EXIT_USAGE = 0, 1


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_surface(path: str) -> GridSurface:
    """Voxel text, or a surface JSON document when the name ends in .json."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    if p.suffix == ".json":
        try:
            return GridSurface.from_json(text)
        except (ValueError, KeyError, TypeError) as exc:
            raise InputError(f"{path}: malformed surface document: {exc}") from None
    try:
        return extract_surface(load_voxels(text))
    except InputError as exc:
        raise type(exc)(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _text(rows: list[tuple[str, object]]) -> str:
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k:<{width}}  {v}\n" for k, v in rows)


# -- subcommands -------------------------------------------------------------


def cmd_check(args) -> int:
    surface = read_surface(args.input)
    g = genus(surface) if surface.closed else None
    fs = feature_size_at_least_2(surface.voxels) if surface.voxels is not None else None
    usable = args.pipeline == "generic" or (surface.closed and g == 0)
    doc = {"N": surface.N, "connected": True, "closed": surface.closed, "genus": g, "feature_size_ge_2": fs, "pipeline": args.pipeline, "usable": usable}
    _emit(_dump(doc) if args.format == "json" else _text(list(doc.items())), None)
    if not usable:
        reason = "closed surface required" if not surface.closed else f"genus-0 surface required (genus is {g})"
        print(f"stripfold: band pipeline refused: {reason}", file=sys.stderr)
        return PreconditionError.exit_code
    return EXIT_OK


def cmd_bands(args) -> int:
    surface = read_surface(args.input)
    bs = enumerate_bands(surface)
    g = overlap_graph(bs)
    tg = overlap_tripartite(bs)
    lp = lp_half_integral(tg)
    vc = approx_vertex_cover(tg)
    oracle = brute_force_min_band_cover(bs)[0] if len(bs) <= ORACLE_MAX_BANDS else None
    doc = {
        "bands": [b.to_json() for b in bs.bands],
        "overlap_edges": sorted(list(e) for e in g.edges),
        "lp_value": str(lp_value(lp)),
        "cover": sorted(vc),
        "min_cover": oracle,
    }
    if args.format == "json":
        _emit(_dump(doc), args.output)
    else:
        rows = [(b.name, f"length {len(b)}") for b in bs.bands]
        rows += [("overlap edges", len(g.edges)), ("LP value", doc["lp_value"]), ("cover", doc["cover"]), ("min cover", oracle)]
        _emit(_text(rows), args.output)
    return EXIT_OK


def cmd_tour(args) -> int:
    surface = read_surface(args.input)
    tour, res = make_tour(surface, args.mode)
    if args.format == "json":
        _emit(_dump(tour.to_json()), args.output)
        return EXIT_OK
    from .tour import tour_lower_bounds, verify_properties

    rep = verify_properties(tour, surface)
    lb = tour_lower_bounds(surface, res.bandset if res else None)
    rows = [("N", surface.N), ("L", tour.L), ("t", tour.t), ("U-turns", tour.u_turns), ("L/N", f"{tour.L / surface.N:.3f}")]
    if res is not None:
        rows.append(("turns lower bound", lb.turns))
        if lb.turns:
            rows.append(("t/turns_lb", f"{tour.t / lb.turns:.3f}"))
    rows += [("max visits", rep.max_visits), ("alternating", rep.alternating), ("gaps even", rep.gaps_even)]
    rows.append(("moves", "".join(m.value for m in (s.move for s in tour.steps))))
    _emit(_text(rows), args.output)
    return EXIT_OK


def cmd_fold(args) -> int:
    surface = read_surface(args.input)
    strip = StripKind(args.strip)
    tour, _ = make_tour(surface, args.mode)
    folding = fold(tour, surface, strip, args.mode)
    _emit(emit_crease_pattern(folding, args.format), args.output)
    return EXIT_OK


def cmd_validate(args) -> int:
    surface = read_surface(args.input)
    try:
        folding = folding_from_json(Path(args.folding).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read {args.folding}: {exc.strerror}") from None
    rep = validate_folding(folding, surface)
    if args.format == "json":
        _emit(_dump(rep.to_json()), None)
    else:
        _emit(_text(list(rep.to_json().items())), None)
    return EXIT_OK if rep.covered and rep.isometric else InputError.exit_code


def cmd_rigid(args) -> int:
    surface = read_surface(args.input)
    if args.scale != 1:
        if surface.voxels is None:
            raise InputError("--scale needs a voxel input")
        surface = extract_surface(scale_voxels(surface.voxels, args.scale))
    tour, _ = make_tour(surface, "band")
    folding = fold(tour, surface, StripKind(args.strip), "band")
    script = classify_cases(tour, surface, folding)
    _emit(_dump(script.to_json()) if args.format == "json" else script.to_text(), args.output)
    return EXIT_OK


def cmd_gen_corpus(args) -> int:
    if not 1 <= args.max_cubes <= MAX_CUBES:
        raise InputError(f"--max-cubes must be between 1 and {MAX_CUBES}")
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    for i, (vox, _) in enumerate(polycube_corpus(args.seed, args.count, args.max_cubes)):
        p = out / f"shape_{args.seed}_{i:04d}.vox"
        p.write_text(dump_voxels(vox), encoding="utf-8")
        print(p)
    return EXIT_OK


def cmd_run(args) -> int:
    surface = read_surface(args.input)
    config = PipelineConfig(StripKind(args.strip), args.mode)
    artifacts = run_pipeline(surface, config)
    for p in write_artifacts(artifacts, Path(args.outdir)):
        print(p)
    report = json.loads(artifacts["report.json"])
    for row in report["ratios"]:
        print(f"{row['quantity']:<32s} {row['value']:>6} / {row['bound']:<6} = {row['ratio']}")
    return EXIT_OK if report["status"] == "ok" else 4


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="stripfold", description="Milling tours of grid polyhedra and their strip foldings.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_input(name: str, help: str):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("input", help="voxel file (x y z per line) or surface .json")
        return sp

    sp = with_input("check", "surface diagnostics")
    sp.add_argument("--pipeline", choices=["band", "generic"], default="band")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.set_defaults(func=cmd_check)

    sp = with_input("bands", "bands, overlap graph and band cover")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_bands)

    sp = with_input("tour", "milling tour and its ratios")
    sp.add_argument("--mode", choices=["band", "generic"], default="band")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_tour)

    sp = with_input("fold", "compile a strip folding and emit its crease pattern")
    sp.add_argument("--strip", choices=[k.value for k in StripKind], default="canonical")
    sp.add_argument("--mode", choices=["band", "generic"], default="band")
    sp.add_argument("--format", choices=FORMATS, default="svg")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_fold)

    sp = with_input("validate", "re-fold a folding JSON and report coverage and layers")
    sp.add_argument("folding", help="folding JSON from `fold --format json`")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.set_defaults(func=cmd_validate)

    sp = with_input("rigid-cases", "classify every tour step into a rigid-motion case")
    sp.add_argument("--strip", choices=[k.value for k in StripKind], default="canonical")
    sp.add_argument("--scale", type=int, default=1, help="scale the voxels first (2 fixes feature size)")
    sp.add_argument("--format", choices=["json", "text"], default="text")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_rigid)

    sp = sub.add_parser("gen-corpus", help="write seeded random genus-0 polycubes")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--max-cubes", type=int, default=12)
    sp.add_argument("--outdir", default="corpus")
    sp.set_defaults(func=cmd_gen_corpus)

    sp = with_input("run", "full pipeline, writing tour/folding/pattern/report artifacts")
    sp.add_argument("--strip", choices=[k.value for k in StripKind], default="canonical")
    sp.add_argument("--mode", choices=["band", "generic"], default="band")
    sp.add_argument("--outdir", default="out")
    sp.set_defaults(func=cmd_run)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=os.environ.get("STRIPFOLD_LOG_LEVEL", "WARNING").upper(), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    log.debug("command %s", args.command)
    try:
        return args.func(args)
    except StageError as exc:
        print(f"stripfold: {exc}", file=sys.stderr)
        return exc.exit_code
    except StripFoldError as exc:
        print(f"stripfold: [{args.command}] {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
