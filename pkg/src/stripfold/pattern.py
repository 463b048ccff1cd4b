"""Crease-pattern output: the flat strip with every hinge and its fold angle."""

from __future__ import annotations

import json

from .folding import StripFolding, strip_geometry

SCALE = 40
MARGIN = 20
FORMATS = ("svg", "json", "text")

# positive angles fold toward the surface's outward side
COLORS = {1: "#c0392b", -1: "#2c6fbb", 0: "#b0b0b0"}


def _hinge_segment(geom, hinge: str):
    kind, idx = hinge.split(":")
    k = int(idx)
    return geom.diagonal(k) if kind == "diag" else geom.entry(k)


def _svg(folding: StripFolding) -> str:
    geom = strip_geometry(folding.kind)
    cells = [geom.layout(k) for k in range(folding.length)]
    w = max(x for x, _ in cells) + 1
    h = max(y for _, y in cells) + 1
    W, H = w * SCALE + 2 * MARGIN, h * SCALE + 2 * MARGIN

    def pt(p) -> tuple[int, int]:
        return (MARGIN + p[0] * SCALE, H - MARGIN - p[1] * SCALE)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<title>{folding.kind.value} strip, length {folding.length}</title>',
        '<g id="cells" fill="#fdfaf2" stroke="#404040" stroke-width="1.5">',
    ]
    for x, y in cells:
        X, Y = pt((x, y + 1))
        out.append(f'<rect x="{X}" y="{Y}" width="{SCALE}" height="{SCALE}"/>')
    out.append("</g>")
    out.append('<g id="creases" stroke-width="2" font-family="monospace" font-size="9">')
    for c in folding.creases:
        sign = (c.angle > 0) - (c.angle < 0)
        (x1, y1), (x2, y2) = (pt(p) for p in _hinge_segment(geom, c.hinge))
        dash = ' stroke-dasharray="3,3"' if sign == 0 else ""
        kind = "valley" if sign > 0 else "mountain" if sign < 0 else "flat"
        out.append(
            f'<line class="{kind}" data-hinge="{c.hinge}" data-angle="{c.angle}" '
            f'x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{COLORS[sign]}"{dash}/>'
        )
        if sign:
            mx, my = (x1 + x2) // 2, (y1 + y2) // 2
            out.append(f'<text x="{mx + 2}" y="{my - 2}" fill="{COLORS[sign]}" stroke="none">{c.angle:+d}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_crease_pattern(folding: StripFolding, fmt: str = "svg") -> str:
    if fmt == "svg":
        return _svg(folding)
    if fmt == "json":
        return folding.dumps() + "\n"
    if fmt == "text":
        lines = [f"{folding.kind.value} strip, length {folding.length}, {folding.folds180} folds of 180"]
        lines += [f"{c.hinge:>10s} {c.angle:+4d}" for c in folding.creases]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown crease pattern format {fmt!r} (choose from {', '.join(FORMATS)})")


def load_crease_pattern(text: str) -> StripFolding:
    from .folding import folding_from_json

    return folding_from_json(json.loads(text))
