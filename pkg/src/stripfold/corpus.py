"""Seeded random shapes: genus-0 polycubes and connected open grid surfaces."""

from __future__ import annotations

import random
from typing import Iterator

from .errors import InputError
from .surface import FACE_DIRS, GridSurface, Vec, add, extract_surface, genus

MAX_CUBES = 20


def _grow_polycube(rng: random.Random, n: int) -> frozenset[Vec]:
    cells = {(0, 0, 0)}
    while len(cells) < n:
        base = rng.choice(sorted(cells))
        cells.add(add(base, rng.choice(FACE_DIRS)))
    return frozenset(cells)


def random_polycube(rng: random.Random, max_cubes: int, min_cubes: int = 1) -> tuple[frozenset[Vec], GridSurface]:
    """Rejection-sample a polycube whose surface is a manifold sphere."""
    if not 1 <= min_cubes <= max_cubes <= MAX_CUBES:
        raise InputError(f"cube counts must satisfy 1 <= min <= max <= {MAX_CUBES}")
    while True:
        vox = _grow_polycube(rng, rng.randint(min_cubes, max_cubes))
        try:
            surf = extract_surface(vox)
        except InputError:
            continue  # edge- or vertex-touching configurations
        if genus(surf) == 0:
            return vox, surf


def polycube_corpus(seed: int, count: int, max_cubes: int = 12, max_bands: int | None = None) -> Iterator[tuple[frozenset[Vec], GridSurface]]:
    from .bands import enumerate_bands

    rng = random.Random(seed)
    made = 0
    while made < count:
        vox, surf = random_polycube(rng, max_cubes)
        if max_bands is not None and len(enumerate_bands(surf)) > max_bands:
            continue
        made += 1
        yield vox, surf


def random_open_surface(rng: random.Random, max_cubes: int = 8, max_squares: int = 30) -> GridSurface:
    """A dual-connected patch cut from a random polycube surface."""
    _, closed = random_polycube(rng, max_cubes)
    squares = closed.squares
    target = rng.randint(1, min(max_squares, len(squares) - 1))
    start = rng.choice(squares)
    patch = {start}
    frontier = [start]
    while len(patch) < target:
        s = rng.choice(frontier)
        options = [t for t in closed.neighbors(s) if t not in patch]
        if not options:
            frontier.remove(s)
            continue
        t = rng.choice(sorted(options))
        patch.add(t)
        frontier.append(t)
    return GridSurface.from_squares(patch, closed=False)


def open_surface_corpus(seed: int, count: int, max_squares: int = 30) -> Iterator[GridSurface]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_open_surface(rng, max_squares=max_squares)
