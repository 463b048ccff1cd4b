"""Vertex cover on tripartite graphs: half-integral LP plus part-dropping rounding.

The LP optimum is obtained combinatorially from a minimum vertex cover of the
bipartite double cover (left and right copy of every vertex), which König's
theorem gives from a maximum matching.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Hashable, Iterable

from .errors import InvariantError, OracleLimitError, StripFoldError

ORACLE_MAX_VERTICES = 24
HALF = Fraction(1, 2)


class ContractError(StripFoldError):
    exit_code = 4


@dataclass(frozen=True)
class TripartiteGraph:
    parts: dict[Hashable, int]
    edges: frozenset[tuple[Hashable, Hashable]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a not in self.parts or b not in self.parts:
                raise ValueError(f"edge ({a}, {b}) has an unknown endpoint")
            if self.parts[a] == self.parts[b]:
                raise ValueError(f"edge ({a}, {b}) lies inside part {self.parts[a]}")

    @classmethod
    def build(cls, parts: dict, edges: Iterable) -> TripartiteGraph:
        norm = set()
        for a, b in edges:
            if a == b:
                raise ValueError("self-loop")
            norm.add((a, b) if _key(a) <= _key(b) else (b, a))
        return cls(dict(parts), frozenset(norm))

    @property
    def vertices(self) -> list:
        return sorted(self.parts, key=_key)

    def to_json(self) -> dict:
        return {
            "vertices": [[v, self.parts[v]] for v in self.vertices],
            "edges": sorted([list(e) for e in self.edges], key=lambda e: (_key(e[0]), _key(e[1]))),
        }

    @classmethod
    def from_json(cls, doc: dict) -> TripartiteGraph:
        return cls.build({v: p for v, p in doc["vertices"]}, [tuple(e) for e in doc["edges"]])


def _key(v):
    return (type(v).__name__, v)


def is_vertex_cover(g: TripartiteGraph, cover) -> bool:
    c = set(cover)
    return all(a in c or b in c for a, b in g.edges)


# -- matching ---------------------------------------------------------------


def hopcroft_karp(left: list, adj: dict) -> dict:
    """Maximum matching of a bipartite graph; returns a map in both directions."""
    INF = float("inf")
    match_l: dict = {u: None for u in left}
    match_r: dict = {}
    dist: dict = {}

    def bfs() -> bool:
        queue = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0
                queue.append(u)
            else:
                dist[u] = INF
        found = False
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                w = match_r.get(v)
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return found

    def dfs(u) -> bool:
        for v in adj[u]:
            w = match_r.get(v)
            if w is None or (dist[w] == dist[u] + 1 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if match_l[u] is None:
                dfs(u)
    out = {u: v for u, v in match_l.items() if v is not None}
    out.update(match_r)
    return out


def konig_cover(left: list, adj: dict, matching: dict) -> set:
    """Minimum vertex cover of a bipartite graph from a maximum matching."""
    left_set = set(left)
    reached = set()
    queue = deque(u for u in left if u not in matching)
    reached.update(queue)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v in reached or matching.get(u) == v:
                continue
            reached.add(v)
            w = matching.get(v)
            if w is not None and w not in reached:
                reached.add(w)
                queue.append(w)
    return {u for u in left_set if u not in reached} | {v for v in reached if v not in left_set}


# -- LP and rounding ----------------------------------------------------------


def lp_half_integral(g: TripartiteGraph) -> dict:
    """Optimal half-integral solution of the vertex-cover LP.

    Components of the 1/2-valued part that are bipartite with equal sides are
    rounded to one side; the objective is unchanged, so the result is still
    optimal but integral wherever that is free.
    """
    verts = g.vertices
    left = [("L", v) for v in verts]
    adj = {("L", v): [] for v in verts}
    for a, b in sorted(g.edges, key=lambda e: (_key(e[0]), _key(e[1]))):
        adj[("L", a)].append(("R", b))
        adj[("L", b)].append(("R", a))
    matching = hopcroft_karp(left, adj)
    cover = konig_cover(left, adj, matching)
    sol = {v: Fraction(int(("L", v) in cover) + int(("R", v) in cover), 2) for v in verts}
    _prefer_integral(g, sol)
    return sol


def _prefer_integral(g: TripartiteGraph, sol: dict) -> None:
    halves = {v for v, x in sol.items() if x == HALF}
    adj: dict = {v: [] for v in halves}
    for a, b in g.edges:
        if a in halves and b in halves:
            adj[a].append(b)
            adj[b].append(a)
    seen = set()
    for start in sorted(halves, key=_key):
        if start in seen:
            continue
        color = {start: 0}
        queue = deque([start])
        bipartite = True
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in color:
                    color[w] = 1 - color[u]
                    queue.append(w)
                elif color[w] == color[u]:
                    bipartite = False
        seen.update(color)
        sides = [[v for v in color if color[v] == c] for c in (0, 1)]
        if bipartite and len(sides[0]) == len(sides[1]):
            for v in sides[0]:
                sol[v] = Fraction(1)
            for v in sides[1]:
                sol[v] = Fraction(0)


def lp_value(sol: dict) -> Fraction:
    return sum(sol.values(), Fraction(0))


def hochbaum_round(sol: dict, g: TripartiteGraph) -> set:
    """Keep value-1 vertices and the 1/2-vertices outside the heaviest part.

    Dropping one part never uncovers an edge between two 1/2-vertices because
    no edge lies inside a part; the kept 1/2-mass is at most 2/3 of the total.
    """
    for v in g.parts:
        if sol.get(v) not in (0, HALF, 1):
            raise ContractError(f"value {sol.get(v)} at {v} is not half-integral")
    for a, b in g.edges:
        if sol[a] + sol[b] < 1:
            raise ContractError(f"edge ({a}, {b}) violates the LP constraint")
    ones = {v for v in g.parts if sol[v] == 1}
    halves = [v for v in g.vertices if sol[v] == HALF]
    counts = [0, 0, 0]
    for v in halves:
        counts[g.parts[v]] += 1
    drop = max(range(3), key=lambda p: (counts[p], -p))
    cover = ones | {v for v in halves if g.parts[v] != drop}
    if not is_vertex_cover(g, cover):
        raise InvariantError("rounded solution is not a vertex cover")
    return cover


def approx_vertex_cover(g: TripartiteGraph) -> set:
    return hochbaum_round(lp_half_integral(g), g)


def brute_force_vc(g: TripartiteGraph) -> tuple[int, set]:
    verts = g.vertices
    if len(verts) > ORACLE_MAX_VERTICES:
        raise OracleLimitError(f"{len(verts)} vertices exceeds oracle limit of {ORACLE_MAX_VERTICES}")
    idx = {v: i for i, v in enumerate(verts)}
    edge_masks = [(1 << idx[a]) | (1 << idx[b]) for a, b in g.edges]
    for k in range(len(verts) + 1):
        for combo in combinations(range(len(verts)), k):
            m = 0
            for i in combo:
                m |= 1 << i
            if all(m & em for em in edge_masks):
                return k, {verts[i] for i in combo}
    raise InvariantError("no vertex cover found")
