"""Seeded generators for planar graph families.

Planarity is guaranteed by construction; ids are 1..n.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional

from localcolor.errors import InputError
from localcolor.graph import Graph, relabel

FAMILIES = ("grid", "hexgrid", "triangulation", "subdivided", "outerplanar_fan", "maximal_outerplanar")


@dataclass(frozen=True)
class GenSpec:
    family: str
    n: int
    seed: int = 0
    rows: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")
        if not isinstance(self.n, int) or self.n < 2:
            raise InputError(f"n must be an integer >= 2, got {self.n!r}")


def generate(spec: GenSpec) -> Graph:
    builders = {
        "grid": _grid,
        "hexgrid": _hexgrid,
        "triangulation": _triangulation,
        "subdivided": _subdivided,
        "outerplanar_fan": _fan,
        "maximal_outerplanar": _maximal_outerplanar,
    }
    return builders[spec.family](spec)


def _side_lengths(n: int, rows: Optional[int]) -> tuple[int, int]:
    if rows is not None:
        if rows < 1 or n % rows:
            raise InputError(f"n={n} is not a multiple of rows={rows}")
        return rows, n // rows
    r = math.isqrt(n)
    while n % r:
        r -= 1
    return r, n // r


def grid_graph(rows: int, cols: int) -> Graph:
    def vid(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph.from_edges(edges, vertices=range(1, rows * cols + 1))


def _grid(spec: GenSpec) -> Graph:
    rows, cols = _side_lengths(spec.n, spec.rows)
    return grid_graph(rows, cols)


def _hexgrid(spec: GenSpec) -> Graph:
    # brick-wall drawing of the honeycomb: rungs alternate between columns
    rows, cols = _side_lengths(spec.n, spec.rows)

    def vid(r, c):
        return r * cols + c + 1

    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows and (r + c) % 2 == 0:
                edges.append((vid(r, c), vid(r + 1, c)))
    return Graph.from_edges(edges, vertices=range(1, rows * cols + 1))


def random_triangulation(n: int, rng: random.Random) -> Graph:
    """Start from a triangle and repeatedly split a uniformly chosen face."""
    if n < 3:
        raise InputError("a triangulation needs n >= 3")
    faces = [(1, 2, 3), (1, 2, 3)]  # inner and outer face of K3
    edges = [(1, 2), (2, 3), (1, 3)]
    for v in range(4, n + 1):
        i = rng.randrange(len(faces))
        a, b, c = faces[i]
        faces[i] = (a, b, v)
        faces.append((b, c, v))
        faces.append((a, c, v))
        edges += [(a, v), (b, v), (c, v)]
    return Graph.from_edges(edges, vertices=range(1, n + 1))


def _triangulation(spec: GenSpec) -> Graph:
    return random_triangulation(spec.n, random.Random(spec.seed))


def subdivide(g: Graph) -> Graph:
    """Replace every edge u-v by a path u-x-v through a fresh vertex x."""
    nxt = max(g.vertices, default=0) + 1
    edges = []
    for u, v in g.edges():
        edges += [(u, nxt), (nxt, v)]
        nxt += 1
    return Graph.from_edges(edges, vertices=g.vertices)


def _subdivided(spec: GenSpec) -> Graph:
    # a triangulation on b vertices subdivides to 4b - 6 vertices; pad up to n
    # by subdividing a few subdivided edges a second time
    n = spec.n
    rng = random.Random(spec.seed)
    b = (n + 6) // 4
    if b < 3:
        if n == 2:
            return Graph.from_edges([(1, 2)])
        # path graphs are the degenerate case
        return Graph.from_edges([(i, i + 1) for i in range(1, n)])
    base = random_triangulation(b, rng)
    g = subdivide(base)
    extra = n - g.n
    adj = {v: set(nb) for v, nb in g.adj.items()}
    nxt = g.n + 1
    middles = [v for v in g.vertices if v > b]
    for x in rng.sample(middles, extra):
        u = min(adj[x])
        adj[u].discard(x)
        adj[x].discard(u)
        adj[nxt] = {u, x}
        adj[u].add(nxt)
        adj[x].add(nxt)
        nxt += 1
    return Graph(adj)


def _fan(spec: GenSpec) -> Graph:
    n = spec.n
    edges = [(1, v) for v in range(2, n + 1)] + [(v, v + 1) for v in range(2, n)]
    return Graph.from_edges(edges, vertices=range(1, n + 1))


def _maximal_outerplanar(spec: GenSpec) -> Graph:
    """Glue triangles onto uniformly chosen outer edges."""
    n = spec.n
    if n == 2:
        return Graph.from_edges([(1, 2)])
    rng = random.Random(spec.seed)
    outer = [(1, 2), (2, 3), (1, 3)]
    edges = list(outer)
    for v in range(4, n + 1):
        i = rng.randrange(len(outer))
        a, b = outer[i]
        outer[i] = (a, v)
        outer.append((v, b))
        edges += [(a, v), (b, v)]
    return Graph.from_edges(edges, vertices=range(1, n + 1))


def shuffle_ids(g: Graph, seed: int) -> Graph:
    """Apply a seeded random permutation to the ids of ``g``."""
    ids = list(g.vertices)
    perm = ids[:]
    random.Random(seed).shuffle(perm)
    return relabel(g, dict(zip(ids, perm)))
