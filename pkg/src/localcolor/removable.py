"""Removable cycles and coloring extension along them.

A cycle C of H is removable when H[V(C)] is neither a complete graph nor an
odd cycle. If every vertex of such a cycle has degree at most D, any partial
proper D-coloring that leaves V(C) blank extends to V(C).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import AbstractSet, Callable, Iterator, Mapping, Optional

from localcolor.errors import BrooksException, InputError, LemmaViolation
from localcolor.graph import Cycle, Graph, distances, induced_subgraph, is_cycle_of, is_proper

Neighbors = Callable[[int], AbstractSet[int]]


@dataclass(frozen=True)
class RemovabilityVerdict:
    removable: bool
    reason: str  # even_or_chorded_ok | complete | odd_cycle_graph

    def __bool__(self):
        return self.removable


def classify_vertex_set(nb: Neighbors, members: AbstractSet[int]) -> RemovabilityVerdict:
    """Classify the subgraph induced on the vertex set of a cycle."""
    k = len(members)
    edges2 = sum(len(nb(u) & members) for u in members)
    if edges2 == k * (k - 1):
        return RemovabilityVerdict(False, "complete")
    if edges2 == 2 * k and k % 2 == 1:
        return RemovabilityVerdict(False, "odd_cycle_graph")
    return RemovabilityVerdict(True, "even_or_chorded_ok")


def is_removable(g: Graph, c: Cycle) -> RemovabilityVerdict:
    if not is_cycle_of(g, c):
        raise InputError(f"{c.sequence} is not a cycle of the graph")
    return classify_vertex_set(g.adj.__getitem__, c.key)


def cycle_degree(g: Graph, c: Cycle) -> int:
    return max(g.degree(v) for v in c.sequence)


def _cycles_of_length(nb: Neighbors, s: int, length: int, dist: Mapping[int, int]) -> Iterator[tuple]:
    """Simple cycles through ``s`` with exactly ``length`` vertices, using
    only vertices in ``dist``. Each cycle is produced once (second vertex
    smaller than the last)."""
    path = [s]
    on_path = {s}

    def extend(u):
        depth = len(path)
        if depth == length:
            if s in nb(u) and path[1] < path[-1]:
                yield tuple(path)
            return
        for w in sorted(nb(u)):
            if w in on_path or dist.get(w, length) > length - depth:
                continue
            path.append(w)
            on_path.add(w)
            yield from extend(w)
            path.pop()
            on_path.discard(w)

    yield from extend(s)


def _eligible_distances(nb: Neighbors, s: int, max_len: int, max_deg: int) -> dict[int, int]:
    """Hop distances from ``s`` inside the subgraph of vertices of degree at
    most ``max_deg``, cut at ``max_len // 2``."""
    if len(nb(s)) > max_deg:
        return {}
    limit = max_len // 2
    dist = {s: 0}
    frontier = [s]
    d = 0
    while frontier and d < limit:
        d += 1
        nxt = []
        for u in frontier:
            for w in nb(u):
                if w not in dist and len(nb(w)) <= max_deg:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def removable_cycles_through(
    nb: Neighbors, s: int, max_len: int, max_deg: int, shortest_only: bool = False
) -> list[Cycle]:
    """Removable cycles through ``s`` of length <= max_len whose vertices all
    have degree <= max_deg, sorted in canonical order. With
    ``shortest_only`` the search stops at the first length that has any."""
    dist = _eligible_distances(nb, s, max_len, max_deg)
    found: list[Cycle] = []
    for length in range(3, max_len + 1):
        for seq in _cycles_of_length(nb, s, length, dist):
            if classify_vertex_set(nb, frozenset(seq)).removable:
                found.append(Cycle(seq))
        if shortest_only and found:
            break
    found.sort(key=lambda c: c.sort_key)
    return found


def first_removable(nb: Neighbors, s: int, max_len: int, max_deg: int) -> Optional[Cycle]:
    """The qualifying cycle through ``s`` that comes first in canonical order."""
    found = removable_cycles_through(nb, s, max_len, max_deg, shortest_only=True)
    return found[0] if found else None


def enumerate_removable(g: Graph, max_len: int, max_deg: int, through: int, radius: int) -> list[Cycle]:
    """All qualifying cycles through ``through`` inside its radius ball."""
    if radius < max_len // 2 + 1:
        raise InputError(f"radius {radius} is too small for cycles of length {max_len}")
    ball_set = frozenset(distances(g, through, radius))
    adj = g.adj
    cache: dict[int, frozenset] = {}

    def nb(u):
        r = cache.get(u)
        if r is None:
            r = cache[u] = adj[u] & ball_set
        return r

    return removable_cycles_through(nb, through, max_len, max_deg)


# ---------------------------------------------------------------------------
# coloring


def _is_complete(h: Graph) -> bool:
    return h.m == h.n * (h.n - 1) // 2


def _is_connected(h: Graph) -> bool:
    if h.n == 0:
        return True
    return len(distances(h, h.vertices[0])) == h.n


def brooks_color(h: Graph, delta: int) -> dict[int, int]:
    """Proper coloring of ``h`` with colors 1..delta by exhaustive search.

    The exceptional cases of Brooks' theorem are rejected up front.
    """
    if not _is_connected(h):
        raise InputError("brooks_color needs a connected graph")
    if h.max_degree() > delta:
        raise InputError(f"max degree {h.max_degree()} exceeds delta={delta}")
    if _is_complete(h) and h.n == delta + 1:
        raise BrooksException(f"complete graph on {h.n} vertices cannot be {delta}-colored")
    if delta == 2 and h.n % 2 == 1 and h.m == h.n and h.max_degree() == 2:
        raise BrooksException(f"odd cycle on {h.n} vertices cannot be 2-colored")
    result = backtrack_color(h, delta)
    if result is None:
        raise LemmaViolation(f"no {delta}-coloring found for a non-exceptional graph")
    return result


def backtrack_color(
    h: Graph, palette: int, fixed: Optional[Mapping[int, int]] = None
) -> Optional[dict[int, int]]:
    """First proper coloring in (vertex id, color) lexicographic order, or None."""
    colors: dict[int, int] = dict(fixed or {})
    order = [v for v in h.vertices if v not in colors]
    adj = h.adj

    def go(i):
        if i == len(order):
            return True
        v = order[i]
        used = {colors[u] for u in adj[v] if u in colors}
        for c in range(1, palette + 1):
            if c not in used:
                colors[v] = c
                if go(i + 1):
                    return True
                del colors[v]
        return False

    return colors if go(0) else None


def extend_on_cycle(
    g: Graph, c: Cycle, partial: Mapping[int, Optional[int]], delta: int
) -> dict[int, Optional[int]]:
    """Extend a partial proper delta-coloring to the vertices of ``c``.

    Follows the constructive case split:
    (a) every COL(v) is contained in COL(S(v)): all COL(v) coincide, so color
        H[V(C)] with the remaining palette via Brooks;
    (b) otherwise pick the smallest v with some x in COL(v) \\ COL(S(v)),
        give S(v) the color x, greedily color the rest of the cycle in order
        and finish with v, which sees x twice.
    """
    verdict = is_removable(g, c)
    if not verdict:
        raise InputError(f"cycle {c.sequence} is not removable ({verdict.reason})")
    if cycle_degree(g, c) > delta:
        raise InputError(f"cycle degree {cycle_degree(g, c)} exceeds delta={delta}")
    members = c.key
    for v in members:
        if partial.get(v) is not None:
            raise InputError(f"cycle vertex {v} is already colored")
    check = is_proper(g, partial, palette=delta)
    if not check:
        raise InputError(f"partial coloring is not proper: {check.message}")

    colors = dict(partial)
    adj = g.adj
    seq = c.sequence
    k = len(seq)
    col = {v: {partial[u] for u in adj[v] if partial.get(u) is not None} for v in seq}
    succ = {seq[i]: seq[(i + 1) % k] for i in range(k)}

    pivots = [v for v in seq if not col[v] <= col[succ[v]]]
    if not pivots:
        used = col[seq[0]]
        palette = [x for x in range(1, delta + 1) if x not in used]
        h = induced_subgraph(g, members)
        local = brooks_color(h, len(palette))
        for v, x in local.items():
            colors[v] = palette[x - 1]
        return colors

    v = min(pivots)
    x = min(col[v] - col[succ[v]])
    i = seq.index(v)
    order = [seq[(i + j) % k] for j in range(1, k)] + [v]
    colors[order[0]] = x
    for u in order[1:]:
        taken = {colors[w] for w in adj[u] if colors.get(w) is not None}
        free = [y for y in range(1, delta + 1) if y not in taken]
        if not free:
            raise LemmaViolation(f"no free color for cycle vertex {u} in case (b)")
        colors[u] = free[0]
    return colors
