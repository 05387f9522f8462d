"""Undirected simple graphs with integer vertex ids, plus basic queries."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional

from localcolor.errors import InputError


class Graph:
    """Immutable undirected simple graph.

    ``adj`` maps each vertex id to the frozenset of its neighbours.
    """

    __slots__ = ("_adj", "_m", "_vertices")

    def __init__(self, adjacency: Mapping[int, Iterable[int]]):
        adj = {}
        for v, nbrs in adjacency.items():
            _check_id(v)
            adj[v] = frozenset(nbrs)
        m2 = 0
        for v, nbrs in adj.items():
            if v in nbrs:
                raise InputError(f"self-loop at vertex {v}")
            for u in nbrs:
                if u not in adj:
                    raise InputError(f"edge {v}-{u} names unknown vertex {u}")
                if v not in adj[u]:
                    raise InputError(f"adjacency not symmetric on edge {v}-{u}")
            m2 += len(nbrs)
        self._adj = adj
        self._m = m2 // 2
        self._vertices = tuple(sorted(adj))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], vertices: Iterable[int] = ()) -> "Graph":
        adj: dict[int, set[int]] = {v: set() for v in vertices}
        for u, v in edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            adj.setdefault(u, set()).add(v)
            adj.setdefault(v, set()).add(u)
        return cls(adj)

    @property
    def adj(self) -> Mapping[int, frozenset]:
        return self._adj

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    @property
    def vertices(self) -> tuple[int, ...]:
        """Vertex ids in increasing order."""
        return self._vertices

    def neighbors(self, v: int) -> frozenset:
        try:
            return self._adj[v]
        except KeyError:
            raise InputError(f"unknown vertex {v}") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj.values()), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj.get(u, ())

    def edges(self) -> list[tuple[int, int]]:
        """Sorted list of edges as (u, v) with u < v."""
        return sorted((u, v) for u, nbrs in self._adj.items() for v in nbrs if u < v)

    def __contains__(self, v) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __iter__(self) -> Iterator[int]:
        return iter(self._vertices)

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __hash__(self):
        return hash((self._vertices, tuple(self.edges())))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def _check_id(v) -> None:
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise InputError(f"vertex ids must be positive integers, got {v!r}")


def canonical_sequence(seq: Iterable[int]) -> tuple[int, ...]:
    """Least rotation/reflection: start at the smallest id, then take the
    direction whose second element is smaller."""
    s = list(seq)
    i = s.index(min(s))
    s = s[i:] + s[:i]
    if len(s) > 2 and s[-1] < s[1]:
        s = [s[0]] + s[:0:-1]
    return tuple(s)


@dataclass(frozen=True)
class Cycle:
    """A simple cycle stored in canonical rotation/reflection."""

    sequence: tuple[int, ...]

    def __init__(self, sequence: Iterable[int]):
        seq = tuple(sequence)
        if len(seq) < 3:
            raise InputError("a cycle needs at least 3 vertices")
        if len(set(seq)) != len(seq):
            raise InputError(f"cycle repeats a vertex: {seq}")
        object.__setattr__(self, "sequence", canonical_sequence(seq))

    @property
    def key(self) -> frozenset:
        return frozenset(self.sequence)

    @property
    def sort_key(self) -> tuple:
        """Canonical order: shorter first, then sorted id tuple, then sequence."""
        return (len(self.sequence), tuple(sorted(self.sequence)), self.sequence)

    def __len__(self) -> int:
        return len(self.sequence)

    def edges(self) -> list[tuple[int, int]]:
        s = self.sequence
        return [tuple(sorted((s[i], s[(i + 1) % len(s)]))) for i in range(len(s))]

    def successor(self, v: int) -> int:
        s = self.sequence
        return s[(s.index(v) + 1) % len(s)]

    def __lt__(self, other: "Cycle") -> bool:
        return self.sort_key < other.sort_key


def is_cycle_of(g: Graph, c: Cycle) -> bool:
    return all(v in g for v in c.sequence) and all(g.has_edge(u, v) for u, v in c.edges())


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    s = frozenset(s)
    for v in s:
        if v not in g:
            raise InputError(f"unknown vertex {v}")
    return Graph({v: g.adj[v] & s for v in s})


def distances(g: Graph, source: int, limit: Optional[int] = None) -> dict[int, int]:
    """BFS hop distances from ``source``, optionally cut at ``limit``."""
    if source not in g:
        raise InputError(f"unknown vertex {source}")
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        d = dist[u]
        if limit is not None and d >= limit:
            continue
        for w in g.adj[u]:
            if w not in dist:
                dist[w] = d + 1
                queue.append(w)
    return dist


def ball(g: Graph, v: int, r: int) -> set[int]:
    if r < 0:
        raise InputError("radius must be non-negative")
    return set(distances(g, v, r))


def distance(g: Graph, u: int, v: int) -> Optional[int]:
    return distances(g, u).get(v)


@dataclass(frozen=True)
class ProperVerdict:
    ok: bool
    witness: Optional[tuple] = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_proper(
    g: Graph,
    colors: Mapping[int, Optional[int]],
    require_total: bool = False,
    palette: Optional[int] = None,
) -> ProperVerdict:
    """Check a (partial) coloring; ``None`` marks an uncolored vertex."""
    for v in g.vertices:
        c = colors.get(v)
        if c is None:
            if require_total:
                return ProperVerdict(False, (v,), f"vertex {v} is uncolored")
            continue
        if palette is not None and not 1 <= c <= palette:
            return ProperVerdict(False, (v,), f"vertex {v} has color {c} outside 1..{palette}")
    for u, v in g.edges():
        cu = colors.get(u)
        if cu is not None and cu == colors.get(v):
            return ProperVerdict(False, (u, v), f"edge {u}-{v} is monochromatic (color {cu})")
    return ProperVerdict(True)


def shortest_cycle_through(g: Graph, v: int, max_len: int) -> Optional[Cycle]:
    """A shortest simple cycle through ``v`` of length at most ``max_len``.

    BFS from ``v`` tags every vertex with the neighbour of ``v`` it descends
    from; an edge joining two different branches closes a cycle through ``v``.
    """
    if max_len < 3:
        raise InputError("max_len must be at least 3")
    if v not in g:
        raise InputError(f"unknown vertex {v}")
    dist = {v: 0}
    parent = {v: None}
    branch = {v: None}
    queue = deque()
    for w in sorted(g.adj[v]):
        dist[w], parent[w], branch[w] = 1, v, w
        queue.append(w)
    best = None
    while queue:
        x = queue.popleft()
        if best is not None and 2 * dist[x] + 1 > best[0]:
            break
        for y in sorted(g.adj[x]):
            if y == v or y == parent[x]:
                continue
            if y in dist:
                if branch[y] != branch[x]:
                    length = dist[x] + dist[y] + 1
                    if length <= max_len and (best is None or length < best[0]):
                        best = (length, x, y)
            elif dist[x] + 1 <= max_len // 2:
                dist[y], parent[y], branch[y] = dist[x] + 1, x, branch[x]
                queue.append(y)
    if best is None:
        return None
    _, x, y = best

    def path_to_root(z):
        out = []
        while z is not None:
            out.append(z)
            z = parent[z]
        return out

    px = path_to_root(x)
    py = path_to_root(y)
    return Cycle(list(reversed(px)) + py[:-1])


def girth_at_least(g: Graph, bound: int) -> Optional[Cycle]:
    """Return a cycle shorter than ``bound`` if one exists, else None."""
    if bound <= 3:
        return None
    for v in g.vertices:
        c = shortest_cycle_through(g, v, bound - 1)
        if c is not None:
            return c
    return None


def check_edge_bound(g: Graph, girth_lower: int) -> bool:
    """True iff |E| <= girth/(girth-2) * |V|, after confirming the girth."""
    if girth_lower < 3:
        raise InputError("girth_lower must be at least 3")
    short = girth_at_least(g, girth_lower)
    if short is not None:
        raise InputError(
            f"graph has a cycle of length {len(short)} < {girth_lower}: {short.sequence}"
        )
    return Fraction(g.m) <= Fraction(girth_lower, girth_lower - 2) * g.n


def relabel(g: Graph, mapping: Mapping[int, int]) -> Graph:
    """Rename vertices through an injective mapping."""
    if len(set(mapping[v] for v in g.vertices)) != g.n:
        raise InputError("relabeling is not injective")
    return Graph({mapping[v]: [mapping[u] for u in nbrs] for v, nbrs in g.adj.items()})


def local_view(g: Graph, v: int, r: int, labels: Optional[Mapping[int, object]] = None):
    """Everything a vertex can learn in ``r`` rounds when it starts out
    knowing only its own id, degree and label.

    That is: id, degree and label of every vertex within distance ``r``, and
    every edge with an endpoint within distance ``r - 1``.
    """
    labels = labels or {}
    dist = distances(g, v, r)
    verts = frozenset((u, g.degree(u), labels.get(u)) for u in dist)
    edges = frozenset(
        (min(a, b), max(a, b)) for a, d in dist.items() if d <= r - 1 for b in g.adj[a]
    )
    return verts, edges
