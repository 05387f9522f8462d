"""Short-cycle structure of planar graphs without short removable cycles.

``charge_procedure`` removes edges to destroy every cycle of length at most
5 and pays for each removal by charging the vertices involved: 1/5 each for
a 5-cycle, 3/4 each for a K4 (three edges), 1/3 each for a triangle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Optional

from localcolor.errors import InputError, LemmaViolation
from localcolor.graph import Cycle, Graph, girth_at_least
from localcolor.removable import first_removable


def cycles_of_length(g: Graph, length: int) -> list[Cycle]:
    """All simple cycles with ``length`` vertices, in canonical order."""
    adj = g.adj
    out = []
    for s in g.vertices:
        path = [s]
        used = {s}

        def go():
            u = path[-1]
            if len(path) == length:
                if s in adj[u] and path[1] < path[-1]:
                    out.append(Cycle(path))
                return
            for w in sorted(adj[u]):
                if w > s and w not in used:
                    path.append(w)
                    used.add(w)
                    go()
                    path.pop()
                    used.discard(w)

        go()
    out.sort(key=lambda c: c.sort_key)
    return out


def triangles(g: Graph) -> list[tuple[int, int, int]]:
    adj = g.adj
    return sorted(
        (a, b, c) for a in g.vertices for b in adj[a] if b > a for c in adj[a] & adj[b] if c > b
    )


def four_cliques(g: Graph) -> list[tuple[int, int, int, int]]:
    adj = g.adj
    out = []
    for a, b, c in triangles(g):
        for d in adj[a] & adj[b] & adj[c]:
            if d > c:
                out.append((a, b, c, d))
    return sorted(out)


def k4_break_edges(vertices: Iterable[int], g: Optional[Graph] = None) -> list[tuple[int, int]]:
    """Three edges whose removal leaves K4 as the path (z, x, w, y)."""
    vs = sorted(vertices)
    if len(vs) != 4 or len(set(vs)) != 4:
        raise InputError("a K4 needs exactly 4 distinct vertices")
    if g is not None and not all(g.has_edge(a, b) for a, b in combinations(vs, 2)):
        raise InputError(f"{vs} is not a clique")
    x, y, z, w = vs
    return [(x, y), (y, z), (z, w)]


@dataclass
class ChargeLedger:
    charges: dict
    removed: list = field(default_factory=list)
    events: list = field(default_factory=list)

    def total(self) -> Fraction:
        return sum(self.charges.values(), Fraction(0))

    def to_json(self) -> dict:
        return {
            "charges": {str(v): str(c) for v, c in sorted(self.charges.items())},
            "removed": [list(e) for e in self.removed],
            "events": [
                {"kind": k, "vertices": list(vs), "removed": [list(e) for e in es]}
                for k, vs, es in self.events
            ],
        }


@dataclass
class ChargeCertificate:
    vertices: int
    original_edges: int
    residual_edges: int
    removed: int
    residual_girth_ok: bool  # no cycle of length <= 6 left
    residual_bound: Fraction  # 7/5 |V|
    certified_bound: Fraction  # 7/5 |V| + 3/2 |V|

    @property
    def holds(self) -> bool:
        return (
            self.residual_girth_ok
            and self.residual_edges <= self.residual_bound
            and self.removed <= Fraction(3, 2) * self.vertices
            and self.original_edges <= self.certified_bound
        )


def check_charge_precondition(g: Graph) -> None:
    if g.max_degree() > 6:
        raise InputError(f"max degree {g.max_degree()} exceeds 6")
    nb = g.adj.__getitem__
    for v in g.vertices:
        c = first_removable(nb, v, 10, max(g.max_degree(), 2))
        if c is not None:
            raise InputError(f"removable cycle {c.sequence} of length {len(c)}")


def charge_procedure(g: Graph, check_precondition: bool = True):
    """Run the removal procedure; return ``(residual, ledger, certificate)``."""
    if check_precondition:
        check_charge_precondition(g)
    adj = {v: set(nb) for v, nb in g.adj.items()}
    ledger = ChargeLedger({v: Fraction(0) for v in g.vertices})

    def present(edges):
        return all(b in adj[a] for a, b in edges)

    def remove(edges, members, share, kind):
        for a, b in edges:
            adj[a].discard(b)
            adj[b].discard(a)
            ledger.removed.append((a, b))
        for v in members:
            ledger.charges[v] += share
        ledger.events.append((kind, tuple(sorted(members)), list(edges)))
        if ledger.total() != len(ledger.removed):
            raise LemmaViolation("charge total differs from the number of removed edges")

    for c in cycles_of_length(g, 5):
        if present(c.edges()):
            remove([min(c.edges())], c.sequence, Fraction(1, 5), "five_cycle")
    for k in four_cliques(g):
        if present(combinations(k, 2)):
            remove(k4_break_edges(k), k, Fraction(3, 4), "four_clique")
    for t in triangles(Graph(adj)):
        if present(combinations(t, 2)):
            remove([(t[0], t[1])], t, Fraction(1, 3), "triangle")

    residual = Graph(adj)
    short = girth_at_least(residual, 6)
    if short is not None:
        raise LemmaViolation(f"cycle {short.sequence} of length {len(short)} survived")
    worst = max(ledger.charges.values(), default=Fraction(0))
    if worst > Fraction(3, 2):
        raise LemmaViolation(f"a vertex was charged {worst} > 3/2")
    n = g.n
    cert = ChargeCertificate(
        vertices=n,
        original_edges=g.m,
        residual_edges=residual.m,
        removed=len(ledger.removed),
        residual_girth_ok=girth_at_least(residual, 7) is None,
        residual_bound=Fraction(7, 5) * n,
        certified_bound=Fraction(7, 5) * n + Fraction(3, 2) * n,
    )
    return residual, ledger, cert


@dataclass
class DisjointnessReport:
    five_cycles: int
    four_cycles: int
    triangles: int
    cliques: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def disjointness_audit(g: Graph) -> DisjointnessReport:
    """Check the edge-disjointness facts about short cycles and cliques."""
    c5 = cycles_of_length(g, 5)
    c4 = cycles_of_length(g, 4)
    tri = triangles(g)
    k4 = four_cliques(g)
    e5 = [(c, set(c.edges())) for c in c5]
    short = [set(c.edges()) for c in c4] + [set(combinations(t, 2)) for t in tri]
    kedges = [(k, set(combinations(k, 2))) for k in k4]
    bad = []
    for i, (c, ec) in enumerate(e5):
        for d, ed in e5[i + 1 :]:
            if ec & ed:
                bad.append(f"5-cycles {c.sequence} and {d.sequence} share an edge")
        for es in short:
            if ec & es:
                bad.append(f"5-cycle {c.sequence} shares an edge with a shorter cycle")
        for k, ek in kedges:
            if ec & ek:
                bad.append(f"5-cycle {c.sequence} shares an edge with K4 {k}")
    for i, (k, ek) in enumerate(kedges):
        for k2, ek2 in kedges[i + 1 :]:
            if ek & ek2:
                bad.append(f"K4s {k} and {k2} share an edge")
        for t in tri:
            if not set(t) <= set(k) and ek & set(combinations(t, 2)):
                bad.append(f"triangle {t} shares an edge with K4 {k}")
    inside = {frozenset(k) for k in k4}
    for c in c4:
        if not any(c.key <= s for s in inside):
            bad.append(f"4-cycle {c.sequence} lies outside every K4")
    return DisjointnessReport(len(c5), len(c4), len(tri), len(k4), bad)
