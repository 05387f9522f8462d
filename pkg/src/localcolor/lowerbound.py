"""Gadget families that force equal colors far apart, and the relabeling
experiment showing that fast algorithms cannot respect the forcing.

planar4: two chains of K5-minus-an-edge blocks; any proper 4-coloring gives
v_(k,j) the color of v_(0,j). outerplanar3: two chains of diamonds; any
proper 3-coloring gives v_k the color of v_0 and u_k the color of u_0.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional

from localcolor.engine import BROADCAST, VertexProgram, run
from localcolor.errors import InputError, RoundLimitExceeded
from localcolor.graph import Graph, ball, distance, is_proper, relabel

FAMILIES = ("planar4", "outerplanar3")


@dataclass(frozen=True)
class GadgetSpec:
    family: str
    k: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown gadget family {self.family!r}")
        if not isinstance(self.k, int) or self.k < 0:
            raise InputError("k must be a non-negative integer")

    @property
    def palette(self) -> int:
        return 4 if self.family == "planar4" else 3

    @property
    def size(self) -> int:
        return 8 * self.k + 2 if self.family == "planar4" else 6 * self.k + 2


def endpoint_names(spec: GadgetSpec) -> list[tuple]:
    """Pairs (start, end) of names whose colors are forced equal."""
    k = spec.k
    if spec.family == "planar4":
        return [(("v", 0, j), ("v", k, j)) for j in (1, 2)]
    return [(("v", 0), ("v", k)), (("u", 0), ("u", k))]


def build_gadget(spec: GadgetSpec) -> tuple[Graph, dict]:
    """Return the gadget graph and a map from construction names to ids."""
    names: dict[tuple, int] = {}

    def new(name):
        names[name] = len(names) + 1
        return names[name]

    edges = []
    if spec.family == "planar4":
        new(("v", 0, 1))
        new(("v", 0, 2))
        edges.append((1, 2))
        for i in range(1, spec.k + 1):
            for j in (1, 2):
                tri = [new((s, i, j)) for s in ("a", "b", "c")]
                v = new(("v", i, j))
                prev = names[("v", i - 1, j)]
                edges += [(tri[0], tri[1]), (tri[1], tri[2]), (tri[0], tri[2])]
                edges += [(x, v) for x in tri] + [(x, prev) for x in tri]
    else:
        new(("v", 0))
        new(("u", 0))
        edges.append((1, 2))
        for i in range(1, spec.k + 1):
            a, b, c, d, v, u = (new((s, i)) for s in ("a", "b", "c", "d", "v", "u"))
            pv, pu = names[("v", i - 1)], names[("u", i - 1)]
            edges += [(a, b), (c, d), (a, v), (b, v), (c, u), (d, u)]
            edges += [(a, pv), (b, pv), (c, pu), (d, pu)]
    return Graph.from_edges(edges, vertices=names.values()), names


# ---------------------------------------------------------------------------
# exact coloring oracle


def _search_order(g: Graph) -> list[int]:
    """Vertices in BFS order from the smallest id, components in id order."""
    order, seen = [], set()
    for s in g.vertices:
        if s in seen:
            continue
        seen.add(s)
        queue = [s]
        while queue:
            u = queue.pop(0)
            order.append(u)
            for w in sorted(g.adj[u]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return order


class ColoringEnumeration:
    """Iterates proper colorings with colors 1..palette by backtracking with
    forward checking. After iteration ``complete`` tells whether the search
    space was exhausted (False when the cap cut it short)."""

    def __init__(self, g: Graph, palette: int, cap: Optional[int] = None, fixed=None):
        self.g = g
        self.palette = palette
        self.cap = cap
        self.fixed = dict(fixed or {})
        self.complete = False
        self.produced = 0

    def __iter__(self) -> Iterator[dict]:
        g, P = self.g, self.palette
        order = _search_order(g)
        domains = {v: set(range(1, P + 1)) for v in order}
        for v, c in self.fixed.items():
            domains[v] = {c} & domains[v]
        colors: dict[int, int] = {}
        adj = g.adj

        def go(i):
            if i == len(order):
                yield dict(colors)
                return
            v = order[i]
            for c in sorted(domains[v]):
                pruned = []
                ok = True
                for u in adj[v]:
                    if u not in colors and c in domains[u]:
                        domains[u].discard(c)
                        pruned.append(u)
                        if not domains[u]:
                            ok = False
                if ok:
                    colors[v] = c
                    yield from go(i + 1)
                    del colors[v]
                for u in pruned:
                    domains[u].add(c)

        for col in go(0):
            self.produced += 1
            yield col
            if self.cap is not None and self.produced >= self.cap:
                return
        self.complete = True

    def count(self) -> int:
        return sum(1 for _ in self)

    def first(self) -> Optional[dict]:
        for col in self:
            return col
        self.complete = True
        return None

    def all_satisfy(self, predicate) -> Optional[bool]:
        """True/False when decided; None when the cap stopped the search."""
        for col in self:
            if not predicate(col):
                return False
        return True if self.complete else None


def exact_colorings(g: Graph, palette: int, cap: Optional[int] = None, fixed=None) -> ColoringEnumeration:
    return ColoringEnumeration(g, palette, cap, fixed)


@dataclass(frozen=True)
class ForcingResult:
    holds: bool
    colorable: bool
    counterexample: Optional[dict] = None

    def __bool__(self):
        return self.holds


def forcing_check_graph(g: Graph, palette: int, pairs) -> ForcingResult:
    """Do all proper colorings give each pair (x, y) equal colors?

    Decided by searching, for each pair, for a coloring where they differ:
    that is a coloring of ``g`` plus the edge x-y, with x's color fixed to 1
    by symmetry."""
    if exact_colorings(g, palette, fixed={min(g.vertices): 1}).first() is None:
        return ForcingResult(True, False)
    for x, y in pairs:
        if x == y:
            continue
        h = Graph.from_edges(g.edges() + [(x, y)], vertices=g.vertices)
        witness = exact_colorings(h, palette, fixed={x: 1}).first()
        if witness is not None:
            return ForcingResult(False, True, witness)
    return ForcingResult(True, True)


def forcing_check(spec: GadgetSpec) -> ForcingResult:
    g, names = build_gadget(spec)
    pairs = [(names[a], names[b]) for a, b in endpoint_names(spec)]
    return forcing_check_graph(g, spec.palette, pairs)


def distance_check(spec: GadgetSpec) -> bool:
    g, names = build_gadget(spec)
    return all(distance(g, names[a], names[b]) == 2 * spec.k for a, b in endpoint_names(spec))


def separates(g: Graph, cut: int, a: int, b: int) -> bool:
    """True iff every a-b path passes through ``cut``."""
    if cut in (a, b):
        return True
    h = Graph({v: g.adj[v] - {cut} for v in g.vertices if v != cut})
    return distance(h, a, b) is None


# ---------------------------------------------------------------------------
# relabeling experiment


def swap_labeling(spec: GadgetSpec, t: int) -> tuple[Graph, dict, dict]:
    """Construction ids (psi) and the swapped labeling psi'.

    psi' exchanges the ids of z_(i,1) and z_(i,2) for every vertex inside the
    radius-t balls around the two far endpoints."""
    if spec.family != "planar4":
        raise InputError("the swap construction is defined on the planar4 family")
    g, names = build_gadget(spec)
    k = spec.k
    region = ball(g, names[("v", k, 1)], t) | ball(g, names[("v", k, 2)], t)
    by_id = {i: nm for nm, i in names.items()}
    psi_prime = {}
    for nm, i in names.items():
        if i in region:
            role, lvl, j = nm
            psi_prime[i] = names[(role, lvl, 3 - j)]
        else:
            psi_prime[i] = i
    if sorted(psi_prime.values()) != sorted(names.values()):
        raise InputError("swap region is not symmetric")
    return g, names, psi_prime


def balls_disjoint(spec: GadgetSpec, t: int) -> bool:
    g, names = build_gadget(spec)
    k = spec.k
    if spec.family == "planar4":
        far = [("v", k, 1), ("v", k, 2)]
        near = [("v", 0, 1), ("v", 0, 2)]
    else:
        far, near = [("v", k), ("u", k)], [("v", 0), ("u", 0)]
    return all(not (ball(g, names[x], t) & ball(g, names[y], t)) for x in far for y in near)


@dataclass
class SwapVerdict:
    k: int
    t: int
    rounds_used: int
    balls_disjoint: bool
    proper_psi: bool
    proper_psi_prime: bool
    forcing_psi: bool
    forcing_psi_prime: bool
    locality_consistent: bool
    colors_psi: dict
    colors_psi_prime: dict

    @property
    def violation(self) -> bool:
        """At least one run is not a proper coloring honoring the forcing."""
        return not (
            self.proper_psi and self.forcing_psi and self.proper_psi_prime and self.forcing_psi_prime
        )


def swap_labeling_experiment(k: int, t: int, alg: VertexProgram, palette: int = 4) -> SwapVerdict:
    if not 0 <= t < k:
        raise InputError("need 0 <= t < k")
    spec = GadgetSpec("planar4", k)
    g, names, psi_prime = swap_labeling(spec, t)

    def execute(h):
        try:
            states, trace = run(h, alg, t)
        except RoundLimitExceeded:
            raise InputError(f"algorithm did not halt within t={t} rounds") from None
        return {v: alg.output(s) for v, s in states.items()}, trace.rounds_used

    out_psi, r1 = execute(g)
    out_prime_raw, r2 = execute(relabel(g, psi_prime))
    # color of the vertex named z under psi' is the output at id psi'(z)
    out_prime = {i: out_prime_raw[psi_prime[i]] for i in g.vertices}

    def forced(col):
        return all(col[names[a]] == col[names[b]] for a, b in endpoint_names(spec))

    v01, v02 = names[("v", 0, 1)], names[("v", 0, 2)]
    vk1, vk2 = names[("v", k, 1)], names[("v", k, 2)]
    consistent = (
        out_prime[v01] == out_psi[v01]
        and out_prime[v02] == out_psi[v02]
        and out_prime[vk1] == out_psi[vk2]
        and out_prime[vk2] == out_psi[vk1]
    )
    return SwapVerdict(
        k=k,
        t=t,
        rounds_used=max(r1, r2),
        balls_disjoint=balls_disjoint(spec, t),
        proper_psi=bool(is_proper(g, out_psi, require_total=True, palette=palette)),
        proper_psi_prime=bool(is_proper(g, out_prime, require_total=True, palette=palette)),
        forcing_psi=forced(out_psi),
        forcing_psi_prime=forced(out_prime),
        locality_consistent=consistent,
        colors_psi=out_psi,
        colors_psi_prime=out_prime,
    )


# ---------------------------------------------------------------------------
# t-round programs used as test subjects


class ViewProgram(VertexProgram):
    """Gathers for ``t`` rounds everything the vertex can learn (ids in the
    radius-t ball, edges touching the radius-(t-1) ball), then calls
    ``decide(own_id, ids, edges)``. Halts at round t."""

    def __init__(self, t: int):
        if t < 0:
            raise InputError("t must be non-negative")
        self.t = t

    def init(self, ctx):
        return {"id": ctx.id, "ids": frozenset([ctx.id]), "edges": frozenset(), "out": None}

    def step(self, rnd, st, inbox):
        if rnd > 0:
            ids, edges = set(st["ids"]), set(st["edges"])
            for u, (uids, uedges) in inbox.items():
                ids |= uids
                edges |= uedges
                edges.add((min(u, st["id"]), max(u, st["id"])))
            st["ids"], st["edges"] = frozenset(ids), frozenset(edges)
        if rnd >= self.t:
            st["out"] = self.decide(st["id"], st["ids"], st["edges"])
            return st, {}, True
        return st, {BROADCAST: (st["ids"], st["edges"])}, False

    def decide(self, me, ids, edges):
        raise NotImplementedError

    def output(self, st):
        return st["out"]


class BallGreedy(ViewProgram):
    """Greedy coloring of the known subgraph in id order, folded into the palette."""

    def __init__(self, t: int, palette: int = 4):
        super().__init__(t)
        self.palette = palette

    def decide(self, me, ids, edges):
        adj: dict[int, set] = {v: set() for v in ids}
        for a, b in edges:
            adj[a].add(b)
            adj[b].add(a)
        col: dict[int, int] = {}
        for v in sorted(ids):
            taken = {col[u] for u in adj[v] if u in col}
            c = 1
            while c in taken:
                c += 1
            col[v] = c
        return (col[me] - 1) % self.palette + 1


class IdRank(ViewProgram):
    """Color by the rank of the own id among the known ids."""

    def __init__(self, t: int, palette: int = 4):
        super().__init__(t)
        self.palette = palette

    def decide(self, me, ids, edges):
        return sorted(ids).index(me) % self.palette + 1


class DegreeParity(ViewProgram):
    """Mix the own id with the number of known edges."""

    def __init__(self, t: int, palette: int = 4):
        super().__init__(t)
        self.palette = palette

    def decide(self, me, ids, edges):
        return (me + len(edges)) % self.palette + 1


class GossipHash(VertexProgram):
    """Folds everything it hears into a digest; used to probe locality."""

    def init(self, ctx):
        seed = repr((ctx.id, ctx.degree, ctx.input)).encode()
        return hashlib.sha256(seed).hexdigest()

    def step(self, rnd, st, inbox):
        heard = repr(sorted(inbox.items())).encode()
        st = hashlib.sha256(st.encode() + heard).hexdigest()
        return st, {BROADCAST: st}, False


def named_colors(colors: Mapping[int, int], names: Mapping[tuple, int]) -> dict:
    return {nm: colors[i] for nm, i in names.items()}
