"""Level/phase partition of the vertices.

In iteration i every active vertex first looks for a removable cycle of
bounded length and degree in the graph of active vertices around it; if it
finds one it is labeled (i, 1) and remembers the cycle's vertex set as its
key. Afterwards every still-active vertex whose active degree is below the
threshold is labeled (i, 2) with key {own id}.

Round schedule (R = collect_radius), with s_i = 1 + (i - 1)(R + 1):
  round 0           everybody announces its id
  s_i               active vertices decide step 2 of iteration i - 1,
                    survivors start flooding (id, neighbours) records
  s_i + 1 .. s_i+R  records travel one hop per round among active vertices
  s_i + R           step 1 decision, survivors ping their neighbours
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from localcolor.engine import BROADCAST, VertexProgram, run
from localcolor.errors import LemmaViolation
from localcolor.graph import Cycle, Graph
from localcolor.presets import PartitionParams
from localcolor.removable import classify_vertex_set, first_removable


@dataclass(frozen=True)
class PartitionOutput:
    level: int
    phase: int
    key: frozenset
    cycle: Optional[tuple] = None

    @property
    def label(self) -> tuple[int, int]:
        return (self.level, self.phase)


@dataclass
class _PState:
    id: int
    n: int
    adj: frozenset = frozenset()
    level: Optional[int] = None
    phase: Optional[int] = None
    key: Optional[frozenset] = None
    cycle: Optional[tuple] = None
    known: dict = field(default_factory=dict)
    pings: int = 0
    next_wake: Optional[int] = None


class PartitionProgram(VertexProgram):
    event_driven = True

    def __init__(self, params: PartitionParams, n: int):
        self.p = params
        self.R = params.collect_radius
        self.iterations = params.iterations(n)
        self.end = 1 + self.iterations * (self.R + 1)

    def start(self, i: int) -> int:
        return 1 + (i - 1) * (self.R + 1)

    def init(self, ctx):
        return _PState(ctx.id, ctx.n)

    def step(self, rnd, st, inbox):
        if rnd == 0:
            st.next_wake = 1
            return st, {BROADCAST: ("hello",)}, False
        if rnd == 1:
            st.adj = frozenset(inbox)
        if st.level is not None:
            st.next_wake = self.end
            return st, {}, rnd >= self.end

        offset = (rnd - 1) % (self.R + 1)
        i = (rnd - 1) // (self.R + 1) + 1
        out = {}
        if offset == 0:
            if i > 1:
                # step 2 of the previous iteration
                st.pings = sum(1 for m in inbox.values() if m[0] == "alive")
                if st.pings < self.p.deg_threshold:
                    st.level, st.phase, st.key = i - 1, 2, frozenset([st.id])
                    st.next_wake = self.end
                    return st, {}, rnd >= self.end
            if rnd >= self.end:
                raise LemmaViolation(
                    f"vertex {st.id} is still active after {self.iterations} iterations"
                )
            rec = (st.id, st.adj)
            st.known = {st.id: st.adj}
            out = {BROADCAST: ("rec", (rec,))}
        else:
            fresh = []
            known = st.known
            for m in inbox.values():
                if m[0] != "rec":
                    continue
                for rec in m[1]:
                    if rec[0] not in known:
                        known[rec[0]] = rec[1]
                        fresh.append(rec)
            if offset < self.R:
                if fresh:
                    out = {BROADCAST: ("rec", tuple(fresh))}
            else:
                cyc = self._choose(st)
                st.known = {}
                if cyc is not None:
                    st.level, st.phase, st.key, st.cycle = i, 1, cyc.key, cyc.sequence
                    st.next_wake = self.end
                    return st, {}, False
                out = {BROADCAST: ("alive",)}
        st.next_wake = rnd - offset + self.R if offset < self.R else rnd + 1
        return st, out, False

    def _choose(self, st) -> Optional[Cycle]:
        known = st.known
        ids = known.keys()
        cache: dict[int, frozenset] = {}

        def nb(u):
            r = cache.get(u)
            if r is None:
                r = cache[u] = frozenset(w for w in known[u] if w in ids)
            return r

        return first_removable(nb, st.id, self.p.cycle_len_max, self.p.deg_threshold)

    def wake_round(self, st):
        return st.next_wake

    def output(self, st) -> PartitionOutput:
        return PartitionOutput(st.level, st.phase, st.key, st.cycle)


def partition_program(params: PartitionParams, n: int) -> PartitionProgram:
    return PartitionProgram(params, n)


def run_partition(g: Graph, params: PartitionParams, *, strict: bool = False, measure_bits: bool = True):
    """Run the distributed partition; return ``({v: PartitionOutput}, trace)``."""
    prog = PartitionProgram(params, g.n)
    if g.n == 0:
        states, trace = run(g, prog, 0)
        return {}, trace
    states, trace = run(g, prog, prog.end, strict=strict, measure_bits=measure_bits)
    return {v: prog.output(s) for v, s in states.items()}, trace


def partition_reference(g: Graph, params: PartitionParams) -> dict[int, PartitionOutput]:
    """Sequential evaluation of the same rule on the whole graph."""
    active = set(g.vertices)
    out: dict[int, PartitionOutput] = {}
    D = params.deg_threshold
    for i in range(1, params.iterations(max(g.n, 1)) + 1):
        if not active:
            break
        cache: dict[int, frozenset] = {}

        def nb(u):
            r = cache.get(u)
            if r is None:
                r = cache[u] = g.adj[u] & active
            return r

        chosen = {}
        for v in sorted(active):
            c = first_removable(nb, v, params.cycle_len_max, D)
            if c is not None:
                chosen[v] = c
        for v, c in chosen.items():
            out[v] = PartitionOutput(i, 1, c.key, c.sequence)
        active -= chosen.keys()
        low = [v for v in active if len(g.adj[v] & active) < D]
        for v in low:
            out[v] = PartitionOutput(i, 2, frozenset([v]))
        active -= set(low)
    if active:
        raise LemmaViolation(f"{len(active)} vertices still active after the iteration budget")
    return out


def step1_fixpoint(g: Graph, cycle_len_max: int, deg_threshold: int) -> Graph:
    """Repeat step 1 alone until nothing changes; return the residual graph."""
    active = set(g.vertices)
    while True:
        cache: dict[int, frozenset] = {}

        def nb(u):
            r = cache.get(u)
            if r is None:
                r = cache[u] = g.adj[u] & active
            return r

        hit = {v for v in active if first_removable(nb, v, cycle_len_max, deg_threshold)}
        if not hit:
            break
        active -= hit
    return Graph({v: g.adj[v] & active for v in active})


def shrinkage_from_labels(labels: Mapping[int, PartitionOutput]) -> list[tuple[int, int]]:
    """(|A_i|, |B_i|) per iteration: A_i is active at the start of iteration
    i, B_i after it."""
    if not labels:
        return []
    top = max(o.level for o in labels.values())
    counts = [0] * (top + 2)
    for o in labels.values():
        counts[o.level] += 1
    rows = []
    remaining = len(labels)
    for i in range(1, top + 1):
        rows.append((remaining, remaining - counts[i]))
        remaining -= counts[i]
    return rows


def shrinkage_audit(g: Graph, params: PartitionParams) -> list[tuple[int, int]]:
    labels, _ = run_partition(g, params, measure_bits=False)
    return shrinkage_from_labels(labels)


def audit_keys(g: Graph, labels: Mapping[int, PartitionOutput], params: PartitionParams) -> list[str]:
    """Offline re-check of every phase-1 key; returns a list of problems."""
    problems = []
    for v, o in labels.items():
        if o.phase == 2:
            if o.key != frozenset([v]):
                problems.append(f"{v}: phase-2 key is not the singleton")
            continue
        seq = o.cycle
        if seq is None or frozenset(seq) != o.key or v not in o.key:
            problems.append(f"{v}: key does not match its cycle")
            continue
        alive = {u for u, p in labels.items() if p.level >= o.level}
        if not all(g.has_edge(seq[j], seq[(j + 1) % len(seq)]) for j in range(len(seq))):
            problems.append(f"{v}: key is not a cycle")
        if len(seq) > params.cycle_len_max:
            problems.append(f"{v}: cycle too long")
        if any(len(g.adj[u] & alive) > params.deg_threshold for u in seq):
            problems.append(f"{v}: cycle degree too high")
        if not classify_vertex_set(lambda u: g.adj[u] & alive, o.key).removable:
            problems.append(f"{v}: cycle not removable")
        if any(labels[u].label != o.label for u in seq):
            problems.append(f"{v}: key members carry different labels")
    return problems
