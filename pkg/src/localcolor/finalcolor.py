"""Final coloring, level by level from the top down.

Within a level, low-degree vertices (phase 2) color themselves greedily in
the order of their synchronization class. Then cycle keys color themselves
class by class: every member of a key computes the same extension of the
current coloring onto the key's vertices and keeps its own entry.

Round schedule, with P2 = phase-2 classes, P1 = super-graph classes and
r = color_radius, levels beta..1, level length LL = P2 + P1 * r:
  round 0                 announce label
  1 .. 1 + pair_radius    same-label flood of (id, neighbours, key, phi)
  T0 = 1 + pair_radius    pick (key_new, phi_new)
  s_i = T0 + (beta - i) * LL
  s_i + k - 1             phase-2 vertices of class k pick a color
  s_i + P2 - 1 + k * r    keys of class k get colored
  T0 + beta * LL          everybody halts
Every new color is flooded for r hops.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from localcolor.engine import BROADCAST, VertexProgram, run
from localcolor.errors import InputError, LemmaViolation
from localcolor.graph import Cycle, Graph
from localcolor.presets import Preset, get_preset
from localcolor.removable import extend_on_cycle


def canonical_hamiltonian_cycle(h: Graph, members) -> Cycle:
    """Least (in canonical sequence order) Hamiltonian cycle of h[members]."""
    members = frozenset(members)
    start = min(members)
    k = len(members)
    path = [start]
    used = {start}

    def go():
        u = path[-1]
        if len(path) == k:
            return k >= 3 and h.has_edge(u, start) and path[1] < path[-1]
        for w in sorted(h.adj[u] & members):
            if w not in used:
                path.append(w)
                used.add(w)
                if go():
                    return True
                path.pop()
                used.discard(w)
        return False

    if not go():
        raise InputError(f"key {sorted(members)} does not span a cycle")
    return Cycle(path)


def consistent_cycle_color(
    local: Graph, key, palette: int, colors: Mapping[int, Optional[int]]
) -> dict[int, int]:
    """Deterministic coloring of the key's vertices extending ``colors``.

    The view is re-serialized in sorted order first so that every member
    runs the identical computation."""
    key = frozenset(key)
    canon = Graph({v: sorted(local.adj[v]) for v in sorted(local.vertices)})
    partial = {v: colors.get(v) for v in canon.vertices}
    for v in key:
        if partial.get(v) is not None:
            raise LemmaViolation(f"key member {v} is already colored")
    cycle = canonical_hamiltonian_cycle(canon, key)
    try:
        full = extend_on_cycle(canon, cycle, partial, palette)
    except InputError as exc:
        raise LemmaViolation(f"extension precondition failed: {exc}") from exc
    return {v: full[v] for v in sorted(key)}


@dataclass
class _FState:
    id: int
    label: tuple
    key: frozenset
    phi: int
    adj: frozenset = frozenset()
    same: frozenset = frozenset()
    records: dict = field(default_factory=dict)
    key_new: Optional[frozenset] = None
    phi_new: Optional[int] = None
    interest: frozenset = frozenset()
    member_adj: dict = field(default_factory=dict)
    known: dict = field(default_factory=dict)
    seen: dict = field(default_factory=dict)
    color: Optional[int] = None
    decide_at: Optional[int] = None
    next_wake: Optional[int] = None


class FinalColorProgram(VertexProgram):
    """Per-vertex input: ``(label, key, phi)``."""

    event_driven = True

    def __init__(self, preset: Preset, n: int):
        self.p = preset
        self.beta = preset.partition.iterations(n)
        self.T0 = 1 + preset.pair_radius
        self.P1 = preset.super_palette
        self.P2 = preset.phase2_palette
        self.r = preset.color_radius
        self.LL = self.P2 + self.P1 * self.r
        self.end = self.T0 + self.beta * self.LL

    def level_start(self, i: int) -> int:
        return self.T0 + (self.beta - i) * self.LL

    def decision_round(self, label, phi) -> int:
        i, phase = label
        s = self.level_start(i)
        if phase == 2:
            return s + phi - 1
        return s + self.P2 - 1 + phi * self.r

    def init(self, ctx):
        label, key, phi = ctx.input
        return _FState(ctx.id, tuple(label), frozenset(key), phi)

    def step(self, rnd, st, inbox):
        if rnd == 0:
            st.next_wake = 1
            return st, {BROADCAST: ("hello", st.label)}, False
        items = []
        if rnd == 1:
            st.adj = frozenset(inbox)
            st.same = frozenset(u for u, m in inbox.items() if m[1] == st.label)
            st.records[st.id] = (st.adj, st.key, st.phi)
            items.append(("rec", ((st.id, st.adj, st.key, st.phi),)))
        else:
            self._absorb(rnd, st, inbox, items)
        if rnd == self.T0:
            self._adopt(st)
        if st.decide_at is not None and rnd == st.decide_at:
            self._decide(rnd, st, items)

        if rnd >= self.end:
            if st.color is None:
                raise LemmaViolation(f"vertex {st.id} ended uncolored")
            return st, {}, True
        if st.decide_at is not None and st.decide_at > rnd:
            st.next_wake = min(st.decide_at, self.end)
        elif rnd < self.T0:
            st.next_wake = self.T0
        else:
            st.next_wake = self.end
        if not items:
            return st, {}, False
        msg = tuple(items)
        out = {}
        recs = [it for it in items if it[0] == "rec"]
        cols = tuple(it for it in items if it[0] == "c")
        if recs:
            for u in st.same:
                out[u] = msg
        if cols:
            for u in st.adj:
                if u not in out:
                    out[u] = cols
        return st, out, False

    def _absorb(self, rnd, st, inbox, items):
        fresh = []
        seen = st.seen
        if len(seen) > 256:
            st.seen = seen = {o: t for o, t in seen.items() if t >= rnd}
        for sender, m in inbox.items():
            for item in m:
                kind = item[0]
                if kind == "c":
                    _, origin, color, hop = item
                    if origin in seen:
                        continue
                    seen[origin] = rnd + self.r
                    if origin in st.interest:
                        st.known[origin] = color
                    if hop < self.r:
                        items.append(("c", origin, color, hop + 1))
                elif kind == "rec" and sender in st.same:
                    for rec in item[1]:
                        if rec[0] not in st.records:
                            st.records[rec[0]] = rec[1:]
                            fresh.append(rec)
        if fresh and rnd < self.T0:
            items.append(("rec", tuple(fresh)))

    def _adopt(self, st):
        pairs = {(k, phi) for (_, k, phi) in st.records.values() if st.id in k}
        top_phi = max(phi for _, phi in pairs)
        # ties cannot happen for a correct sync coloring; break them anyway
        best = min((kp for kp in pairs if kp[1] == top_phi), key=lambda kp: (len(kp[0]), sorted(kp[0])))
        st.key_new, st.phi_new = best
        if st.label[1] == 2:
            st.interest = st.adj
        else:
            interest = set(st.key_new)
            for x in st.key_new:
                if x not in st.records:
                    raise LemmaViolation(
                        f"vertex {st.id} has no record of key member {x} within the pair radius"
                    )
                st.member_adj[x] = st.records[x][0]
                interest |= st.records[x][0]
            st.interest = frozenset(interest)
        st.records = {}
        st.decide_at = self.decision_round(st.label, st.phi_new)

    def _decide(self, rnd, st, items):
        palette = self.p.palette
        if st.label[1] == 2:
            taken = {st.known[u] for u in st.adj if u in st.known}
            free = [x for x in range(1, palette + 1) if x not in taken]
            if not free:
                raise LemmaViolation(f"no free color for low-degree vertex {st.id}")
            st.color = free[0]
        else:
            key = st.key_new
            colored = {u for u in st.interest if u in st.known and u not in key}
            view_vertices = key | colored
            adj = {v: set() for v in view_vertices}
            for x in key:
                for u in st.member_adj[x]:
                    if u in view_vertices:
                        adj[x].add(u)
                        adj[u].add(x)
            local = Graph(adj)
            assignment = consistent_cycle_color(local, key, palette, st.known)
            st.color = assignment[st.id]
        st.known[st.id] = st.color
        st.seen[st.id] = rnd + self.r
        items.append(("c", st.id, st.color, 1))

    def wake_round(self, st):
        return st.next_wake

    def output(self, st):
        return st.color


def run_final(g: Graph, labels, keys, phi, preset, *, strict: bool = False, measure_bits: bool = True):
    """Run the final coloring; return ``(colors, trace)``."""
    preset = get_preset(preset)
    prog = FinalColorProgram(preset, g.n)
    inputs = {v: (tuple(labels[v]), frozenset(keys[v]), phi[v]) for v in g.vertices}
    states, trace = run(g, prog, prog.end, inputs=inputs, strict=strict, measure_bits=measure_bits)
    return {v: prog.output(s) for v, s in states.items()}, trace


def final_color_program(preset, n: int) -> FinalColorProgram:
    return FinalColorProgram(get_preset(preset), n)
