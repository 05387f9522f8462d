"""Synchronization colors.

Low-degree vertices (phase 2) get a proper coloring of their level class.
Cycle keys (phase 1) of one level form a super-graph in which two keys are
adjacent when one meets the closed neighbourhood of the other; each key is
simulated by its highest-id member and colored properly there.

Both colorings use the same reduction: polynomial color reduction steps over
a prime field shrink the id space to O(delta^2) colors, then one color class
per round is recolored into 1..delta+1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from localcolor.engine import BROADCAST, VertexProgram, run
from localcolor.errors import InputError, LemmaViolation
from localcolor.graph import Graph
from localcolor.presets import Preset, get_preset

# ---------------------------------------------------------------------------
# number theory helpers


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if q % p == 0:
            return q == p
    d, s = q - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, q)
        if x in (1, q - 1):
            continue
        for _ in range(s - 1):
            x = x * x % q
            if x == q - 1:
                break
        else:
            return False
    return True


def next_prime(x: int) -> int:
    """Smallest prime >= x."""
    q = max(x, 2)
    while not _is_prime(q):
        q += 1
    return q


def iroot_ceil(m: int, k: int) -> int:
    """Smallest x >= 1 with x**k >= m."""
    if m <= 1:
        return 1
    x = max(1, int(round(math.exp(math.log(m) / k))))
    while x**k < m:
        x += 1
    while x > 1 and (x - 1) ** k >= m:
        x -= 1
    return x


# ---------------------------------------------------------------------------
# reduction schedule and per-node rules


@dataclass(frozen=True)
class ReductionSchedule:
    """Globally known plan: polynomial steps, then one elimination per window."""

    delta: int
    m0: int
    steps: tuple
    m_final: int

    @property
    def eliminations(self) -> int:
        return max(0, self.m_final - (self.delta + 1))

    @property
    def windows(self) -> int:
        return len(self.steps) + 1 + self.eliminations

    def slot(self, color: int) -> Optional[int]:
        """Window in which a node holding ``color`` recolors itself."""
        if color <= self.delta + 1:
            return None
        return len(self.steps) + 1 + (self.m_final - color)


def reduction_schedule(m: int, delta: int) -> ReductionSchedule:
    """Colors are 1..m initially. Each step picks a prime q and degree d with
    q > delta * d and q^(d+1) >= current palette, minimising q^2."""
    m0 = m
    steps = []
    while True:
        best = None
        for d in range(1, max(2, m.bit_length()) + 1):
            q = next_prime(max(delta * d + 1, iroot_ceil(m, d + 1), 2))
            if best is None or q * q < best[0]:
                best = (q * q, q, d)
            if delta * (d + 1) + 1 > best[1] and iroot_ceil(m, d + 2) <= 2:
                break
        if best[0] >= m:
            break
        steps.append((best[1], best[2]))
        m = best[0]
    return ReductionSchedule(delta, m0, tuple(steps), m)


def _digits(c: int, q: int, d: int) -> list[int]:
    out = []
    for _ in range(d + 1):
        out.append(c % q)
        c //= q
    return out


def _evaluate(coeffs: list[int], x: int, q: int) -> int:
    acc = 0
    for a in reversed(coeffs):
        acc = (acc * x + a) % q
    return acc


def polynomial_step(color: int, nbr_colors: Iterable[int], q: int, d: int) -> int:
    """One color reduction step (1-based colors in and out).

    Color c-1 is read as the coefficient vector of a polynomial of degree <= d
    over GF(q). Distinct polynomials agree on at most d points, so with at
    most delta neighbours and q > delta*d some point x separates ours from all
    of theirs; the new color encodes (x, p(x))."""
    mine = _digits(color - 1, q, d)
    theirs = [_digits(c - 1, q, d) for c in set(nbr_colors) if c != color]
    for x in range(q):
        val = _evaluate(mine, x, q)
        if all(_evaluate(t, x, q) != val for t in theirs):
            return x * q + val + 1
    raise LemmaViolation("polynomial step found no separating point")


def eliminate(nbr_colors: Iterable[int], delta: int) -> int:
    taken = set(nbr_colors)
    for c in range(1, delta + 2):
        if c not in taken:
            return c
    raise LemmaViolation(f"all {delta + 1} colors taken by neighbours")


# ---------------------------------------------------------------------------
# key encoding and the super-graph


def key_id(key: Iterable[int], n: int) -> int:
    """Concatenate the sorted member ids, each zero-padded to the width of n."""
    width = len(str(max(n, 1)))
    return int("".join(str(x).zfill(width) for x in sorted(key)))


def key_id_bound(max_len: int, n: int) -> int:
    return 10 ** (max_len * len(str(max(n, 1))))


def closed_neighborhood(g: Graph, members: Iterable[int]) -> frozenset:
    out = set()
    for u in members:
        out.add(u)
        out |= g.adj[u]
    return frozenset(out)


@dataclass
class SuperGraph:
    nodes: frozenset
    edges: set
    node_id: dict

    def neighbors(self, k) -> set:
        return {next(iter(e - {k})) for e in self.edges if k in e}

    def degrees(self) -> dict:
        deg = {k: 0 for k in self.nodes}
        for e in self.edges:
            for k in e:
                deg[k] += 1
        return deg

    def max_degree(self) -> int:
        return max(self.degrees().values(), default=0)


def build_super_graph(g: Graph, level: int, labels, keys) -> SuperGraph:
    """Super-graph of the level-``level`` phase-1 keys.

    ``labels`` maps vertex -> (level, phase), ``keys`` maps vertex -> key.
    """
    nodes = frozenset(keys[u] for u, lab in labels.items() if tuple(lab) == (level, 1))
    containing: dict[int, list] = {}
    for k in nodes:
        for x in k:
            containing.setdefault(x, []).append(k)
    edges = set()
    for k1 in nodes:
        for x in closed_neighborhood(g, k1):
            for k2 in containing.get(x, ()):
                if k2 != k1:
                    edges.add(frozenset((k1, k2)))
    return SuperGraph(nodes, edges, {k: key_id(k, g.n) for k in nodes})


# ---------------------------------------------------------------------------
# distributed program


class _Reducer:
    """Reduction state for the nodes a vertex simulates."""

    def __init__(self, sched: ReductionSchedule, start: int, rho: int, adjacent):
        self.s = sched
        self.start = start
        self.rho = rho
        self.adjacent = adjacent
        self.colors: dict = {}
        self.nbr: dict = {}
        self.checked = False

    def window_start(self, w: int) -> int:
        return self.start + w * self.rho

    @property
    def end(self) -> int:
        return self.window_start(self.s.windows)

    def add(self, node, color):
        self.colors[node] = color
        self.nbr[node] = {}

    def receive(self, payload: Mapping):
        for k1, c in payload.items():
            for k2, seen in self.nbr.items():
                if k1 != k2 and self.adjacent(k2, k1):
                    seen[k1] = c

    def act(self, w: int) -> Optional[dict]:
        s = self.s
        if not self.colors:
            return None
        if w >= 1 and not self.checked:
            self.checked = True
            for k, seen in self.nbr.items():
                if len(seen) > s.delta:
                    raise LemmaViolation(
                        f"node {sorted(k) if isinstance(k, frozenset) else k} has "
                        f"{len(seen)} neighbours, more than {s.delta}"
                    )
        if w == 0:
            payload = dict(self.colors)
        elif w <= len(s.steps):
            q, d = s.steps[w - 1]
            payload = {
                k: polynomial_step(c, self.nbr[k].values(), q, d) for k, c in self.colors.items()
            }
        elif w < s.windows:
            target = s.m_final - (w - len(s.steps) - 1)
            payload = {
                k: eliminate(self.nbr[k].values(), s.delta)
                for k, c in self.colors.items()
                if c == target
            }
        else:
            return None
        self.colors.update(payload)
        self.receive(payload)
        return payload

    def next_window(self, w_now: int) -> Optional[int]:
        """Next window index > w_now at which this reducer must act."""
        if not self.colors:
            return None
        s = self.s
        if w_now < len(s.steps):
            return w_now + 1
        slots = [s.slot(c) for c in self.colors.values()]
        slots = [x for x in slots if x is not None and x > w_now]
        return min(slots) if slots else None


@dataclass
class _SState:
    id: int
    label: tuple
    key: frozenset
    adj: frozenset = frozenset()
    same: frozenset = frozenset()
    records: dict = field(default_factory=dict)
    reducer: Optional[_Reducer] = None
    phi: Optional[int] = None
    seen_window: int = -1
    seen: set = field(default_factory=set)
    next_wake: Optional[int] = None


class SyncProgram(VertexProgram):
    """Per-vertex input: ``(label, key)`` from the partition."""

    event_driven = True

    def __init__(self, preset: Preset, n: int):
        self.preset = preset
        L = preset.max_key_len
        self.h = L // 2
        self.rho = 2 * (L // 2) + 1
        self.n = n
        self.sched1 = reduction_schedule(key_id_bound(L, n), preset.super_palette - 1)
        self.sched2 = reduction_schedule(max(n, 1), preset.phase2_palette - 1)
        self.start1 = 1 + self.h
        self.start2 = 1
        self.end = max(
            self.start1 + self.sched1.windows * self.rho, self.start2 + self.sched2.windows
        )

    def init(self, ctx):
        label, key = ctx.input
        return _SState(ctx.id, tuple(label), frozenset(key))

    def step(self, rnd, st, inbox):
        if rnd == 0:
            st.next_wake = 1
            return st, {BROADCAST: ("hello", st.label)}, False
        items = []
        if rnd == 1:
            st.adj = frozenset(inbox)
            st.same = frozenset(u for u, m in inbox.items() if m[1] == st.label)
            if st.label[1] == 2:
                red = _Reducer(self.sched2, self.start2, 1, lambda a, b: True)
                red.add(st.id, st.id)
                st.reducer = red
                st.phi = st.id
            else:
                st.records[st.id] = (st.adj, st.key)
                items.append(("rec", ((st.id, st.adj, st.key),)))
        else:
            self._absorb(rnd, st, inbox, items)

        if st.label[1] == 1 and rnd == self.start1:
            self._become_rep(st)
        red = st.reducer
        if red is not None and rnd >= red.start and (rnd - red.start) % red.rho == 0:
            w = (rnd - red.start) // red.rho
            payload = red.act(w)
            if payload:
                if st.label[1] == 2:
                    st.phi = red.colors[st.id]
                    items.append(("p2", payload[st.id]))
                else:
                    if st.key in payload:
                        st.phi = payload[st.key]
                    items.append(("sup", st.id, w, 1, payload))
                    if w != st.seen_window:
                        st.seen_window, st.seen = w, set()
                    st.seen.add(st.id)

        if rnd >= self.end:
            if st.phi is None:
                raise LemmaViolation(f"vertex {st.id} finished without a synchronization color")
            return st, {}, True
        st.next_wake = self._next_wake(rnd, st)
        if items and st.same:
            msg = tuple(items)
            return st, {u: msg for u in st.same}, False
        return st, {}, False

    def _absorb(self, rnd, st, inbox, items):
        fresh = []
        for sender, m in inbox.items():
            if sender not in st.same:
                continue
            for item in m:
                kind = item[0]
                if kind == "rec":
                    for rec in item[1]:
                        if rec[0] not in st.records:
                            st.records[rec[0]] = (rec[1], rec[2])
                            fresh.append(rec)
                elif kind == "p2":
                    st.reducer.receive({sender: item[1]})
                elif kind == "sup":
                    _, origin, w, hop, payload = item
                    if w != st.seen_window:
                        st.seen_window, st.seen = w, set()
                    if origin in st.seen:
                        continue
                    st.seen.add(origin)
                    if st.key in payload:
                        st.phi = payload[st.key]
                    if st.reducer is not None:
                        st.reducer.receive(payload)
                    if hop < self.rho:
                        items.append(("sup", origin, w, hop + 1, payload))
        if fresh and rnd < 1 + self.h:
            items.append(("rec", tuple(fresh)))

    def _become_rep(self, st):
        mine = {}
        for u, (_, k) in st.records.items():
            if max(k) == st.id and k not in mine:
                mine[k] = None
        if not mine:
            return
        nbhd = {}
        for k in mine:
            cl = set()
            for x in k:
                if x not in st.records:
                    raise LemmaViolation(f"representative {st.id} never heard from key member {x}")
                cl.add(x)
                cl |= st.records[x][0]
            nbhd[k] = frozenset(cl)
        red = _Reducer(self.sched1, self.start1, self.rho, lambda k2, k1: not nbhd[k2].isdisjoint(k1))
        for k in sorted(mine, key=sorted):
            red.add(k, key_id(k, self.n))
        st.reducer = red

    def _next_wake(self, rnd, st):
        cands = [self.end]
        if rnd < self.start1 and st.label[1] == 1:
            cands.append(self.start1)
        red = st.reducer
        if red is not None:
            w_now = (rnd - red.start) // red.rho if rnd >= red.start else -1
            nw = red.next_window(w_now)
            if nw is not None:
                cands.append(red.window_start(nw))
        cands = [c for c in cands if c > rnd]
        return min(cands) if cands else rnd + 1

    def wake_round(self, st):
        return st.next_wake

    def output(self, st):
        return st.phi


def run_sync(g: Graph, labels, keys, preset, *, strict: bool = False, measure_bits: bool = True):
    """Run the synchronization-color program; return ``(phi, trace)``."""
    preset = get_preset(preset)
    prog = SyncProgram(preset, g.n)
    inputs = {v: (tuple(labels[v]), frozenset(keys[v])) for v in g.vertices}
    states, trace = run(g, prog, prog.end, inputs=inputs, strict=strict, measure_bits=measure_bits)
    return {v: prog.output(s) for v, s in states.items()}, trace


def assign_phi(g: Graph, labels, keys, preset) -> dict[int, int]:
    return run_sync(g, labels, keys, preset, measure_bits=False)[0]


class ReduceProgram(VertexProgram):
    """Standalone (delta+1)-coloring of the whole graph by the same rules."""

    event_driven = True

    def __init__(self, delta: int, id_bound: int):
        self.sched = reduction_schedule(id_bound, delta)
        trivial = not self.sched.steps and not self.sched.eliminations
        self.end = 0 if trivial else self.sched.windows

    def init(self, ctx):
        red = _Reducer(self.sched, 0, 1, lambda a, b: True)
        red.add(ctx.id, ctx.input)
        return {"id": ctx.id, "red": red, "wake": None}

    def step(self, rnd, st, inbox):
        red = st["red"]
        for u, c in inbox.items():
            red.receive({u: c})
        out = {}
        if rnd < self.end:
            payload = red.act(rnd)
            if payload:
                out = {BROADCAST: payload[st["id"]]}
            nw = red.next_window(rnd)
            st["wake"] = min(nw, self.end) if nw is not None else self.end
        return st, out, rnd >= self.end

    def wake_round(self, st):
        return st["wake"]

    def output(self, st):
        return st["red"].colors[st["id"]]


def reduce_colors(
    g: Graph, delta: int, initial_ids: Mapping[int, int], id_bound: Optional[int] = None, *, strict=False
):
    """Proper (delta+1)-coloring of ``g`` from distinct initial ids."""
    if g.max_degree() > delta:
        raise InputError(f"max degree {g.max_degree()} exceeds delta={delta}")
    vals = [initial_ids[v] for v in g.vertices]
    if len(set(vals)) != len(vals) or any(x < 1 for x in vals):
        raise InputError("initial ids must be distinct positive integers")
    bound = id_bound if id_bound is not None else max(vals, default=1)
    prog = ReduceProgram(delta, bound)
    states, trace = run(g, prog, prog.end, inputs=dict(initial_ids), strict=strict)
    return {v: prog.output(s) for v, s in states.items()}, trace
