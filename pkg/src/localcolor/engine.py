"""Synchronous round simulator for the LOCAL model.

A vertex starts out knowing its own id, its degree, ``n`` and an optional
per-vertex input. In every round each running vertex receives what its
neighbours sent in the previous round (keyed by sender id), updates its
state and sends new messages. Messages sent at round r arrive at round r+1.

Programs with long fixed schedules can set ``event_driven = True`` and
implement ``wake_round``: such a vertex is stepped only when a message
arrives or when its requested wake-up round comes. A program that opts in
promises that stepping it with an empty inbox at any other round would not
change its state or send anything, so skipping those steps is exact.
``strict=True`` steps every vertex every round regardless, which tests use
to confirm the promise on small inputs.
"""

from __future__ import annotations

import heapq
import io
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from localcolor.errors import RoundLimitExceeded
from localcolor.graph import Graph


class _Broadcast:
    def __repr__(self):
        return "BROADCAST"


BROADCAST = _Broadcast()
"""Outbox key meaning "every neighbour without its own entry"."""


@dataclass(frozen=True)
class VertexContext:
    id: int
    degree: int
    n: int
    input: Any = None
    seed: Optional[int] = None


class VertexProgram:
    """Base class for per-vertex programs."""

    event_driven = False

    def init(self, ctx: VertexContext):
        raise NotImplementedError

    def step(self, rnd: int, state, inbox: Mapping[int, Any]):
        """Return ``(state, outbox, halted)``."""
        raise NotImplementedError

    def wake_round(self, state) -> Optional[int]:
        """Next round at which the vertex must be stepped even without mail."""
        return None

    def output(self, state):
        return state


class RoundCounts(Sequence):
    """Sparse per-round integer series; rounds without entries read as 0."""

    def __init__(self, length: int, values: Mapping[int, int]):
        self._length = length
        self._values = dict(values)

    def __len__(self):
        return self._length

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(self._length))]
        if i < 0:
            i += self._length
        if not 0 <= i < self._length:
            raise IndexError(i)
        return self._values.get(i, 0)

    def __iter__(self):
        for i in range(self._length):
            yield self._values.get(i, 0)

    def nonzero(self) -> list[tuple[int, int]]:
        return sorted(self._values.items())

    def total(self) -> int:
        return sum(self._values.values())

    def __eq__(self, other):
        if isinstance(other, RoundCounts):
            return self._length == other._length and self.nonzero() == other.nonzero()
        return list(self) == list(other)

    def __repr__(self):
        return f"RoundCounts(len={self._length}, nonzero={len(self._values)})"


@dataclass
class RoundTrace:
    rounds_used: int
    messages_per_round: RoundCounts
    max_message_bits: int
    bits_per_round: dict = field(default_factory=dict)
    vertex_steps: int = 0

    @property
    def total_messages(self) -> int:
        return self.messages_per_round.total()

    def to_csv(self) -> str:
        """Rows for every round in which at least one message was sent."""
        out = io.StringIO()
        out.write("round,messages,max_bits\n")
        for r, m in self.messages_per_round.nonzero():
            out.write(f"{r},{m},{self.bits_per_round.get(r, 0)}\n")
        return out.getvalue()


def concat_traces(traces: Sequence[RoundTrace]) -> RoundTrace:
    """Run several traces back to back."""
    offset = 0
    counts: dict[int, int] = {}
    bits: dict[int, int] = {}
    steps = 0
    for t in traces:
        for r, m in t.messages_per_round.nonzero():
            counts[r + offset] = m
        for r, b in t.bits_per_round.items():
            bits[r + offset] = b
        steps += t.vertex_steps
        offset += t.rounds_used
    return RoundTrace(
        offset,
        RoundCounts(offset, counts),
        max((t.max_message_bits for t in traces), default=0),
        bits,
        steps,
    )


def payload_bits(obj) -> int:
    """Rough size of a message in bits (for inspection only)."""
    if obj is None or isinstance(obj, bool):
        return 1
    if isinstance(obj, int):
        return obj.bit_length() + 1
    if isinstance(obj, str):
        return 8 * len(obj)
    if isinstance(obj, (tuple, list, set, frozenset)):
        return 2 + sum(payload_bits(x) for x in obj)
    if isinstance(obj, dict):
        return 2 + sum(payload_bits(k) + payload_bits(v) for k, v in obj.items())
    return 64


def run(
    g: Graph,
    program: VertexProgram,
    round_limit: int,
    *,
    inputs: Optional[Mapping[int, Any]] = None,
    seed: Optional[int] = None,
    strict: bool = False,
    measure_bits: bool = True,
    stop_at: Optional[int] = None,
):
    """Execute ``program`` on every vertex of ``g``.

    Returns ``(states, trace)``. Rounds are numbered from 0; the vertex steps
    of rounds 0..round_limit are allowed and ``rounds_used`` is the round in
    which the last vertex halted. With ``stop_at`` the run ends quietly after
    that round and returns the states reached so far.
    """
    if round_limit < 0:
        raise ValueError("round_limit must be non-negative")
    inputs = inputs or {}
    adj = g.adj
    states = {}
    for v in g.vertices:
        vseed = None if seed is None else hash((seed, v)) & 0xFFFFFFFFFFFFFFFF
        states[v] = program.init(VertexContext(v, len(adj[v]), g.n, inputs.get(v), vseed))

    event = program.event_driven and not strict
    running = set(g.vertices)
    pending: dict[int, dict[int, Any]] = {}
    heap: list[tuple[int, int]] = []
    wake_at: dict[int, int] = {}
    counts: dict[int, int] = {}
    bits: dict[int, int] = {}
    max_bits = 0
    steps = 0
    last_round = 0

    r = 0
    if event:
        for v in g.vertices:
            wake_at[v] = 0
            heap.append((0, v))
        heapq.heapify(heap)

    stopped = False
    while running:
        if stop_at is not None and r > stop_at:
            stopped = True
            break
        if r > round_limit:
            trace = _trace(round_limit, counts, bits, max_bits, steps)
            raise RoundLimitExceeded(
                f"{len(running)} vertices still running after round {round_limit}", trace, states
            )
        if event:
            due = set(pending)
            while heap and heap[0][0] <= r:
                w, v = heapq.heappop(heap)
                if wake_at.get(v) == w:
                    due.add(v)
                    del wake_at[v]
            due &= running
            if not due:
                while heap and wake_at.get(heap[0][1]) != heap[0][0]:
                    heapq.heappop(heap)
                if not heap:
                    if stop_at is not None:
                        stopped = True
                        break
                    trace = _trace(r, counts, bits, max_bits, steps)
                    raise RoundLimitExceeded(
                        f"{len(running)} vertices wait forever without halting", trace, states
                    )
                r = heap[0][0]
                continue
            order = sorted(due)
        else:
            order = sorted(running)

        inboxes = pending
        pending = {}
        sent = 0
        for v in order:
            state, outbox, halted = program.step(r, states[v], inboxes.get(v, _EMPTY))
            states[v] = state
            steps += 1
            if outbox:
                sent += _deliver(v, adj[v], outbox, pending, running)
                if measure_bits:
                    b = max(payload_bits(m) for m in outbox.values())
                    if b > max_bits:
                        max_bits = b
                    if b > bits.get(r, 0):
                        bits[r] = b
            if halted:
                running.discard(v)
                wake_at.pop(v, None)
                last_round = r
            elif event:
                w = program.wake_round(state)
                if w is not None:
                    w = max(w, r + 1)
                    wake_at[v] = w
                    heapq.heappush(heap, (w, v))
        if sent:
            counts[r] = sent
        for v in [u for u in pending if u not in running]:
            del pending[v]
        r += 1

    used = stop_at if stopped else last_round
    return states, _trace(used, counts, bits, max_bits, steps)


_EMPTY: Mapping[int, Any] = {}


def _deliver(v, nbrs, outbox, pending, running) -> int:
    sent = 0
    bcast = outbox.get(BROADCAST, _MISSING)
    for u, msg in outbox.items():
        if u is BROADCAST:
            continue
        if u not in nbrs:
            raise ValueError(f"vertex {v} addressed non-neighbour {u}")
        sent += 1
        if u in running:
            pending.setdefault(u, {})[v] = msg
    if bcast is not _MISSING:
        for u in nbrs:
            if u in outbox:
                continue
            sent += 1
            if u in running:
                pending.setdefault(u, {})[v] = bcast
    return sent


_MISSING = object()


def _trace(used, counts, bits, max_bits, steps) -> RoundTrace:
    counts = {r: c for r, c in counts.items() if r < used}
    return RoundTrace(used, RoundCounts(used, counts), max_bits, dict(bits), steps)


# ---------------------------------------------------------------------------
# small reference programs


@dataclass
class _BallState:
    id: int
    label: Any
    until: int
    adj: Optional[frozenset] = None
    records: dict = field(default_factory=dict)
    fresh: list = field(default_factory=list)


class CollectBall(VertexProgram):
    """Each vertex learns the labeled induced subgraph on its radius-r ball.

    Round 0 announces ids, after which every vertex knows its neighbours;
    records ``(id, label, neighbours)`` then spread one hop per round. The
    ball of radius r is complete after r + 1 rounds (0 rounds when r = 0).
    Per-vertex labels are read from the context input.
    """

    def __init__(self, r: int):
        if r < 0:
            raise ValueError("radius must be non-negative")
        self.r = r

    def init(self, ctx):
        return _BallState(ctx.id, ctx.input, 0 if self.r == 0 else self.r + 1)

    def step(self, rnd, state, inbox):
        if rnd == 0:
            state.records[state.id] = (state.label, None)
            if state.until == 0:
                state.adj = frozenset()
                state.records[state.id] = (state.label, state.adj)
                return state, {}, True
            return state, {BROADCAST: state.id}, False
        if rnd == 1:
            state.adj = frozenset(inbox)
            state.records[state.id] = (state.label, state.adj)
            out = [(state.id, state.label, state.adj)]
        else:
            out = []
            for msg in inbox.values():
                for rec in msg:
                    if rec[0] not in state.records:
                        state.records[rec[0]] = (rec[1], rec[2])
                        out.append(rec)
        if rnd >= state.until:
            return state, {}, True
        return state, ({BROADCAST: tuple(out)} if out else {}), False

    def output(self, state):
        ids = frozenset(state.records)
        g = Graph({v: adj & ids for v, (_, adj) in state.records.items()})
        return g, {v: lab for v, (lab, _) in state.records.items()}


def collect_ball(r: int) -> CollectBall:
    return CollectBall(r)


class HopDistance(VertexProgram):
    """Flood from the vertices whose input is truthy; output hop distance."""

    def init(self, ctx):
        return {"marked": bool(ctx.input), "dist": None}

    def step(self, rnd, state, inbox):
        if state["marked"] and rnd == 0:
            state["dist"] = 0
            return state, {BROADCAST: 0}, True
        if inbox:
            d = min(inbox.values()) + 1
            state["dist"] = d
            return state, {BROADCAST: d}, True
        return state, {}, False

    def output(self, state):
        return state["dist"]
