import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localcolor.engine import BROADCAST, HopDistance, RoundCounts, VertexProgram, collect_ball, concat_traces, run
from localcolor.errors import RoundLimitExceeded
from localcolor.generators import GenSpec, generate, grid_graph
from localcolor.graph import Graph, induced_subgraph, local_view
from localcolor.lowerbound import GossipHash
from localcolor.partition import PartitionProgram
from localcolor.presets import FOUR
from oracles import hop_distances


class Echo(VertexProgram):
    """Records what it hears; halts after a fixed number of rounds."""

    def __init__(self, stop):
        self.stop = stop

    def init(self, ctx):
        return {"id": ctx.id, "heard": []}

    def step(self, rnd, st, inbox):
        st["heard"].append((rnd, dict(inbox)))
        return st, {BROADCAST: (st["id"], rnd)}, rnd >= self.stop(st["id"])

    def output(self, st):
        return st["heard"]


def test_messages_travel_one_hop_per_round():
    g = Graph.from_edges([(1, 2), (2, 3)])
    states, trace = run(g, Echo(lambda v: 2), 5)
    heard = states[3]["heard"]
    assert heard[0] == (0, {})
    assert heard[1] == (1, {2: (2, 0)})
    assert heard[2] == (2, {2: (2, 1)})
    assert trace.rounds_used == 2
    assert list(trace.messages_per_round) == [4, 4]


def test_halting_step_is_delivered_then_silence():
    g = Graph.from_edges([(1, 2)])
    states, trace = run(g, Echo(lambda v: 0 if v == 1 else 3), 5)
    heard = [inbox for _, inbox in states[2]["heard"]]
    assert heard == [{}, {1: (1, 0)}, {}, {}]
    assert trace.rounds_used == 3


def test_round_limit_raises_with_trace():
    g = Graph.from_edges([(1, 2)])
    with pytest.raises(RoundLimitExceeded) as exc:
        run(g, Echo(lambda v: 10), 3)
    assert exc.value.trace is not None and exc.value.states is not None


def test_addressing_non_neighbour_fails():
    class Bad(VertexProgram):
        def init(self, ctx):
            return ctx.id

        def step(self, rnd, st, inbox):
            return st, {99: "x"}, True

    with pytest.raises(ValueError):
        run(Graph.from_edges([(1, 2)]), Bad(), 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 30), st.integers(0, 1000))
def test_hop_distance_matches_bfs(n, seed):
    g = generate(GenSpec("triangulation", n, seed=seed))
    src = random.Random(seed).choice(g.vertices)
    states, trace = run(g, HopDistance(), n, inputs={src: True})
    ref = hop_distances(g, src)
    assert {v: s["dist"] for v, s in states.items()} == ref
    assert trace.rounds_used == max(ref.values())


@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_collect_ball_matches_induced_ball(r):
    g = grid_graph(4, 4)
    states, trace = run(g, collect_ball(r), r + 2)
    prog = collect_ball(r)
    for v in g.vertices:
        known, _ = prog.output(states[v])
        ball = {u for u, d in hop_distances(g, v).items() if d <= r}
        assert known == induced_subgraph(g, ball)
    assert trace.rounds_used == (0 if r == 0 else r + 1)


def test_strict_and_event_driven_agree():
    g = generate(GenSpec("subdivided", 120, seed=2))
    prog = PartitionProgram(FOUR.partition, g.n)
    a, ta = run(g, prog, prog.end)
    b, tb = run(g, prog, prog.end, strict=True)
    assert {v: prog.output(s) for v, s in a.items()} == {v: prog.output(s) for v, s in b.items()}
    assert ta.rounds_used == tb.rounds_used
    assert ta.messages_per_round == tb.messages_per_round
    assert tb.vertex_steps > ta.vertex_steps


def test_stop_at_returns_intermediate_states():
    g = grid_graph(3, 3)
    states, trace = run(g, GossipHash(), 100, stop_at=4)
    assert trace.rounds_used == 4 and len(states) == 9


def test_trace_csv_and_concat():
    g = Graph.from_edges([(1, 2), (2, 3)])
    _, t = run(g, Echo(lambda v: 1), 3)
    assert t.to_csv() == "round,messages,max_bits\n0,4," + str(t.bits_per_round[0]) + "\n"
    both = concat_traces([t, t])
    assert both.rounds_used == 2 and both.total_messages == 8


def test_round_counts_sparse():
    rc = RoundCounts(10**15, {3: 7})
    assert rc[3] == 7 and rc[4] == 0 and rc.total() == 7 and rc.nonzero() == [(3, 7)]


@settings(max_examples=25, deadline=None)
@given(st.integers(8, 40), st.integers(0, 10**6), st.integers(1, 3))
def test_state_depends_only_on_local_view(n, seed, r):
    """Two vertices (in two graphs) with equal local views end with equal
    states; the second graph differs only beyond the view."""
    rng = random.Random(seed)
    g = generate(GenSpec("triangulation", n, seed=seed))
    v = rng.choice(g.vertices)
    dist = hop_distances(g, v)
    far = [u for u, d in dist.items() if d > r]
    adj = {u: set(g.adj[u]) for u in g.vertices}
    for a in far:
        for b in list(adj[a]):
            if b in far and rng.random() < 0.5:
                adj[a].discard(b)
                adj[b].discard(a)
    fresh = iter(range(n + 1, 2 * n + 1))
    rename = {u: (next(fresh) if u in far else u) for u in g.vertices}
    h = Graph({rename[u]: [rename[w] for w in adj[u]] for u in adj})
    assert local_view(g, v, r) == local_view(h, v, r)
    sg, _ = run(g, GossipHash(), r, stop_at=r)
    sh, _ = run(h, GossipHash(), r, stop_at=r)
    assert sg[v] == sh[v]


def test_locality_probe_detects_change_inside_view():
    g = Graph.from_edges([(1, 2), (2, 3), (3, 4)])
    h = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 5)])
    # vertex 4 has a different degree, so vertex 2 sees it after 2 rounds
    assert local_view(g, 2, 2) != local_view(h, 2, 2)
    sg, _ = run(g, GossipHash(), 2, stop_at=2)
    sh, _ = run(h, GossipHash(), 2, stop_at=2)
    assert sg[2] != sh[2]
    s1g, _ = run(g, GossipHash(), 1, stop_at=1)
    s1h, _ = run(h, GossipHash(), 1, stop_at=1)
    assert s1g[2] == s1h[2]
