import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localcolor.errors import InputError
from localcolor.generators import GenSpec, generate
from localcolor.graph import Graph, is_proper
from localcolor.partition import run_partition
from localcolor.presets import FOUR, SIX
from localcolor.synccolor import (
    _is_prime,
    build_super_graph,
    eliminate,
    key_id,
    key_id_bound,
    next_prime,
    polynomial_step,
    reduce_colors,
    reduction_schedule,
    run_sync,
)


def test_primes():
    small = [p for p in range(2, 60) if all(p % d for d in range(2, p))]
    assert [p for p in range(60) if _is_prime(p)] == small
    assert next_prime(24) == 29 and next_prime(29) == 29
    assert _is_prime(2**61 - 1) and not _is_prime(2**61 + 1)


@pytest.mark.parametrize("m,delta", [(10**6, 3), (10**12, 6), (4**5 * 10**8, 20), (5, 4)])
def test_schedule_invariants(m, delta):
    s = reduction_schedule(m, delta)
    prev = m
    for q, d in s.steps:
        assert _is_prime(q) and q > delta * d and q ** (d + 1) >= prev
        assert q * q < prev
        prev = q * q
    assert s.m_final == prev
    assert s.windows == len(s.steps) + 1 + max(0, s.m_final - delta - 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 25), st.integers(0, 10**6))
def test_polynomial_step_keeps_coloring_proper(n, seed):
    g = generate(GenSpec("triangulation" if n > 2 else "grid", n, seed=seed))
    rng = random.Random(seed)
    delta = g.max_degree()
    m = 10**6
    sched = reduction_schedule(m, delta)
    if not sched.steps:
        return
    q, d = sched.steps[0]
    colors = dict(zip(g.vertices, rng.sample(range(1, m + 1), g.n)))
    new = {v: polynomial_step(colors[v], [colors[u] for u in g.adj[v]], q, d) for v in g.vertices}
    assert is_proper(g, new, palette=q * q)


def test_eliminate():
    assert eliminate([1, 2, 4], 3) == 3
    with pytest.raises(AssertionError):
        eliminate([1, 2, 3, 4], 3)


def test_key_id():
    assert key_id({12, 3}, 100) == 3012
    assert key_id({5}, 9) == 5
    assert key_id_bound(4, 100) == 10**12


@settings(max_examples=100)
@given(st.sets(st.integers(1, 999), min_size=1, max_size=4), st.sets(st.integers(1, 999), min_size=1, max_size=4))
def test_key_id_injective(a, b):
    assert (key_id(a, 999) == key_id(b, 999)) == (a == b)
    assert key_id(a, 999) < key_id_bound(4, 999)


def test_super_graph_edges():
    # two 4-cycles joined by one edge, plus a far one
    edges = [(1, 2), (2, 3), (3, 4), (4, 1), (5, 6), (6, 7), (7, 8), (8, 5), (4, 5), (9, 10), (10, 11), (11, 12), (12, 9)]
    g = Graph.from_edges(edges)
    k1, k2, k3 = frozenset({1, 2, 3, 4}), frozenset({5, 6, 7, 8}), frozenset({9, 10, 11, 12})
    keys = {v: k for k in (k1, k2, k3) for v in k}
    labels = {v: (1, 1) for v in g.vertices}
    sg = build_super_graph(g, 1, labels, keys)
    assert sg.edges == {frozenset((k1, k2))}
    assert sg.degrees() == {k1: 1, k2: 1, k3: 0}


@pytest.mark.parametrize("n", [5, 16, 64])
def test_reduce_colors_on_rings(n):
    g = Graph.from_edges([(i, i % n + 1) for i in range(1, n + 1)])
    colors, trace = reduce_colors(g, 2, {v: v for v in g.vertices})
    assert is_proper(g, colors, require_total=True, palette=3)


def test_reduce_colors_strict_agrees():
    g = generate(GenSpec("maximal_outerplanar", 30, seed=2))
    ids = {v: 7 * v for v in g.vertices}
    a, ta = reduce_colors(g, g.max_degree(), ids)
    b, tb = reduce_colors(g, g.max_degree(), ids, strict=True)
    assert a == b and ta.rounds_used == tb.rounds_used
    assert is_proper(g, a, require_total=True, palette=g.max_degree() + 1)


def test_reduce_colors_input_checks():
    g = Graph.from_edges([(1, 2)])
    with pytest.raises(InputError):
        reduce_colors(g, 1, {1: 3, 2: 3})


def check_sync(g, preset):
    labels, _ = run_partition(g, preset.partition, measure_bits=False)
    lab = {v: o.label for v, o in labels.items()}
    keys = {v: o.key for v, o in labels.items()}
    phi, _ = run_sync(g, lab, keys, preset, measure_bits=False)
    by_key = {}
    for v, o in labels.items():
        if o.phase == 1:
            assert 1 <= phi[v] <= preset.super_palette
            assert by_key.setdefault(o.key, phi[v]) == phi[v]
        else:
            assert 1 <= phi[v] <= preset.phase2_palette
            for u in g.adj[v]:
                if lab[u] == o.label:
                    assert phi[u] != phi[v]
    for level in {o.level for o in labels.values() if o.phase == 1}:
        sg = build_super_graph(g, level, lab, keys)
        for e in sg.edges:
            a, b = tuple(e)
            assert by_key[a] != by_key[b]


@pytest.mark.parametrize(
    "family,n,preset",
    [("subdivided", 200, FOUR), ("hexgrid", 150, FOUR), ("grid", 81, FOUR), ("triangulation", 120, SIX), ("maximal_outerplanar", 60, SIX)],
)
def test_sync_colors_are_proper(family, n, preset):
    check_sync(generate(GenSpec(family, n, seed=3)), preset)
