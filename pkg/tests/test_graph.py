import json

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localcolor.errors import InputError
from localcolor.graph import (
    Cycle,
    Graph,
    ball,
    canonical_sequence,
    check_edge_bound,
    distance,
    girth_at_least,
    induced_subgraph,
    is_cycle_of,
    is_proper,
    local_view,
    relabel,
    shortest_cycle_through,
)
from localcolor.graphio import colors_to_json, from_edgelist, from_json, load_colors, load_graph, save_graph, to_edgelist, to_json
from oracles import hop_distances, to_nx


@st.composite
def small_graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(chosen, vertices=range(1, n + 1))


def test_basic_accessors():
    g = Graph.from_edges([(1, 2), (2, 3)], vertices=[4])
    assert g.n == 4 and g.m == 2
    assert g.vertices == (1, 2, 3, 4)
    assert g.degree(2) == 2 and g.degree(4) == 0
    assert g.max_degree() == 2
    assert g.has_edge(3, 2) and not g.has_edge(1, 3)
    assert g.edges() == [(1, 2), (2, 3)]


@pytest.mark.parametrize(
    "adj",
    [{1: [1]}, {1: [2]}, {0: []}, {1: [2], 2: []}],
)
def test_rejects_bad_adjacency(adj):
    with pytest.raises(InputError):
        Graph(adj)


def test_neighbors_of_unknown_vertex():
    with pytest.raises(InputError):
        Graph.from_edges([(1, 2)]).neighbors(9)


def test_canonical_sequence_rotation_and_reflection():
    assert canonical_sequence([3, 1, 2]) == (1, 2, 3)
    assert canonical_sequence([1, 3, 2]) == (1, 2, 3)
    assert canonical_sequence([5, 4, 2, 7]) == (2, 4, 5, 7)
    assert Cycle([2, 1, 4, 3]) == Cycle([1, 2, 3, 4])


def test_cycle_rejects_short_or_repeated():
    with pytest.raises(InputError):
        Cycle([1, 2])
    with pytest.raises(InputError):
        Cycle([1, 2, 1])


def test_cycle_membership():
    g = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 1)])
    assert is_cycle_of(g, Cycle([1, 2, 3, 4]))
    assert not is_cycle_of(g, Cycle([1, 3, 2]))


def test_induced_subgraph_and_ball():
    g = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    h = induced_subgraph(g, [1, 2, 3])
    assert h.m == 3
    assert ball(g, 2, 1) == {1, 2, 3}
    assert distance(g, 2, 4) == 2


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_distances_match_networkx(g):
    s = g.vertices[0]
    ref = hop_distances(g, s)
    for v in g.vertices:
        assert distance(g, s, v) == ref.get(v)


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_girth_matches_networkx(g):
    ref = nx.girth(to_nx(g))
    for bound in (3, 4, 5, 6):
        c = girth_at_least(g, bound)
        if ref < bound:
            assert c is not None and ref <= len(c) < bound and is_cycle_of(g, c)
        else:
            assert c is None


@settings(max_examples=60, deadline=None)
@given(small_graphs())
def test_shortest_cycle_through_is_shortest(g):
    h = to_nx(g)
    for v in g.vertices:
        c = shortest_cycle_through(g, v, 9)
        lengths = [len(cyc) for cyc in nx.simple_cycles(h, length_bound=9) if v in cyc and len(cyc) >= 3]
        if lengths:
            assert c is not None and v in c.key and len(c) == min(lengths) and is_cycle_of(g, c)
        else:
            assert c is None


def test_is_proper_reports_first_violation():
    g = Graph.from_edges([(1, 2), (2, 3)])
    assert is_proper(g, {1: 1, 2: 2, 3: 1}, require_total=True, palette=2)
    bad = is_proper(g, {1: 1, 2: 1, 3: 2})
    assert not bad and bad.witness == (1, 2) and "1-2" in bad.message
    assert not is_proper(g, {1: 1, 2: 2}, require_total=True)
    assert is_proper(g, {1: 1, 2: 2, 3: None})
    assert not is_proper(g, {1: 7, 2: 1, 3: 2}, palette=6)


def test_edge_bound_for_large_girth():
    # a 7-cycle has girth 7 > 6
    g = Graph.from_edges([(i, i % 7 + 1) for i in range(1, 8)])
    assert check_edge_bound(g, 6)


def test_relabel_must_be_injective():
    g = Graph.from_edges([(1, 2)])
    assert relabel(g, {1: 5, 2: 9}).edges() == [(5, 9)]
    with pytest.raises(InputError):
        relabel(g, {1: 3, 2: 3})


def test_local_view_radius_zero_and_one():
    g = Graph.from_edges([(1, 2), (2, 3), (3, 4)])
    verts, edges = local_view(g, 2, 0)
    assert verts == frozenset({(2, 2, None)}) and edges == frozenset()
    verts, edges = local_view(g, 2, 1, {1: "a"})
    assert {v for v, _, _ in verts} == {1, 2, 3}
    assert edges == {(1, 2), (2, 3)}


def test_json_roundtrip(tmp_path):
    g = Graph.from_edges([(1, 2), (2, 3)], vertices=[4])
    assert from_json(to_json(g)) == g
    p = tmp_path / "g.json"
    save_graph(g, p)
    assert load_graph(p) == g


def test_edgelist_roundtrip(tmp_path):
    g = Graph.from_edges([(1, 2), (2, 3)], vertices=[4])
    assert from_edgelist(to_edgelist(g)) == g
    p = tmp_path / "g.txt"
    save_graph(g, p)
    assert load_graph(p) == g


@pytest.mark.parametrize(
    "text",
    ["[1,2]", '{"n": 2, "edges": [[1, 3]]}', '{"n": 2, "edges": [[1, 2], [2, 1]]}', "{oops"],
)
def test_bad_json_is_input_error(text):
    with pytest.raises(InputError):
        from_json(text)


def test_colors_roundtrip(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(colors_to_json({2: 1, 1: 3}, 4))
    assert load_colors(p) == (4, {1: 3, 2: 1})
    assert json.loads(p.read_text())["colors"] == {"1": 3, "2": 1}
