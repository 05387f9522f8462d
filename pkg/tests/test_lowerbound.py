import itertools

import networkx as nx
import pytest

from localcolor.engine import run
from localcolor.errors import InputError
from localcolor.graph import Graph, ball, relabel
from localcolor.lowerbound import (
    BallGreedy,
    DegreeParity,
    GadgetSpec,
    IdRank,
    balls_disjoint,
    build_gadget,
    distance_check,
    endpoint_names,
    exact_colorings,
    forcing_check,
    forcing_check_graph,
    separates,
    swap_labeling,
    swap_labeling_experiment,
)
from oracles import count_colorings, proper, to_nx

K4 = Graph.from_edges(itertools.combinations(range(1, 5), 2))


@pytest.mark.parametrize("k", range(0, 51, 7))
@pytest.mark.parametrize("family", ["planar4", "outerplanar3"])
def test_sizes_and_ids(family, k):
    spec = GadgetSpec(family, k)
    g, names = build_gadget(spec)
    assert g.n == spec.size == (8 * k + 2 if family == "planar4" else 6 * k + 2)
    assert sorted(names.values()) == list(range(1, g.n + 1))
    assert g.m == (1 + 18 * k if family == "planar4" else 1 + 10 * k)


def test_planar4_small_shapes():
    g, names = build_gadget(GadgetSpec("planar4", 0))
    assert g.n == 2 and g.m == 1
    g, names = build_gadget(GadgetSpec("planar4", 1))
    assert g.degree(names[("v", 0, 1)]) == 4
    assert nx.check_planarity(to_nx(build_gadget(GadgetSpec("planar4", 4))[0]))[0]


def test_outerplanar3_is_outerplanar():
    g, names = build_gadget(GadgetSpec("outerplanar3", 3))
    h = to_nx(g)
    apex = max(g.vertices) + 1
    h.add_edges_from((apex, v) for v in g.vertices)
    assert nx.check_planarity(h)[0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_every_level_has_a_k4(k):
    g, names = build_gadget(GadgetSpec("planar4", k))
    for i in range(1, k + 1):
        for j in (1, 2):
            members = [names[(s, i, j)] for s in "abcv"]
            assert all(g.has_edge(a, b) for a, b in itertools.combinations(members, 2))
    assert exact_colorings(g, 3).first() is None


def test_enumeration_counts_match_brute_force():
    assert exact_colorings(K4, 4).count() == 24
    assert exact_colorings(K4, 3).count() == 0
    g, _ = build_gadget(GadgetSpec("planar4", 1))
    assert exact_colorings(g, 4).count() == count_colorings(g, 4)
    g, _ = build_gadget(GadgetSpec("outerplanar3", 1))
    assert exact_colorings(g, 3).count() == count_colorings(g, 3)


def test_enumeration_cap():
    e = exact_colorings(K4, 4, cap=5)
    assert len(list(e)) == 5 and not e.complete
    assert exact_colorings(K4, 4, cap=5).all_satisfy(lambda c: True) is None
    full = exact_colorings(K4, 4)
    assert len(list(full)) == 24 and full.complete


def test_every_coloring_forces_planar4_k1():
    g, names = build_gadget(GadgetSpec("planar4", 1))
    a, b = names[("v", 0, 1)], names[("v", 1, 1)]
    enum = exact_colorings(g, 4)
    assert enum.all_satisfy(lambda c: c[a] == c[b]) is True
    assert all(proper(g, c, 4) for c in exact_colorings(g, 4))


@pytest.mark.parametrize("k", range(4))
def test_forcing_planar4(k):
    assert forcing_check(GadgetSpec("planar4", k)).holds


@pytest.mark.parametrize("k", range(5))
def test_forcing_outerplanar3(k):
    assert forcing_check(GadgetSpec("outerplanar3", k)).holds


def test_forcing_fails_without_a_triangle_edge():
    g, names = build_gadget(GadgetSpec("planar4", 1))
    a, b = names[("a", 1, 1)], names[("b", 1, 1)]
    h = Graph.from_edges([e for e in g.edges() if e != (min(a, b), max(a, b))], vertices=g.vertices)
    pairs = [(names[x], names[y]) for x, y in endpoint_names(GadgetSpec("planar4", 1))]
    res = forcing_check_graph(h, 4, pairs)
    assert not res.holds and proper(h, res.counterexample, 4)


@pytest.mark.parametrize("k", [0, 1, 5])
def test_distance(k):
    assert distance_check(GadgetSpec("planar4", k))
    assert distance_check(GadgetSpec("outerplanar3", k))


@pytest.mark.parametrize("k", [1, 2, 4])
def test_cut_vertex(k):
    g, names = build_gadget(GadgetSpec("planar4", k))
    assert separates(g, names[("v", 0, 1)], names[("v", 0, 2)], names[("v", k, 1)])
    assert not separates(g, names[("a", 1, 1)], names[("v", 0, 2)], names[("v", k, 1)])


def test_ball_disjointness():
    assert balls_disjoint(GadgetSpec("planar4", 5), 4)
    assert balls_disjoint(GadgetSpec("planar4", 1), 0)
    assert not balls_disjoint(GadgetSpec("planar4", 2), 2)


def test_swap_labeling_is_an_automorphism_relabel():
    g, names, psi = swap_labeling(GadgetSpec("planar4", 3), 2)
    h = relabel(g, psi)
    # the mirror j <-> 3-j is an automorphism only inside the swapped region,
    # so the relabeled graph is a different labeled graph with the same shape
    assert h != g and nx.is_isomorphic(to_nx(g), to_nx(h))
    moved = {v for v in g.vertices if psi[v] != v}
    region = ball(g, names[("v", 3, 1)], 2) | ball(g, names[("v", 3, 2)], 2)
    assert moved == region


@pytest.mark.parametrize("alg", [BallGreedy, IdRank, DegreeParity])
def test_swap_experiment_finds_violation(alg):
    v = swap_labeling_experiment(3, 2, alg(2))
    assert v.balls_disjoint and v.locality_consistent and v.violation
    assert v.rounds_used <= 2


def test_swap_experiment_preconditions():
    with pytest.raises(InputError):
        swap_labeling_experiment(2, 2, BallGreedy(2))
    with pytest.raises(InputError):
        swap_labeling_experiment(3, 1, BallGreedy(2))


def test_trivial_swap():
    v = swap_labeling_experiment(1, 0, IdRank(0))
    assert v.balls_disjoint and v.violation


def test_view_program_halts_on_time():
    g, _ = build_gadget(GadgetSpec("planar4", 2))
    states, trace = run(g, BallGreedy(2), 2)
    assert trace.rounds_used == 2
