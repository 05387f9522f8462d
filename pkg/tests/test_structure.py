import itertools
import random
from fractions import Fraction

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from localcolor.errors import InputError
from localcolor.graph import Graph
from localcolor.structure import (
    charge_procedure,
    cycles_of_length,
    disjointness_audit,
    four_cliques,
    k4_break_edges,
    triangles,
)
from instances import block_tree, charge_instance
from oracles import all_cycles, to_nx

K4 = Graph.from_edges(itertools.combinations(range(1, 5), 2))
C5 = Graph.from_edges([(i, i % 5 + 1) for i in range(1, 6)])


def test_edgeless():
    g = Graph.from_edges([], vertices=[1, 2, 3])
    residual, ledger, cert = charge_procedure(g)
    assert ledger.removed == [] and all(c == 0 for c in ledger.charges.values())
    assert residual == g and cert.holds


def test_k4():
    residual, ledger, cert = charge_procedure(K4)
    assert [e[0] for e in ledger.events] == ["four_clique"]
    assert len(ledger.removed) == 3
    assert set(ledger.charges.values()) == {Fraction(3, 4)}
    assert nx.is_tree(to_nx(residual))


def test_c5():
    residual, ledger, cert = charge_procedure(C5)
    assert len(ledger.removed) == 1
    assert set(ledger.charges.values()) == {Fraction(1, 5)}
    assert nx.is_isomorphic(to_nx(residual), nx.path_graph(5))


def test_precondition():
    c4 = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 1)])
    with pytest.raises(InputError):
        charge_procedure(c4)
    star = Graph.from_edges([(1, i) for i in range(2, 10)])
    with pytest.raises(InputError):
        charge_procedure(star)


def test_k4_break_edges_example():
    assert k4_break_edges([3, 1, 4, 2]) == [(1, 2), (2, 3), (3, 4)]


@pytest.mark.parametrize("perm", list(itertools.permutations([10, 20, 30, 40])))
def test_k4_remainder_is_a_path(perm):
    ids = list(perm)
    g = Graph.from_edges(itertools.combinations(ids, 2))
    removed = set(k4_break_edges(ids, g))
    rest = Graph.from_edges([e for e in g.edges() if e not in removed])
    h = to_nx(rest)
    assert nx.is_tree(h) and max(d for _, d in h.degree()) == 2


def test_k4_break_needs_clique():
    rest = Graph.from_edges([(1, 3), (2, 4), (1, 4)])
    with pytest.raises(InputError):
        k4_break_edges([1, 2, 3, 4], rest)
    with pytest.raises(InputError):
        k4_break_edges([1, 2, 3])


def test_audit_k4():
    rep = disjointness_audit(K4)
    assert (rep.cliques, rep.triangles, rep.five_cycles) == (1, 4, 0) and rep.ok


def test_audit_flags_shared_edges():
    # two 5-cycles sharing the edge 1-2
    g = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 5), (5, 1), (2, 6), (6, 7), (7, 8), (8, 1)])
    assert not disjointness_audit(g).ok


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_short_structure_matches_networkx(seed):
    g = charge_instance(seed)
    ref = all_cycles(g, 5)
    ours = set()
    for k in (3, 4, 5):
        for c in cycles_of_length(g, k):
            ours.add(frozenset(frozenset(e) for e in c.edges()))
    assert ours == ref
    h = to_nx(g)
    cliques = {tuple(sorted(c)) for c in nx.enumerate_all_cliques(h) if len(c) == 4}
    assert set(four_cliques(g)) == cliques
    assert set(triangles(g)) == {tuple(sorted(c)) for c in nx.enumerate_all_cliques(h) if len(c) == 3}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_block_trees(seed):
    rng = random.Random(seed)
    g = Graph.from_edges(block_tree(rng, rng.randint(1, 15)))
    residual, ledger, cert = charge_procedure(g)
    assert cert.holds and disjointness_audit(g).ok
    assert nx.is_forest(to_nx(residual))
