"""Weighted graphs, frustration graph construction, induced subgraphs."""

import itertools
import random

import numpy as np
import pytest

from conftest import cycle_graph, random_graph
from ffsolve.graphs import WeightedGraph, frustration_graph, maximal_cliques, bits
from ffsolve.models import (
    back_to_back_model,
    chain_model,
    h5_model,
    h6_model,
    junction_model,
)
from ffsolve.paulis import OperatorSum, to_dense


def test_simple_graph_invariants():
    with pytest.raises(ValueError):
        WeightedGraph(3, [(0, 0)])
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 5)])
    with pytest.raises(ValueError):
        WeightedGraph(2, [(0, 1)], weights=[1.0, -0.5])
    g = WeightedGraph(3, [(0, 1), (1, 0)])  # parallel edge collapses
    assert g.edges() == [(0, 1)]


def test_h5_frustration_graph_is_five_cycle():
    g = frustration_graph(h5_model(1, 2, 3, 4, 5))
    assert g.n == 5
    assert sorted(g.edges()) == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    assert g.weights == (1.0, 4.0, 9.0, 16.0, 25.0)


def test_single_term_graph():
    h = chain_model(1, 2)
    sub = frustration_graph(h)
    assert sub.n == 2
    from ffsolve.models import Hamiltonian
    single = Hamiltonian(h.n, (h.terms[0],))
    g1 = frustration_graph(single)
    assert g1.n == 1 and g1.edges() == []


def test_chain_graph_is_unit_interval():
    for n_cells, k in [(1, 2), (2, 3), (3, 4), (2, 5)]:
        g = frustration_graph(chain_model(n_cells, k))
        n = n_cells * k
        expected = [(i, j) for i in range(n) for j in range(i + 1, n) if j - i < k]
        assert sorted(g.edges()) == expected


def test_back_to_back_edges_match_hand_derivation():
    # pairwise anticommutation worked out symbol by symbol from the term list
    g = frustration_graph(back_to_back_model())
    assert sorted(g.edges()) == [(0, 1), (0, 2), (1, 3), (2, 3), (2, 4), (3, 5), (4, 5)]


def test_frustration_graph_basis_faithful_dense():
    """Edges match anticommutation of the dense matrices, term pair by pair."""
    models = [h5_model(1.0, 0.7, -1.3, 0.4, 2.0), h6_model(*[1.1, 0.3, 0.9, -0.7, 1.4, 0.6]),
              chain_model(2, 3, [1.0, -0.8, 1.2]), back_to_back_model(1, 2, 3, 4, 5, 6)]
    for h in models:
        g = frustration_graph(h)
        dense = [to_dense(OperatorSum.from_term(t)) for _, t in h.terms]
        for i in range(g.n):
            for j in range(i + 1, g.n):
                anti = np.max(np.abs(dense[i] @ dense[j] + dense[j] @ dense[i]))
                assert g.has_edge(i, j) == (anti < 1e-12)


def test_induced_subgraph_carries_weights_and_labels():
    g = WeightedGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4)], weights=[1, 2, 3, 4, 5])
    sub, mapping = g.induced_subgraph([1, 3, 4])
    assert mapping == [1, 3, 4]
    assert sub.weights == (2.0, 4.0, 5.0)
    assert sub.labels == (1, 3, 4)
    assert sub.edges() == [(1, 2)]  # the old (3,4) edge


def test_induced_subgraph_edge_cases():
    g = cycle_graph(5)
    empty, _ = g.induced_subgraph([])
    assert empty.n == 0
    full, _ = g.induced_subgraph(range(5))
    assert full == g
    with pytest.raises(ValueError):
        g.induced_subgraph([7])


def test_c5_minus_closed_neighborhood_is_path_on_two():
    g = cycle_graph(5)
    sub, mapping = g.remove_closed_neighborhood(0)
    assert sub.n == 2
    assert sub.edges() == [(0, 1)]
    assert mapping == [2, 3]


def test_induced_subgraph_composition():
    rng = random.Random(17)
    for _ in range(30):
        g = random_graph(rng, 8, 0.5, weighted=True)
        s1 = [v for v in range(8) if rng.random() < 0.7]
        sub1, map1 = g.induced_subgraph(s1)
        s2_new = [i for i in range(sub1.n) if rng.random() < 0.7]
        sub12, map2 = sub1.induced_subgraph(s2_new)
        direct, map_direct = g.induced_subgraph([map1[i] for i in s2_new])
        assert sub12 == direct
        assert [map1[i] for i in map2] == map_direct


def test_maximal_cliques_c5_and_complete():
    g = cycle_graph(5)
    cliques = sorted(tuple(bits(m)) for m in maximal_cliques(g))
    assert cliques == [(0, 1), (0, 4), (1, 2), (2, 3), (3, 4)]
    k4 = WeightedGraph(4, list(itertools.combinations(range(4), 2)))
    assert [tuple(bits(m)) for m in maximal_cliques(k4)] == [(0, 1, 2, 3)]


def test_maximal_cliques_against_naive():
    rng = random.Random(23)
    for _ in range(40):
        g = random_graph(rng, rng.randint(2, 8), 0.5)
        got = {tuple(bits(m)) for m in maximal_cliques(g)}
        naive = set()
        for size in range(1, g.n + 1):
            for sub in itertools.combinations(range(g.n), size):
                if all(g.has_edge(a, b) for a, b in itertools.combinations(sub, 2)):
                    if not any(all(g.has_edge(v, u) for u in sub)
                               for v in range(g.n) if v not in sub):
                        naive.add(sub)
        assert got == naive


def test_junction_graph_has_hub_clique():
    h = junction_model((1, 1, 1), 2)
    g = frustration_graph(h)
    assert g.n == 12
    hub = (1 << 6) - 1
    assert g.is_clique(hub)
