"""Parsing, writing, and the built-in model generators."""

import random

import pytest

from conftest import random_graph
from ffsolve.errors import ModelError, ParseError
from ffsolve.graphs import frustration_graph
from ffsolve.models import (
    Hamiltonian,
    back_to_back_model,
    chain_model,
    generate_model,
    h5_model,
    h6_model,
    junction_graph,
    junction_model,
    parse_graph,
    parse_hamiltonian,
    realize_graph,
    write_graph,
    write_hamiltonian,
)
from ffsolve.paulis import PauliTerm


H5_FILE = """\
# five terms on three qubits
1.0  X0 X1
0.5  Z1
-1.25 Y0 Y1 X2
0.75 Y0 Z1
2.0  X0 Z1
"""


def test_parse_simple():
    h = parse_hamiltonian("1.0 X0 X1")
    assert h.n == 2 and len(h) == 1
    assert h.terms[0] == (1.0, PauliTerm.from_ops(2, {0: "X", 1: "X"}))


def test_parse_h5_file_matches_generator():
    h = parse_hamiltonian(H5_FILE)
    assert h.n == 3 and len(h) == 5
    gen = h5_model(1.0, 0.5, -1.25, 0.75, 2.0)
    assert h == gen


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_hamiltonian("1.0 X0 X0")  # repeated qubit index
    with pytest.raises(ParseError):
        parse_hamiltonian("1.0 W0")
    with pytest.raises(ParseError):
        parse_hamiltonian("nan X0")
    with pytest.raises(ParseError):
        parse_hamiltonian("inf X0")
    with pytest.raises(ParseError):
        parse_hamiltonian("1.0")
    with pytest.raises(ParseError):
        parse_hamiltonian("# only a comment\n\n")


def test_parse_merges_duplicates_and_drops_zeros():
    h = parse_hamiltonian("1.0 X0\n2.0 X0\n0.0 Z0\n1.0 Z1")
    assert len(h) == 2
    assert h.terms[0][0] == 3.0
    # full cancellation of every term is rejected
    with pytest.raises(ParseError):
        parse_hamiltonian("1.0 X0\n-1.0 X0")


def test_hamiltonian_round_trip():
    h = h6_model(1.0, -0.5, 0.25, 2.0, -1.0, 0.125)
    assert parse_hamiltonian(write_hamiltonian(h)) == h


def test_identity_term_rejected():
    with pytest.raises(ModelError):
        Hamiltonian.from_pairs([(1.0, PauliTerm.identity(2))])


def test_graph_file_round_trip():
    text = "p 2\nv 0 1.0\nv 1 4.0\ne 0 1\n"
    g = parse_graph(text)
    assert g.n == 2 and g.edges() == [(0, 1)] and g.weights == (1.0, 4.0)
    assert parse_graph(write_graph(g)) == g


def test_graph_parse_edge_cases():
    assert parse_graph("p 0").n == 0
    with pytest.raises(ParseError):
        parse_graph("p 2\ne 0 5")
    with pytest.raises(ParseError):
        parse_graph("p 2\ne 0 1\ne 1 0")  # duplicate edge
    with pytest.raises(ParseError):
        parse_graph("p 2\nv 0 -1.0")
    with pytest.raises(ParseError):
        parse_graph("e 0 1")  # missing header


def test_generated_graph_round_trips():
    rng = random.Random(3)
    for h in [h5_model(), h6_model(), chain_model(2, 3), junction_model((1, 1), 2),
              back_to_back_model()]:
        g = frustration_graph(h)
        assert parse_graph(write_graph(g)) == g
    for _ in range(10):
        g = random_graph(rng, rng.randint(1, 9), 0.4, weighted=True)
        assert parse_graph(write_graph(g)) == g


def test_h6_with_f_zero_equals_h5_graph():
    g6 = frustration_graph(h6_model(1.0, 0.7, 1.3, 0.4, 2.0, 0.0))
    g5 = frustration_graph(h5_model(1.0, 0.7, 1.3, 0.4, 2.0))
    assert g6 == g5


def test_chain_term_count_and_shape():
    h = chain_model(2, 3)
    assert len(h) == 6 and h.n == 6
    # interior terms keep the full X Y Y shape
    assert h.terms[0][1] == PauliTerm.from_ops(6, {0: "X", 1: "Y", 2: "Y"})
    assert h.terms[3][1] == PauliTerm.from_ops(6, {3: "X", 4: "Y", 5: "Y"})
    tiny = chain_model(1, 2)
    assert len(tiny) == 2


def test_chain_invalid_sizes():
    with pytest.raises(ModelError):
        chain_model(0, 2)
    with pytest.raises(ModelError):
        chain_model(2, 1)
    with pytest.raises(ModelError):
        chain_model(1, 3, periodic=True)
    with pytest.raises(ModelError):
        chain_model(2, 3, [1.0])


def test_chain_staggered_couplings():
    h = chain_model(2, 2, [0.5, 1.5])
    assert h.couplings() == (0.5, 1.5, 0.5, 1.5)


def test_periodic_chain_graph_is_circulant():
    g = frustration_graph(chain_model(3, 3, periodic=True))
    n = 9
    for i in range(n):
        for j in range(i + 1, n):
            d = min(j - i, n - (j - i))
            assert g.has_edge(i, j) == (d < 3)


def test_junction_realization_matches_target_graph():
    for arms, k in [((1, 1, 1), 2), ((1, 2), 3), ((2, 1, 1), 2)]:
        target = junction_graph(arms, k)
        got = frustration_graph(junction_model(arms, k))
        assert got == target


def test_junction_with_couplings():
    target = junction_graph((1, 1), 2)
    couplings = [0.5 + 0.1 * i for i in range(target.n)]
    h = junction_model((1, 1), 2, couplings)
    g = frustration_graph(h)
    assert g.adj == target.adj
    assert g.weights == tuple(c * c for c in couplings)


def test_realize_graph_faithful():
    rng = random.Random(29)
    for _ in range(25):
        g = random_graph(rng, rng.randint(1, 9), 0.45, weighted=True)
        got = frustration_graph(realize_graph(g))
        assert got.adj == g.adj
        # couplings are sqrt(weight), so squaring back costs one rounding
        assert all(abs(a - b) <= 1e-15 * b for a, b in zip(got.weights, g.weights))


def test_generate_model_dispatch():
    assert generate_model("h5") == h5_model()
    assert generate_model("chain", n_cells=2, k=3) == chain_model(2, 3)
    with pytest.raises(ModelError):
        generate_model("nope")
    with pytest.raises(ModelError):
        generate_model("h5", couplings=[1.0])
    with pytest.raises(ModelError):
        generate_model("chain", k=3)
