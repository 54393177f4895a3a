"""Weighted simple graphs and the frustration graph of a Hamiltonian.

Adjacency is stored twice: as sorted neighbor tuples and as bitset rows
(Python ints), since the hot loops downstream are neighborhood
intersections.  Vertex weights are squared Hamiltonian couplings.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Sequence

from .paulis import commutes


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class WeightedGraph:
    """Simple graph with nonnegative vertex weights.

    ``labels[i]`` tracks the originating Hamiltonian term index through
    induced-subgraph operations; for a freshly built graph it is ``i``.
    """

    __slots__ = ("n", "adj", "neighbors", "weights", "labels")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = (),
                 weights: Sequence[float] | None = None,
                 labels: Sequence[int] | None = None):
        self.n = n
        adj = [0] * n
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i},{j}) out of range for n={n}")
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        self.adj = tuple(adj)
        self.neighbors = tuple(tuple(bits(row)) for row in adj)
        if weights is None:
            weights = [1.0] * n
        if len(weights) != n:
            raise ValueError("weight list length mismatch")
        if any(w < 0 for w in weights):
            raise ValueError("negative vertex weight")
        self.weights = tuple(float(w) for w in weights)
        self.labels = tuple(labels) if labels is not None else tuple(range(n))

    # -- queries -------------------------------------------------------

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool((self.adj[i] >> j) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in self.neighbors[i] if j > i]

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def closed_adj(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def is_clique(self, mask: int) -> bool:
        """True iff the vertices of ``mask`` are pairwise adjacent."""
        for v in bits(mask):
            if (self.adj[v] | (1 << v)) & mask != mask:
                return False
        return True

    def is_independent(self, mask: int) -> bool:
        for v in bits(mask):
            if self.adj[v] & mask:
                return False
        return True

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (self.n == other.n and self.adj == other.adj
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.n, self.adj, self.weights))

    def __repr__(self):
        return f"WeightedGraph(n={self.n}, m={sum(self.degree(v) for v in range(self.n)) // 2})"

    # -- induced subgraphs ----------------------------------------------

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["WeightedGraph", list[int]]:
        """Subgraph induced by a vertex set.

        Returns the subgraph and the list of original indices, so that new
        vertex i corresponds to old vertex ``mapping[i]``.  Weights and
        labels are carried through.
        """
        keep = sorted(set(vertices))
        for v in keep:
            if not 0 <= v < self.n:
                raise ValueError(f"vertex {v} out of range")
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[i], pos[j]) for i in keep for j in self.neighbors[i]
                 if j > i and j in pos]
        sub = WeightedGraph(len(keep), edges,
                            weights=[self.weights[v] for v in keep],
                            labels=[self.labels[v] for v in keep])
        return sub, keep

    def remove_set(self, vertices: Iterable[int]) -> tuple["WeightedGraph", list[int]]:
        drop = set(vertices)
        return self.induced_subgraph(v for v in range(self.n) if v not in drop)

    def remove_closed_neighborhood(self, v: int) -> tuple["WeightedGraph", list[int]]:
        return self.remove_set(bits(self.closed_adj(v)))

    def subgraph_from_mask(self, mask: int) -> tuple["WeightedGraph", list[int]]:
        return self.induced_subgraph(bits(mask))


def frustration_graph(hamiltonian) -> WeightedGraph:
    """Frustration graph: vertex per term, edge iff the Paulis anticommute.

    Vertex i carries weight coupling_i**2 and label i.
    """
    terms = hamiltonian.terms
    n = len(terms)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if not commutes(terms[i][1], terms[j][1]):
                edges.append((i, j))
    weights = [c * c for c, _ in terms]
    return WeightedGraph(n, edges, weights=weights)


def maximal_cliques(graph: WeightedGraph) -> list[int]:
    """All maximal cliques as bitmasks (Bron-Kerbosch with pivoting)."""
    out: list[int] = []

    def expand(r: int, p: int, x: int):
        if p == 0 and x == 0:
            out.append(r)
            return
        pivot_pool = p | x
        pivot = max(bits(pivot_pool), key=lambda u: (graph.adj[u] & p).bit_count())
        for v in bits(p & ~graph.adj[pivot]):
            vb = 1 << v
            expand(r | vb, p & graph.adj[v], x & graph.adj[v])
            p &= ~vb
            x |= vb

    if graph.n:
        expand(0, graph.full_mask, 0)
    return out


def all_cliques(graph: WeightedGraph) -> list[int]:
    """All nonempty cliques as bitmasks, exhaustively."""
    out: list[int] = []

    def grow(current: int, candidates: int):
        for v in bits(candidates):
            cur = current | (1 << v)
            out.append(cur)
            grow(cur, candidates & self_above(v) & graph.adj[v])

    def self_above(v: int) -> int:
        return ~((1 << (v + 1)) - 1)

    grow(0, graph.full_mask)
    return out
