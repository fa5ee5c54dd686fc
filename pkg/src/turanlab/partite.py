"""r-partite subgraphs of a host graph and moves between multipartite graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .graph import Graph, GraphError, PartitionedGraph, make_graph

EXACT_BUDGET = 5_000_000
LOCAL_RESTARTS = 32


class BudgetExceeded(RuntimeError):
    pass


class AlreadyBalanced(ValueError):
    """No pair of parts differs in size by two or more."""


@dataclass(frozen=True)
class PartiteDecomposition:
    original: Graph
    subgraph: PartitionedGraph
    dropped_edges: int

    def __post_init__(self):
        if not self.subgraph.graph.is_subgraph_of(self.original):
            raise GraphError("subgraph edges must be original edges")
        if self.dropped_edges != self.original.num_edges - self.subgraph.graph.num_edges:
            raise GraphError("dropped_edges does not match the edge counts")


@dataclass(frozen=True)
class RebalanceMove:
    source: int  # part index of A
    target: int  # part index of B'
    removed: int  # label of a in the input graph
    clone: int  # label of b in the output graph
    size_a: int  # |A| before the move
    size_b: int  # |B| = |B'| + 1


def _parts_from_colors(colors, r):
    parts = [[] for _ in range(r)]
    for v, c in enumerate(colors):
        parts[c].append(v)
    return tuple(tuple(p) for p in parts)


def cross_subgraph(G: Graph, colors, r: int) -> PartiteDecomposition:
    """Keep exactly the edges of ``G`` whose ends get different colours."""
    colors = [int(c) for c in colors]
    sub = make_graph(G.n, [(u, v) for u, v in G.edges() if colors[u] != colors[v]])
    pg = PartitionedGraph(sub, _parts_from_colors(colors, r))
    return PartiteDecomposition(G, pg, G.num_edges - sub.num_edges)


def _back_csr(G: Graph):
    ptr = np.zeros(G.n + 1, dtype=np.int64)
    idx = []
    for v in range(G.n):
        back = sorted(u for u in G.neighbors(v) if u < v)
        idx.extend(back)
        ptr[v + 1] = len(idx)
    return ptr, np.asarray(idx, dtype=np.int64)


def _csr(G: Graph):
    ptr = np.zeros(G.n + 1, dtype=np.int64)
    idx = []
    for v in range(G.n):
        idx.extend(sorted(G.neighbors(v)))
        ptr[v + 1] = len(idx)
    return ptr, np.asarray(idx, dtype=np.int64)


def max_r_partite_exact(G: Graph, r: int, budget: int = EXACT_BUDGET) -> PartiteDecomposition:
    """Maximum r-partite subgraph of ``G`` by exhaustive search with pruning."""
    if r < 1:
        raise GraphError("r must be >= 1")
    if r >= G.n:
        return cross_subgraph(G, range(G.n), r)
    if r**G.n > budget:
        raise BudgetExceeded(f"{r}^{G.n} colourings exceed budget {budget}")
    ptr, idx = _back_csr(G)
    _, colors = kernels.max_rpartite_kernel(ptr, idx, r)
    return cross_subgraph(G, colors, r)


def max_r_partite_local(G: Graph, r: int, seed: int = 0, restarts: int = LOCAL_RESTARTS) -> PartiteDecomposition:
    """Local-search r-partite subgraph; the best of ``restarts`` random starts."""
    if r < 2:
        raise GraphError("local search needs r >= 2")
    rng = np.random.default_rng(seed)
    ptr, idx = _csr(G)
    best = None
    for _ in range(restarts):
        colors = rng.integers(0, r, size=G.n).astype(np.int64)
        kernels.local_search_kernel(ptr, idx, r, colors)
        dec = cross_subgraph(G, colors, r)
        if best is None or dec.dropped_edges < best.dropped_edges:
            best = dec
    return best


def maximal_completion(dec: PartiteDecomposition) -> PartiteDecomposition:
    """Re-add crossing edges and recolour improving vertices until stable.

    On return every original edge missing from the subgraph lies inside a part.
    """
    G = dec.original
    r = dec.subgraph.r
    colors = np.asarray(dec.subgraph.part_of(), dtype=np.int64)
    if r >= 1 and G.n:
        ptr, idx = _csr(G)
        kernels.local_search_kernel(ptr, idx, r, colors)
    out = cross_subgraph(G, colors, r)
    if out.dropped_edges == dec.dropped_edges and out.subgraph == dec.subgraph:
        return dec
    return out


def fill_to_complete_multipartite(pg: PartitionedGraph) -> PartitionedGraph:
    n = pg.graph.n
    full = (1 << n) - 1
    masks = [0] * n
    for part in pg.parts:
        pm = sum(1 << v for v in part)
        for v in part:
            masks[v] = full & ~pm
    return PartitionedGraph(Graph(n, tuple(masks)), pg.parts)


def rebalance_step(pg: PartitionedGraph) -> tuple[PartitionedGraph, RebalanceMove]:
    """Move one vertex from a largest part to a smallest part.

    The highest-labelled vertex ``a`` of the largest part ``A`` is deleted
    (labels above it shift down) and a clone ``b`` adjacent to everything
    outside the smallest part ``B'`` is appended as vertex ``n - 1``.
    """
    if not pg.is_complete():
        raise GraphError("rebalance_step needs a complete multipartite graph")
    sizes = pg.sizes
    if not sizes:
        raise AlreadyBalanced("no parts")
    src = max(range(len(sizes)), key=lambda i: (sizes[i], -i))
    dst = min(range(len(sizes)), key=lambda i: (sizes[i], i))
    if sizes[src] < sizes[dst] + 2:
        raise AlreadyBalanced(f"part sizes {sizes} are balanced")
    a = max(pg.parts[src])
    n = pg.graph.n

    def shift(v):
        return v - 1 if v > a else v

    parts = [[shift(v) for v in part if v != a] for part in pg.parts]
    parts[dst].append(n - 1)
    pm_parts = tuple(tuple(sorted(p)) for p in parts)
    full = (1 << n) - 1
    masks = [0] * n
    for part in pm_parts:
        pm = sum(1 << v for v in part)
        for v in part:
            masks[v] = full & ~pm
    out = PartitionedGraph(Graph(n, tuple(masks)), pm_parts)
    move = RebalanceMove(src, dst, a, n - 1, sizes[src], sizes[dst] + 1)
    return out, move


def is_balanced(sizes) -> bool:
    return not sizes or max(sizes) - min(sizes) <= 1
