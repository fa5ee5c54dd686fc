"""Exact counts of injective homomorphisms and subgraph copies."""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from . import _accel, kernels
from .graph import Graph

BRUTE_BUDGET = 10**8
# Hosts smaller than this are never split across threads.
SPLIT_MIN_N = 32
# Running-total ceiling for the compiled kernel; the Python backend uses ints.
OVERFLOW_LIMIT = kernels.INT64_MAX if _accel.JIT else -1


class CountingError(RuntimeError):
    """Internal inconsistency between counts (indicates a bug)."""


class BudgetExceeded(RuntimeError):
    pass


class InvalidPartialMap(ValueError):
    pass


_threads_override = None


def set_default_threads(threads) -> None:
    """Process-wide thread count; ``None`` restores the environment default."""
    global _threads_override
    _threads_override = None if threads is None else max(1, int(threads))


def default_threads() -> int:
    if _threads_override is not None:
        return _threads_override
    env = os.environ.get("TURANLAB_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def counting_order(H: Graph) -> tuple[int, ...]:
    """Connected-first vertex order used by the backtracking counter.

    Components go largest first (ties: smallest label).  Each component
    starts at a maximum-degree vertex and then greedily takes the vertex with
    the most already-placed neighbours, ties by label.
    """
    seen, comps = set(), []
    for s in range(H.n):
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in H.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    order = []
    for comp in comps:
        start = max(comp, key=lambda u: (H.degree(u), -u))
        placed = {start}
        order.append(start)
        rest = [u for u in comp if u != start]
        while rest:
            u = max(rest, key=lambda x: (len(H.neighbors(x) & placed), -x))
            rest.remove(u)
            placed.add(u)
            order.append(u)
    return tuple(order)


@dataclass(frozen=True)
class PatternGraph:
    graph: Graph
    order: tuple[int, ...]

    @classmethod
    def of(cls, H: Union[Graph, "PatternGraph"]) -> "PatternGraph":
        if isinstance(H, PatternGraph):
            return H
        return cls(H, counting_order(H))

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges


def _plan(H: Graph, order):
    """Back-neighbour table for an order of V(H)."""
    k = len(order)
    pos = {u: i for i, u in enumerate(order)}
    back = np.zeros((k, max(k, 1)), dtype=np.int64)
    nback = np.zeros(k, dtype=np.int64)
    for i, u in enumerate(order):
        earlier = sorted(pos[w] for w in H.neighbors(u) if pos[w] < i)
        nback[i] = len(earlier)
        back[i, : len(earlier)] = earlier
    return back, nback


def _run(adj, active, back, nback, pin):
    """Exact count.  Overflowing subtrees are split on the next free position."""
    total, over = kernels.count_inj_kernel(adj, active, back, nback, pin, OVERFLOW_LIMIT)
    if not over:
        return int(total)
    free = int(np.argmax(pin < 0))
    result = 0
    for v in range(adj.shape[0]):
        sub = pin.copy()
        sub[free] = v
        result += _run(adj, active, back, nback, sub)
    return result


def _count(H: Graph, order, G: Graph, pins=(), exclude=(), threads=None) -> int:
    k = len(order)
    if k == 0:
        return 1
    active = G.active_bitset(exclude)
    if k > G.n - len(set(exclude)):
        return 0
    back, nback = _plan(H, order)
    pin = np.full(k, -1, dtype=np.int64)
    pin[: len(pins)] = pins
    adj = G.bitset
    threads = default_threads() if threads is None else threads
    if threads > 1 and G.n >= SPLIT_MIN_N and len(pins) < k:
        free = len(pins)
        subs = []
        for v in range(G.n):
            sub = pin.copy()
            sub[free] = v
            subs.append(sub)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(lambda p: _run(adj, active, back, nback, p), subs))
        return sum(parts)
    return _run(adj, active, back, nback, pin)


def count_inj(H, G: Graph, threads=None) -> int:
    """Number of injective homomorphisms from ``H`` into ``G``."""
    P = PatternGraph.of(H)
    return _count(P.graph, P.order, G, threads=threads)


def count_inj_avoiding(H, G: Graph, vertices, threads=None) -> int:
    """Injective homomorphisms whose image misses every vertex in ``vertices``."""
    P = PatternGraph.of(H)
    return _count(P.graph, P.order, G, exclude=tuple(vertices), threads=threads)


def count_inj_brute(H, G: Graph, budget: int = BRUTE_BUDGET, chunk: int = 1 << 18) -> int:
    """Oracle: enumerate all ``n^k`` maps V(H) -> V(G) and filter.

    Works on the dense adjacency matrix in chunks of map indices, sharing
    nothing with the bitset counter.
    """
    H = H.graph if isinstance(H, PatternGraph) else H
    k, n = H.n, G.n
    total = n**k
    if total > budget:
        raise BudgetExceeded(f"{n}^{k} maps exceeds budget {budget}")
    if k == 0:
        return 1
    A = G.adjacency_matrix().astype(bool)
    edges = H.edges()
    pairs = list(itertools.combinations(range(k), 2))
    count = 0
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        phi = np.empty((k, idx.size), dtype=np.int64)
        for i in range(k):
            phi[i] = idx % n
            idx //= n
        ok = np.ones(phi.shape[1], dtype=bool)
        for u, v in pairs:
            ok &= phi[u] != phi[v]
        for u, v in edges:
            ok &= A[phi[u], phi[v]]
        count += int(ok.sum())
    return count


def aut_count(H) -> int:
    H = H.graph if isinstance(H, PatternGraph) else H
    return count_inj(H, H, threads=1)


def count_copies(H, G: Graph, threads=None) -> int:
    """Number of subgraphs of ``G`` isomorphic to ``H``."""
    inj = count_inj(H, G, threads=threads)
    aut = aut_count(H)
    q, rem = divmod(inj, aut)
    if rem:
        raise CountingError(f"inj={inj} is not divisible by |Aut(H)|={aut}")
    return q


def count_inj_through(H, G: Graph, v: int, threads=None) -> int:
    """Injective homomorphisms whose image contains ``v``."""
    if not 0 <= v < G.n:
        raise ValueError(f"vertex {v} out of range")
    return count_inj(H, G, threads) - count_inj_avoiding(H, G, (v,), threads)


def validate_partial_map(H: Graph, G: Graph, pm: Mapping[int, int]) -> None:
    images = list(pm.values())
    for u, x in pm.items():
        if not 0 <= u < H.n:
            raise InvalidPartialMap(f"pattern vertex {u} out of range")
        if not 0 <= x < G.n:
            raise InvalidPartialMap(f"host vertex {x} out of range")
    if len(set(images)) != len(images):
        raise InvalidPartialMap("partial map is not injective")
    for u, w in H.edges():
        if u in pm and w in pm and not G.has_edge(pm[u], pm[w]):
            raise InvalidPartialMap(f"edge {u}-{w} of H[X] maps to a non-edge")


def count_extensions(H, G: Graph, pm: Mapping[int, int], threads=None) -> int:
    """Injective homomorphisms ``phi`` with ``phi`` restricted to ``X`` equal to ``pm``."""
    P = PatternGraph.of(H)
    validate_partial_map(P.graph, G, pm)
    X = sorted(pm)
    order = tuple(X) + tuple(u for u in P.order if u not in pm)
    return _count(P.graph, order, G, pins=[pm[u] for u in X], threads=threads)
