"""Simple undirected graphs on dense integer labels.

A :class:`Graph` stores one neighbour bitmask per vertex as a Python int.
Kernels see the same rows packed into a ``uint64[n, W]`` array, built once per
graph and cached.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import kernels


class GraphError(ValueError):
    """Invalid graph data (bad endpoints, loops, inconsistent partitions)."""


class Graph6Error(ValueError):
    """Malformed graph6 text."""


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class Graph:
    n: int
    masks: tuple[int, ...]

    def __post_init__(self):
        if len(self.masks) != self.n:
            raise GraphError("need one adjacency mask per vertex")

    # -- basic queries -------------------------------------------------

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(_bits(self.masks[v]))

    def degree(self, v: int) -> int:
        return self.masks[v].bit_count()

    def degrees(self) -> list[int]:
        return [m.bit_count() for m in self.masks]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.masks[u] >> v & 1)

    @cached_property
    def num_edges(self) -> int:
        return sum(self.degrees()) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.masks[u] >> (u + 1) << (u + 1))]

    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def bitset(self) -> np.ndarray:
        """Rows packed as ``uint64[n, W]`` (``W >= 1``)."""
        W = max(1, (self.n + 63) // 64)
        out = np.zeros((self.n, W), dtype=np.uint64)
        for v, m in enumerate(self.masks):
            if m:
                out[v] = np.frombuffer(m.to_bytes(8 * W, "little"), dtype="<u8")
        return out

    def active_bitset(self, exclude: Iterable[int] = ()) -> np.ndarray:
        mask = (1 << self.n) - 1
        for v in exclude:
            mask &= ~(1 << v)
        W = max(1, (self.n + 63) // 64)
        return np.frombuffer(mask.to_bytes(8 * W, "little"), dtype="<u8").copy()

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            A[u, v] = A[v, u] = 1
        return A

    # -- derived graphs ------------------------------------------------

    def add_edge(self, u: int, v: int) -> Graph:
        _check_pair(self.n, u, v)
        masks = list(self.masks)
        masks[u] |= 1 << v
        masks[v] |= 1 << u
        return Graph(self.n, tuple(masks))

    def remove_edge(self, u: int, v: int) -> Graph:
        _check_pair(self.n, u, v)
        masks = list(self.masks)
        masks[u] &= ~(1 << v)
        masks[v] &= ~(1 << u)
        return Graph(self.n, tuple(masks))

    def induced(self, vertices: Sequence[int]) -> Graph:
        """Subgraph induced on ``vertices``, relabelled ``0..len-1`` in the given order."""
        pos = {v: i for i, v in enumerate(vertices)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        return make_graph(len(vertices), edges)

    def remove_vertex(self, v: int) -> Graph:
        """Delete ``v``; labels above ``v`` shift down by one."""
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range")
        return self.induced([u for u in range(self.n) if u != v])

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Graph in which new vertex ``i`` is old vertex ``perm[i]``."""
        return self.induced(list(perm))

    def with_vertex(self, neighbors: Iterable[int]) -> Graph:
        """Append vertex ``n`` adjacent to ``neighbors``."""
        nb = set(neighbors)
        edges = self.edges() + [(u, self.n) for u in sorted(nb)]
        return make_graph(self.n + 1, edges)

    def complement(self) -> Graph:
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~m & ~(1 << v) for v, m in enumerate(self.masks)))

    def is_subgraph_of(self, other: Graph) -> bool:
        return self.n == other.n and all(m & ~o == 0 for m, o in zip(self.masks, other.masks))

    def __repr__(self):
        return f"Graph(n={self.n}, e={self.num_edges})"


def _check_pair(n, u, v):
    if not (0 <= u < n and 0 <= v < n):
        raise GraphError(f"endpoint out of range in ({u}, {v}) for n={n}")
    if u == v:
        raise GraphError(f"loop at vertex {u}")


def make_graph(n: int, edges: Iterable[tuple[int, int]] = ()) -> Graph:
    if n < 0:
        raise GraphError("vertex count must be non-negative")
    masks = [0] * n
    for u, v in edges:
        _check_pair(n, u, v)
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return Graph(n, tuple(masks))


def complete_graph(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return make_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# -- partitioned graphs -------------------------------------------------


@dataclass(frozen=True)
class PartitionedGraph:
    """A graph together with an ordered partition of V into independent sets."""

    graph: Graph
    parts: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        seen = 0
        for part in self.parts:
            pm = 0
            for v in part:
                if not 0 <= v < self.graph.n:
                    raise GraphError(f"part vertex {v} out of range")
                if (seen | pm) >> v & 1:
                    raise GraphError(f"vertex {v} appears in two parts")
                pm |= 1 << v
            for v in part:
                if self.graph.masks[v] & pm:
                    raise GraphError(f"part {sorted(part)} is not independent")
            seen |= pm
        if seen != (1 << self.graph.n) - 1:
            raise GraphError("parts do not cover the vertex set")

    @property
    def r(self) -> int:
        return len(self.parts)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(p) for p in self.parts)

    def part_of(self) -> list[int]:
        where = [0] * self.graph.n
        for i, part in enumerate(self.parts):
            for v in part:
                where[v] = i
        return where

    def is_complete(self) -> bool:
        n = self.graph.n
        return 2 * self.graph.num_edges == n * n - sum(s * s for s in self.sizes)


def _block_parts(sizes: Sequence[int]) -> list[tuple[int, ...]]:
    parts, start = [], 0
    for s in sizes:
        parts.append(tuple(range(start, start + s)))
        start += s
    return parts


def complete_multipartite(sizes: Sequence[int]) -> PartitionedGraph:
    """Complete multipartite graph; parts are laid out largest first."""
    if any(s < 0 for s in sizes):
        raise GraphError("part sizes must be non-negative")
    sizes = sorted(sizes, reverse=True)
    n = sum(sizes)
    parts = _block_parts(sizes)
    full = (1 << n) - 1
    masks = [0] * n
    for part in parts:
        pm = sum(1 << v for v in part)
        for v in part:
            masks[v] = full & ~pm
    return PartitionedGraph(Graph(n, tuple(masks)), tuple(parts))


def turan_sizes(r: int, n: int) -> list[int]:
    if r < 1:
        raise GraphError("Turán graph needs r >= 1")
    q, s = divmod(n, r)
    return [q + 1] * s + [q] * (r - s)


def turan_graph(r: int, n: int) -> PartitionedGraph:
    return complete_multipartite(turan_sizes(r, n))


def turan_edge_count(r: int, n: int) -> int:
    if r < 1:
        raise GraphError("Turán graph needs r >= 1")
    q, s = divmod(n, r)
    return (n * n - s * (q + 1) ** 2 - (r - s) * q * q) // 2


# -- predicates ---------------------------------------------------------


def has_clique(G: Graph, k: int) -> bool:
    if k <= 0:
        return True
    if k > G.n:
        return False
    return bool(kernels.has_clique_kernel(G.bitset, G.active_bitset(), k))


def is_kfree(G: Graph, k: int) -> bool:
    """True iff ``G`` has no clique on ``k`` vertices."""
    if k < 1:
        raise GraphError("clique order must be >= 1")
    return not has_clique(G, k)


def clique_number(G: Graph) -> int:
    k = 0
    while k < G.n and has_clique(G, k + 1):
        k += 1
    return k


def density_deficit(G: Graph) -> Fraction:
    """Least delta with every degree >= (1 - delta) * n."""
    if G.n == 0:
        raise GraphError("density is undefined for the empty graph")
    return Fraction(G.n - min(G.degrees()), G.n)


def duplicate_vertex(G: Graph, v0: int, v: int) -> Graph:
    """Replace ``v`` by a non-adjacent twin of ``v0``.

    The clone keeps label ``v``; its neighbourhood is ``N(v0) - {v}``.
    """
    if v0 == v:
        raise GraphError("v0 and v must differ")
    if not (0 <= v0 < G.n and 0 <= v < G.n):
        raise GraphError("vertex out of range")
    bit = 1 << v
    clone = G.masks[v0] & ~bit
    masks = [m & ~bit for m in G.masks]
    masks[v] = clone
    for w in _bits(clone):
        masks[w] |= bit
    return Graph(G.n, tuple(masks))


# -- graph6 -------------------------------------------------------------

_G6_HEADER = ">>graph6<<"
_G6_MAX_N = 68719476735


def _encode_n(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    if n <= _G6_MAX_N:
        return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))
    raise Graph6Error(f"n={n} too large for graph6")


def write_graph6(G: Graph) -> str:
    out = [_encode_n(G.n)]
    acc = nbits = 0
    for j in range(1, G.n):
        col = G.masks[j]
        for i in range(j):
            acc = (acc << 1) | (col >> i & 1)
            nbits += 1
            if nbits == 6:
                out.append(chr(acc + 63))
                acc = nbits = 0
    if nbits:
        out.append(chr((acc << (6 - nbits)) + 63))
    return "".join(out)


def parse_graph6(text: str) -> Graph:
    s = text.rstrip("\r\n")
    if s.startswith(_G6_HEADER):
        s = s[len(_G6_HEADER):]
    if not s:
        raise Graph6Error("empty graph6 string")
    for ch in s:
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"non-graph6 character {ch!r}")
    vals = [ord(ch) - 63 for ch in s]
    if vals[0] != 63:
        n, pos = vals[0], 1
    elif len(vals) >= 2 and vals[1] != 63:
        if len(vals) < 4:
            raise Graph6Error("truncated length header")
        n = (vals[1] << 12) | (vals[2] << 6) | vals[3]
        pos = 4
        if n <= 62:
            raise Graph6Error("non-minimal length header")
    else:
        if len(vals) < 8:
            raise Graph6Error("truncated length header")
        n = 0
        for x in vals[2:8]:
            n = (n << 6) | x
        pos = 8
        if n <= 258047:
            raise Graph6Error("non-minimal length header")
    nbits = n * (n - 1) // 2
    need = (nbits + 5) // 6
    payload = vals[pos:]
    if len(payload) != need:
        raise Graph6Error(f"payload has {len(payload)} bytes, expected {need} for n={n}")
    masks = [0] * n
    t = 0
    for j in range(1, n):
        for i in range(j):
            if payload[t // 6] >> (5 - t % 6) & 1:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
            t += 1
    pad = 6 * need - nbits
    if pad and payload[-1] & ((1 << pad) - 1):
        raise Graph6Error("non-zero padding bits")
    return Graph(n, tuple(masks))
