"""Small-graph enumeration, exhaustive extremal search and the proof-pipeline trace."""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from . import jsonio, kernels
from .graph import (
    Graph,
    Graph6Error,
    PartitionedGraph,
    duplicate_vertex,
    is_kfree,
    make_graph,
    parse_graph6,
    turan_edge_count,
    turan_graph,
    turan_sizes,
    write_graph6,
)
from .homcount import PatternGraph, count_copies, count_inj, default_threads
from .lemmas import (
    HypothesisViolation,
    check_edge_loss_bound,
    check_furedi,
    check_rebalance,
    check_rpartite,
    per_vertex_counts,
)
from .partite import (
    fill_to_complete_multipartite,
    is_balanced,
    max_r_partite_exact,
    maximal_completion,
    rebalance_step,
)

log = logging.getLogger(__name__)

MAX_ENUM_N = 8
# Above this, maximizers are deduplicated by their literal graph6 only.
MAX_CANON_N = 12


class CorpusError(ValueError):
    pass


# -- canonical forms --------------------------------------------------------


def canonical_form(G: Graph) -> tuple[int, list[int]]:
    """Canonical code and the vertex order that realises it.

    The code is the least column-order adjacency bit string (graph6 bit
    order) over all vertex orders sorted by degree.  Isomorphic graphs get
    equal codes.
    """
    if G.n > 62:
        raise ValueError("canonical form supports n <= 62")
    A = G.adjacency_matrix()
    deg = A.sum(axis=1) if G.n else np.zeros(0, dtype=np.int64)
    best, perm = kernels.canon_kernel(A, deg, np.sort(deg))
    code = 0
    for j in range(1, G.n):
        code = (code << j) | int(best[j])
    return code, [int(p) for p in perm]


def canonical_code(G: Graph) -> int:
    return canonical_form(G)[0]


def canonical_graph(G: Graph) -> Graph:
    return G.relabel(canonical_form(G)[1])


def decode_code(n: int, code: int) -> Graph:
    L = n * (n - 1) // 2
    edges, t = [], 0
    for j in range(1, n):
        for i in range(j):
            if code >> (L - 1 - t) & 1:
                edges.append((i, j))
            t += 1
    return make_graph(n, edges)


def enumerate_graphs(n: int) -> list[Graph]:
    """One canonically labelled graph per isomorphism class, sorted by code."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_ENUM_N:
        raise ValueError(f"internal enumeration is limited to n <= {MAX_ENUM_N}; use a corpus file")
    level = [make_graph(0)]
    for m in range(1, n + 1):
        codes = set()
        for parent in level:
            codes.update(int(c) for c in kernels.extension_codes_kernel(parent.adjacency_matrix()))
        level = [decode_code(m, c) for c in sorted(codes)]
    return level


# -- graph sources ----------------------------------------------------------


@dataclass(frozen=True)
class GraphSource:
    """Either the internal enumeration or a graph6 corpus file."""

    path: Optional[str] = None
    lenient: bool = False

    @classmethod
    def internal(cls) -> "GraphSource":
        return cls()

    @classmethod
    def corpus(cls, path: str, lenient: bool = False) -> "GraphSource":
        return cls(path, lenient)

    def graphs(self, n: int) -> Iterator[Graph]:
        if self.path is None:
            yield from enumerate_graphs(n)
        else:
            yield from read_corpus(self.path, self.lenient)


def read_corpus(path: str, lenient: bool = False) -> Iterator[Graph]:
    with open(path, encoding="ascii", errors="replace") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text == ">>graph6<<":
                continue
            try:
                yield parse_graph6(text)
            except Graph6Error as exc:
                msg = f"{path}:{lineno}: {exc}"
                if not lenient:
                    raise CorpusError(msg) from exc
                log.warning("skipping %s", msg)


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# -- extremal search --------------------------------------------------------


@dataclass
class SearchResult:
    pattern: str
    r: int
    n: int
    max_copies: int
    maximizers: list[str]
    turan_value: int
    turan_is_max: bool
    scanned: int
    kfree: int
    certified: Optional[bool] = None
    certificate: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "r": self.r,
            "n": self.n,
            "max_copies": self.max_copies,
            "maximizers": self.maximizers,
            "turan_value": self.turan_value,
            "turan_is_max": self.turan_is_max,
            "scanned": self.scanned,
            "kfree": self.kfree,
            "certified": self.certified,
            "certificate": self.certificate,
        }

    def to_json(self) -> str:
        return jsonio.dumps(self.to_dict())


def _label(G: Graph) -> str:
    return write_graph6(canonical_graph(G) if G.n <= MAX_CANON_N else G)


def search_extremal(H, r: int, n: int, source: Optional[GraphSource] = None, threads=None) -> SearchResult:
    """Maximum number of copies of ``H`` over the ``K_{r+1}``-free graphs of a source."""
    P = PatternGraph.of(H)
    source = source or GraphSource.internal()
    threads = default_threads() if threads is None else threads
    graphs = []
    scanned = 0
    for G in source.graphs(n):
        if G.n != n:
            raise CorpusError(f"source graph has {G.n} vertices, expected {n}")
        scanned += 1
        graphs.append(G)

    def score(G):
        if not is_kfree(G, r + 1):
            return None
        return count_copies(P, G, threads=1)

    scores = _pmap(score, graphs, threads)
    admissible = [(s, G) for s, G in zip(scores, graphs) if s is not None]
    best = max((s for s, _ in admissible), default=0)
    maximizers = sorted({_label(G) for s, G in admissible if s == best})
    turan_value = count_copies(P, turan_graph(r, n).graph, threads=threads)
    return SearchResult(
        pattern=write_graph6(P.graph),
        r=r,
        n=n,
        max_copies=best,
        maximizers=maximizers,
        turan_value=turan_value,
        # With an incomplete corpus the Turán graph may be absent; it still counts.
        turan_is_max=turan_value >= best,
        scanned=scanned,
        kfree=len(admissible),
    )


def certify_turan_good_at(H, r: int, n: int, source: Optional[GraphSource] = None, threads=None) -> SearchResult:
    """Search, then audit every maximizer with the extremal-graph vertex bounds.

    For each maximizer ``G`` and every vertex ``v`` this asserts
    ``ii(v) >= max_u ii(u) - v(H)^2 n^(v(H)-2)``.  For the internal source
    (a complete list of K_{r+1}-free graphs) it also asserts that no twin
    substitution ``duplicate_vertex(G, v0, v)`` beats ``G``.
    """
    P = PatternGraph.of(H)
    source = source or GraphSource.internal()
    res = search_extremal(P, r, n, source, threads)
    if not res.turan_is_max:
        res.certified = False
        return res
    k = P.n
    slack_bound = Fraction(k * k) * Fraction(n) ** (k - 2) if n else Fraction(0)
    ok = True
    vertex_checks = twin_checks = 0
    for g6 in res.maximizers:
        G = parse_graph6(g6)
        ii = per_vertex_counts(P, G)
        top = max(ii, default=0)
        vertex_checks += len(ii)
        ok &= all(x >= top - slack_bound for x in ii)
        if source.path is None:
            inj = count_inj(P, G, threads=1)
            for v0 in range(n):
                for v in range(n):
                    if v0 != v:
                        twin_checks += 1
                        ok &= count_inj(P, duplicate_vertex(G, v0, v), threads=1) <= inj
    res.certified = bool(ok)
    res.certificate = {"vertex_checks": vertex_checks, "twin_checks": twin_checks, "slack_bound": slack_bound}
    return res


# -- proof pipeline trace ---------------------------------------------------


@dataclass
class TransformTrace:
    pattern: str
    r: int
    n: int
    steps: list[dict]
    final: str
    final_is_turan: bool
    final_inj: int
    turan_inj: int

    @property
    def rebalances(self) -> int:
        return sum(1 for s in self.steps if s["op"] == "rebalance")

    def checks(self) -> list[dict]:
        return [c for s in self.steps for c in s["checks"]]

    @property
    def ok(self) -> bool:
        return (
            self.final_is_turan
            and self.final_inj == self.turan_inj
            and all(c.get("verdict", "PASS") == "PASS" for c in self.checks())
        )

    def to_dict(self) -> dict:
        return {
            "pattern": self.pattern,
            "r": self.r,
            "n": self.n,
            "steps": self.steps,
            "final": self.final,
            "final_is_turan": self.final_is_turan,
            "final_inj": self.final_inj,
            "turan_inj": self.turan_inj,
            "ok": self.ok,
        }

    def to_json(self) -> str:
        return jsonio.dumps(self.to_dict())


def _attempt(fn, *args) -> dict:
    try:
        return fn(*args).to_dict()
    except HypothesisViolation as exc:
        return {"lemma_id": exc.lemma_id, "status": "skipped: hypothesis", "hypothesis": exc.hypothesis}


def _step(op, P, before: Graph, after: Graph, checks) -> dict:
    return {
        "op": op,
        "before": write_graph6(before),
        "after": write_graph6(after),
        "e_before": before.num_edges,
        "e_after": after.num_edges,
        "inj_before": count_inj(P, before, threads=1),
        "inj_after": count_inj(P, after, threads=1),
        "checks": checks,
    }


def _is_turan(pg: PartitionedGraph, r: int) -> bool:
    return pg.is_complete() and sorted(pg.sizes) == sorted(turan_sizes(r, pg.graph.n))


def transform_trace(H, G: Graph, r: int) -> TransformTrace:
    """Walk ``G`` to ``T_r(n)``: decompose, complete, fill, then rebalance."""
    P = PatternGraph.of(H)
    if P.num_edges < 1:
        raise HypothesisViolation("trace", "e(H) >= 1")
    if not is_kfree(G, r + 1):
        raise HypothesisViolation("trace", f"G is K_{r + 1}-free")
    n = G.n
    steps = []
    turan_inj = count_inj(P, turan_graph(r, n).graph, threads=1)
    if G.num_edges == turan_edge_count(r, n):
        # Turán's theorem: a K_{r+1}-free graph with this many edges is T_r(n).
        return TransformTrace(write_graph6(P.graph), r, n, steps, write_graph6(G), True,
                              count_inj(P, G, threads=1), turan_inj)

    dec = max_r_partite_exact(G, r)
    G0 = dec.subgraph.graph
    steps.append(_step("furedi-decompose", P, G, G0, [
        _attempt(check_furedi, G, r),
        _attempt(check_edge_loss_bound, P, G, G0),
    ]))
    dec2 = maximal_completion(dec)
    steps.append(_step("complete-maximal", P, G0, dec2.subgraph.graph, [
        _attempt(check_edge_loss_bound, P, G, dec2.subgraph.graph),
    ]))
    pg = fill_to_complete_multipartite(dec2.subgraph)
    steps.append(_step("fill-edges", P, dec2.subgraph.graph, pg.graph, [
        _attempt(check_rpartite, P, dec2.subgraph),
    ]))
    while not is_balanced(pg.sizes):
        nxt, move = rebalance_step(pg)
        A = list(pg.parts[move.source])
        Bp = set(pg.parts[move.target])
        augmented = pg.graph.with_vertex(v for v in range(n) if v not in Bp)
        B = sorted(Bp) + [n]
        steps.append(_step("rebalance", P, pg.graph, nxt.graph, [
            _attempt(check_rebalance, P, augmented, A, B),
        ]))
        pg = nxt
    return TransformTrace(
        write_graph6(P.graph), r, n, steps, write_graph6(pg.graph), _is_turan(pg, r),
        count_inj(P, pg.graph, threads=1), turan_inj,
    )
