"""Exact checkers for the counting inequalities, plus seeded instance generators.

Every checker returns a :class:`LemmaReport` oriented so that ``lhs >= rhs``
means PASS.  Inputs that violate a checker's hypotheses raise
:class:`HypothesisViolation`; they are never reported as failures.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

from . import jsonio
from .graph import (
    Graph,
    PartitionedGraph,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    density_deficit,
    duplicate_vertex,
    is_kfree,
    make_graph,
    path_graph,
    star_graph,
    turan_edge_count,
    turan_graph,
    write_graph6,
)
from .homcount import (
    PatternGraph,
    count_extensions,
    count_inj,
    count_inj_avoiding,
    validate_partial_map,
)
from .partite import max_r_partite_exact

QUARTER = Fraction(1, 4)

LEMMA_IDS = (
    "lowerbound",
    "dense-hom",
    "xyp",
    "rebalance",
    "rpartite",
    "furedi",
    "vertex-bounds",
    "duplication",
    "edge-loss",
)


class HypothesisViolation(ValueError):
    def __init__(self, lemma_id: str, hypothesis: str):
        super().__init__(f"{lemma_id}: hypothesis violated: {hypothesis}")
        self.lemma_id = lemma_id
        self.hypothesis = hypothesis


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: str
    lhs: Fraction
    rhs: Fraction
    params: dict = field(default_factory=dict)
    substantive: bool = False
    reproducer: dict = field(default_factory=dict)

    @property
    def slack(self) -> Fraction:
        return Fraction(self.lhs) - Fraction(self.rhs)

    @property
    def passed(self) -> bool:
        return self.slack >= 0

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_dict(self) -> dict:
        s = self.slack
        return {
            "lemma_id": self.lemma_id,
            "params": self.params,
            "lhs": Fraction(self.lhs),
            "rhs": Fraction(self.rhs),
            "slack_sign": (s > 0) - (s < 0),
            "verdict": self.verdict,
            "substantive": self.substantive,
            "reproducer": self.reproducer,
        }

    def to_json(self) -> str:
        return jsonio.dumps(self.to_dict())


def _g(H):
    return H.graph if isinstance(H, PatternGraph) else H


def _require(ok, lemma_id, what):
    if not ok:
        raise HypothesisViolation(lemma_id, what)


def _delta(G: Graph, lemma_id: str) -> Fraction:
    _require(G.n >= 1, lemma_id, "host graph has at least one vertex")
    return density_deficit(G)


def _pow(n: int, e: int) -> Fraction:
    return Fraction(n) ** e


# -- dense-host bounds ----------------------------------------------------


def check_extension_bound(H, G: Graph, pm: Mapping[int, int]) -> LemmaReport:
    """Extensions of a partial injective homomorphism into a dense host."""
    lid = "lowerbound"
    H = _g(H)
    validate_partial_map(H, G, pm)
    delta = _delta(G, lid)
    k = H.n - len(pm)
    lhs = count_extensions(H, G, pm)
    rhs = (1 - delta * k * H.n) * _pow(G.n, k)
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"delta": delta, "k": k, "vH": H.n, "n": G.n},
        rhs > 0,
        {"H": write_graph6(H), "G": write_graph6(G), "pm": sorted(pm.items())},
    )


def check_dense_hom_bound(H, G: Graph) -> LemmaReport:
    lid = "dense-hom"
    H = _g(H)
    delta = _delta(G, lid)
    lhs = count_inj(H, G)
    rhs = (1 - delta * H.n**2) * _pow(G.n, H.n)
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"delta": delta, "vH": H.n, "n": G.n},
        rhs > 0,
        {"H": write_graph6(H), "G": write_graph6(G)},
    )


def check_xyp(x, y, p: int) -> LemmaReport:
    """``(1 - x)(1 - y)^p >= 1 - x - p*y`` for ``x >= 0`` and ``0 <= y <= 1``."""
    lid = "xyp"
    x, y = Fraction(x), Fraction(y)
    _require(x >= 0 and y >= 0, lid, "x, y >= 0")
    # y > 1 with odd p breaks the inequality, e.g. (0, 14/5, 5)
    _require(y <= 1, lid, "y <= 1")
    _require(int(p) == p and p >= 0, lid, "p is a non-negative integer")
    lhs = (1 - x) * (1 - y) ** p
    rhs = 1 - x - p * y
    return LemmaReport(lid, lhs, rhs, {"x": x, "y": y, "p": p}, rhs > 0, {"x": x, "y": y, "p": p})


def _rebalance_hypotheses(H: Graph, G: Graph, A, B, lid="rebalance") -> Fraction:
    _require(H.num_edges >= 1, lid, "e(H) >= 1")
    A, B = set(A), set(B)
    _require(all(0 <= v < G.n for v in A | B), lid, "A, B are vertex sets of G")
    _require(not (A & B), lid, "A and B are disjoint")
    _require(len(A) >= len(B) >= 1, lid, "|A| >= |B| >= 1")
    for name, S in (("A", A), ("B", B)):
        sm = sum(1 << v for v in S)
        rest = ((1 << G.n) - 1) & ~sm
        for v in S:
            _require(G.masks[v] & sm == 0, lid, f"{name} is independent")
            _require(G.masks[v] & rest == rest, lid, f"every vertex of {name} is adjacent to all of V-{name}")
    delta = _delta(G, lid)
    _require(0 < delta <= QUARTER, lid, "0 < delta <= 1/4")
    return delta


def check_rebalance(H, G: Graph, A, B) -> LemmaReport:
    """Deleting from the larger of two fully joined independent sets costs less."""
    lid = "rebalance"
    H = _g(H)
    delta = _rebalance_hypotheses(H, G, A, B)
    GA = G.remove_vertex(max(A))
    GB = G.remove_vertex(max(B))
    lhs = count_inj(H, GA)
    correction = 2 * H.num_edges * (len(A) - len(B)) * (1 - 3 * delta * H.n**3) * _pow(G.n, H.n - 2)
    rhs = count_inj(H, GB) + correction
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"delta": delta, "vH": H.n, "eH": H.num_edges, "A": len(A), "B": len(B), "n": G.n,
         "correction": correction},
        correction > 0,
        {"H": write_graph6(H), "G": write_graph6(G), "A": sorted(A), "B": sorted(B)},
    )


def rebalance_delta_terms(H, G: Graph, A, B) -> dict[frozenset, int]:
    """Per-subset differences ``|INJ_S(H, G_A)| - |INJ_S(H, G_B)|``.

    ``S`` ranges over subsets of V(H) mapped into ``A | B``; the values sum to
    ``count_inj(H, G_A) - count_inj(H, G_B)``.  Debug aid for localising a
    failing rebalance check.
    """
    H = _g(H)
    _rebalance_hypotheses(H, G, A, B)
    a, b = max(A), max(B)
    AB = sorted(set(A) | set(B))
    rest = [v for v in range(G.n) if v not in set(AB)]
    G0 = G.induced(rest)
    G1a = G.induced([v for v in AB if v != a])
    G1b = G.induced([v for v in AB if v != b])
    out = {}
    for size in range(H.n + 1):
        for S in itertools.combinations(range(H.n), size):
            HS = H.induced(S)
            Hrest = H.induced([u for u in range(H.n) if u not in S])
            diff = count_inj(HS, G1a) - count_inj(HS, G1b)
            out[frozenset(S)] = diff * count_inj(Hrest, G0) if diff else 0
    return out


def check_rpartite(H, pg: PartitionedGraph) -> LemmaReport:
    """The Turán graph beats a dense r-partite graph by the edge deficit."""
    lid = "rpartite"
    H = _g(H)
    G = pg.graph
    _require(H.num_edges >= 1, lid, "e(H) >= 1")
    _require(pg.r >= 1, lid, "at least one part")
    delta = _delta(G, lid)
    _require(0 < delta <= QUARTER, lid, "0 < delta <= 1/4")
    T = turan_graph(pg.r, G.n).graph
    deficit = turan_edge_count(pg.r, G.n) - G.num_edges
    lhs = count_inj(H, T) - count_inj(H, G)
    rhs = 2 * H.num_edges * (1 - 3 * delta * H.n**3) * deficit * _pow(G.n, H.n - 2)
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"delta": delta, "vH": H.n, "eH": H.num_edges, "r": pg.r, "n": G.n, "edge_deficit": deficit},
        rhs > 0,
        {"H": write_graph6(H), "G": write_graph6(G), "parts": [list(p) for p in pg.parts]},
    )


# -- extremal-graph bounds ------------------------------------------------


def check_furedi(G: Graph, r: int, budget=None) -> LemmaReport:
    """Exact max r-partite subgraph loses at most ``e(T_r(n)) - e(G)`` edges."""
    lid = "furedi"
    _require(r >= 1, lid, "r >= 1")
    _require(is_kfree(G, r + 1), lid, f"G is K_{r + 1}-free")
    kw = {} if budget is None else {"budget": budget}
    dec = max_r_partite_exact(G, r, **kw)
    lhs = turan_edge_count(r, G.n) - G.num_edges
    rhs = dec.dropped_edges
    return LemmaReport(
        lid, Fraction(lhs), Fraction(rhs),
        {"r": r, "n": G.n, "e": G.num_edges, "dropped": rhs},
        lhs < G.num_edges,
        {"G": write_graph6(G), "r": r},
    )


def per_vertex_counts(H, G: Graph) -> list[int]:
    """``ii(v)`` for every vertex: injective homomorphisms through ``v``."""
    total = count_inj(H, G)
    return [total - count_inj_avoiding(H, G, (v,)) for v in range(G.n)]


def check_vertex_bounds(H, G: Graph, v: int) -> tuple[LemmaReport, LemmaReport]:
    """Averaging lower bound on the best vertex and the degree upper bound at ``v``."""
    lid = "vertex-bounds"
    H = _g(H)
    _require(H.num_edges >= 1, lid, "e(H) >= 1")
    _require(0 <= v < G.n, lid, "v is a vertex of G")
    n, k = G.n, H.n
    total = count_inj(H, G)
    ii = per_vertex_counts(H, G)
    repro = {"H": write_graph6(H), "G": write_graph6(G), "v": v}
    avg_rhs = Fraction(k, n) * total
    averaging = LemmaReport(
        lid + ".averaging", Fraction(max(ii)), avg_rhs,
        {"vH": k, "n": n, "inj": total}, avg_rhs > 0, repro,
    )
    upper_lhs = k * _pow(n, k - 1) - (n - G.degree(v)) * _pow(n, k - 2)
    upper = LemmaReport(
        lid + ".upper", upper_lhs, Fraction(ii[v]),
        {"vH": k, "n": n, "deg": G.degree(v)},
        upper_lhs < n**k - (n - 1) ** k, repro,
    )
    return averaging, upper


def check_duplication_gain(H, G: Graph, v0: int, v: int) -> LemmaReport:
    """Replacing ``v`` by a twin of ``v0`` loses at most ``ii(v) - ii(v0) + v(H)^2 n^(v(H)-2)``."""
    lid = "duplication"
    H = _g(H)
    _require(v0 != v, lid, "v0 != v")
    _require(0 <= v0 < G.n and 0 <= v < G.n, lid, "v0, v are vertices of G")
    n, k = G.n, H.n
    G2 = duplicate_vertex(G, v0, v)
    total = count_inj(H, G)
    ii_v = total - count_inj_avoiding(H, G, (v,))
    ii_v0 = total - count_inj_avoiding(H, G, (v0,))
    lhs = count_inj(H, G2)
    rhs = total - ii_v + ii_v0 - k * k * _pow(n, k - 2)
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"vH": k, "n": n, "ii_v": ii_v, "ii_v0": ii_v0},
        rhs > 0,
        {"H": write_graph6(H), "G": write_graph6(G), "v0": v0, "v": v},
    )


def check_edge_loss_bound(H, G: Graph, G0: Graph) -> LemmaReport:
    """Each removed edge kills at most ``2 e(H) n^(v(H)-2)`` injective homomorphisms."""
    lid = "edge-loss"
    H = _g(H)
    _require(G0.is_subgraph_of(G), lid, "G0 is a spanning subgraph of G")
    n, k = G.n, H.n
    lost = G.num_edges - G0.num_edges
    lhs = count_inj(H, G0)
    rhs = count_inj(H, G) - 2 * H.num_edges * lost * _pow(n, k - 2)
    return LemmaReport(
        lid, Fraction(lhs), rhs,
        {"vH": k, "eH": H.num_edges, "n": n, "removed": lost},
        rhs > 0,
        {"H": write_graph6(H), "G": write_graph6(G), "G0": write_graph6(G0)},
    )


# -- instance generators ----------------------------------------------------


def pattern_pool() -> list[Graph]:
    """Small patterns with at least one edge."""
    return [
        complete_graph(2),
        path_graph(3),
        complete_graph(3),
        path_graph(4),
        star_graph(3),
        cycle_graph(4),
        make_graph(4, [(0, 1), (2, 3)]),
        make_graph(3, [(0, 1)]),
    ]


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    return make_graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def _shuffle_labels(rng, G: Graph):
    perm = list(range(G.n))
    rng.shuffle(perm)
    return G.relabel(perm), perm


def _random_partial_map(rng, H: Graph, G: Graph):
    size = rng.randint(0, min(H.n, G.n))
    X = sorted(rng.sample(range(H.n), size))
    for _ in range(50):
        imgs = rng.sample(range(G.n), size)
        pm = dict(zip(X, imgs))
        if all(G.has_edge(pm[u], pm[w]) for u, w in H.edges() if u in pm and w in pm):
            return pm
    return {}


def gen_extension_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool() + [make_graph(1), make_graph(2)]
    for _ in range(count):
        n = rng.randint(2, 9)
        G = random_graph(rng, n, rng.choice([0.5, 0.8, 0.95, 1.0]))
        H = rng.choice(pool)
        yield H, G, _random_partial_map(rng, H, G)


def gen_dense_hom_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool() + [make_graph(2), make_graph(3)]
    for _ in range(count):
        n = rng.randint(1, 10)
        yield rng.choice(pool), random_graph(rng, n, rng.choice([0.3, 0.7, 0.9, 1.0]))


def _dense_core(rng, m: int, max_missing: int) -> Graph:
    """Random graph on ``m`` vertices, each missing at most ``max_missing`` neighbours."""
    missing = [0] * m
    edges = []
    for u in range(m):
        for v in range(u + 1, m):
            if missing[u] < max_missing and missing[v] < max_missing and rng.random() < 0.15:
                missing[u] += 1
                missing[v] += 1
            else:
                edges.append((u, v))
    return make_graph(m, edges)


def _join_parts(core: Graph, sizes) -> tuple[Graph, list[list[int]]]:
    """Append independent sets of the given sizes, each joined to everything else."""
    n = core.n + sum(sizes)
    edges = list(core.edges())
    blocks, start = [], core.n
    for s in sizes:
        blocks.append(list(range(start, start + s)))
        start += s
    for i, blk in enumerate(blocks):
        for v in blk:
            edges.extend((u, v) for u in range(core.n))
            for blk2 in blocks[i + 1:]:
                edges.extend((v, w) for w in blk2)
    return make_graph(n, edges), blocks


def gen_rebalance_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    """(H, G, A, B) satisfying every hypothesis of the rebalance check."""
    rng = random.Random(seed)
    pool = pattern_pool()
    produced = 0
    while produced < count:
        sb = rng.randint(1, 3)
        sa = rng.randint(sb, sb + 3)
        n_target = rng.randint(4 * sa, 4 * sa + 10)
        m = max(n_target - sa - sb, 1)
        core = _dense_core(rng, m, max(0, n_target // 4 - 1))
        G, (A, B) = _join_parts(core, [sa, sb])
        if density_deficit(G) > QUARTER:
            continue
        G, perm = _shuffle_labels(rng, G)
        inv = {old: new for new, old in enumerate(perm)}
        produced += 1
        yield rng.choice(pool), G, [inv[v] for v in A], [inv[v] for v in B]


def gen_substantive_rebalance(count: int, seed: int = 0) -> Iterator[tuple]:
    """Complete multipartite instances with delta < 1/(3 v(H)^3), H in {K2, P3}."""
    rng = random.Random(seed)
    for i in range(count):
        H = complete_graph(2) if i % 2 == 0 else path_graph(3)
        sb = rng.randint(1, 2)
        sa = sb + rng.randint(1, 2)
        bound = 3 * H.n**3
        n = bound * sa + 1 + rng.randint(0, 6)
        pg = complete_multipartite([sa, sb] + [1] * (n - sa - sb))
        A, B = list(pg.parts[0]), list(pg.parts[1])
        yield H, pg.graph, A, B


def _random_rpartite(rng) -> PartitionedGraph:
    r = rng.randint(4, 8)
    sizes = [rng.randint(1, 3) for _ in range(r)]
    pg = complete_multipartite(sizes)
    G = pg.graph
    for u, v in rng.sample(G.edges(), rng.randint(0, max(1, G.num_edges // 10))):
        G = G.remove_edge(u, v)
    return PartitionedGraph(G, pg.parts)


def gen_rpartite_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool()
    produced = 0
    while produced < count:
        pg = _random_rpartite(rng)
        if density_deficit(pg.graph) > QUARTER:
            continue
        produced += 1
        yield rng.choice(pool), pg


def gen_substantive_rpartite(count: int, seed: int = 0) -> Iterator[tuple]:
    """Unbalanced complete (or nearly complete) multipartite graphs, H in {K2, P3}."""
    rng = random.Random(seed)
    for i in range(count):
        H = complete_graph(2) if i % 2 == 0 else path_graph(3)
        big = rng.randint(3, 4)
        bound = 3 * H.n**3
        # an edge removed at the big part raises delta to (big + 1) / n
        n = bound * (big + 1) + 1 + rng.randint(0, 6)
        pg = complete_multipartite([big] + [1] * (n - big))
        G = pg.graph
        if i % 4 >= 2:
            u, v = rng.choice(G.edges())
            G = G.remove_edge(u, v)
        yield H, PartitionedGraph(G, pg.parts)


def gen_vertex_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool()
    for _ in range(count):
        n = rng.randint(1, 8)
        G = random_graph(rng, n, rng.choice([0.3, 0.6, 0.9]))
        yield rng.choice(pool), G, rng.randrange(n)


def gen_duplication_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool() + [make_graph(2)]
    for _ in range(count):
        n = rng.randint(2, 8)
        G = random_graph(rng, n, rng.choice([0.3, 0.6, 0.9]))
        v0, v = rng.sample(range(n), 2)
        yield rng.choice(pool), G, v0, v


def gen_edge_loss_instances(count: int, seed: int = 0) -> Iterator[tuple]:
    rng = random.Random(seed)
    pool = pattern_pool()
    for _ in range(count):
        n = rng.randint(2, 9)
        G = random_graph(rng, n, rng.choice([0.4, 0.7, 1.0]))
        keep = [e for e in G.edges() if rng.random() < 0.8]
        yield rng.choice(pool), G, make_graph(n, keep)


def gen_kfree_instances(count: int, r: int, seed: int = 0, max_n: int = 9) -> Iterator[Graph]:
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        n = rng.randint(1, max_n)
        G = random_graph(rng, n, rng.choice([0.2, 0.4, 0.6]))
        if is_kfree(G, r + 1):
            produced += 1
            yield G
