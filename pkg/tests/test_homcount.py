import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import graphs
from turanlab import (
    aut_count,
    complete_graph,
    count_copies,
    count_extensions,
    count_inj,
    count_inj_brute,
    count_inj_through,
    cycle_graph,
    make_graph,
    path_graph,
    star_graph,
    turan_graph,
)
from turanlab import homcount
from turanlab.homcount import BudgetExceeded, InvalidPartialMap, counting_order, count_inj_avoiding
from turanlab.search import enumerate_graphs


def brute_extensions(H, G, pm):
    total = 0
    for phi in itertools.permutations(range(G.n), H.n):
        if all(phi[u] == x for u, x in pm.items()) and all(G.has_edge(phi[u], phi[v]) for u, v in H.edges()):
            total += 1
    return total


def test_examples():
    assert count_inj(cycle_graph(4), complete_graph(4)) == 24
    assert count_inj(path_graph(3), cycle_graph(4)) == 8
    assert count_inj(complete_graph(3), turan_graph(2, 9).graph) == 0
    assert count_inj_brute(complete_graph(2), complete_graph(3)) == 6
    assert count_inj_brute(path_graph(4), path_graph(4)) == 2


def test_aut_examples():
    assert aut_count(complete_graph(3)) == 6
    assert aut_count(path_graph(3)) == 2
    assert aut_count(cycle_graph(5)) == 10 == count_inj_brute(cycle_graph(5), cycle_graph(5))
    assert aut_count(star_graph(4)) == 24
    assert aut_count(make_graph(0)) == 1


def test_copies_examples():
    assert count_copies(cycle_graph(4), complete_graph(4)) == 3
    assert count_copies(complete_graph(3), complete_graph(4)) == 4
    G = cycle_graph(7).add_edge(0, 3)
    assert count_copies(complete_graph(2), G) == G.num_edges


def test_through_examples():
    K3 = complete_graph(3)
    assert [count_inj_through(complete_graph(2), K3, v) for v in range(3)] == [4, 4, 4]
    assert count_inj_through(make_graph(2), K3, 1) == 4
    with pytest.raises(ValueError):
        count_inj_through(complete_graph(2), K3, 3)


def test_extension_examples():
    assert count_extensions(complete_graph(2), complete_graph(3), {0: 1}) == 2
    assert count_extensions(cycle_graph(4), complete_graph(5), {0: 0, 1: 1, 2: 2, 3: 3}) == 1
    # P3 = 0-1-2 with centre 1 pinned to a vertex of C4
    assert count_extensions(path_graph(3), cycle_graph(4), {1: 0}) == 2
    assert brute_extensions(path_graph(3), cycle_graph(4), {1: 0}) == 2


@pytest.mark.parametrize("pm", [{0: 0, 1: 0}, {0: 7}, {5: 0}, {0: 0, 1: 2}])
def test_invalid_partial_maps(pm):
    with pytest.raises(InvalidPartialMap):
        count_extensions(path_graph(3), cycle_graph(4), pm)


def test_brute_budget():
    with pytest.raises(BudgetExceeded):
        count_inj_brute(path_graph(5), complete_graph(100), budget=10**6)


def test_exhaustive_small_pairs():
    patterns = [H for k in range(0, 4) for H in enumerate_graphs(k)]
    hosts = [G for n in range(0, 6) for G in enumerate_graphs(n)]
    for H in patterns:
        for G in hosts:
            assert count_inj(H, G) == count_inj_brute(H, G), (H, G)


@given(graphs(max_n=5), graphs(max_n=7))
def test_matches_brute(H, G):
    assert count_inj(H, G) == count_inj_brute(H, G)


@given(graphs(max_n=8))
def test_k2_counts_ordered_edges(G):
    assert count_inj(complete_graph(2), G) == 2 * G.num_edges


@given(graphs(max_n=5))
def test_vertex_identity_and_aut(H):
    assert aut_count(H) == count_inj_brute(H, H)
    assert count_inj(H, H) % aut_count(H) == 0


@given(graphs(max_n=4), graphs(min_n=1, max_n=7))
def test_through_sum_identity(H, G):
    assert sum(count_inj_through(H, G, v) for v in range(G.n)) == H.n * count_inj(H, G)
    for v in range(G.n):
        assert count_inj_avoiding(H, G, [v]) == count_inj(H, G.remove_vertex(v))


@given(graphs(min_n=1, max_n=4), graphs(max_n=7), st.data())
def test_extensions_match_brute(H, G, data):
    if G.n < H.n:
        return
    X = data.draw(st.lists(st.integers(0, H.n - 1), unique=True, max_size=H.n))
    images = data.draw(st.lists(st.integers(0, G.n - 1), unique=True, min_size=len(X), max_size=len(X)))
    pm = dict(zip(X, images))
    try:
        got = count_extensions(H, G, pm)
    except InvalidPartialMap:
        assert any(H.has_edge(u, w) and not G.has_edge(pm[u], pm[w]) for u in pm for w in pm if u != w)
        return
    assert got == brute_extensions(H, G, pm)


@given(graphs(max_n=4), graphs(max_n=7), st.data())
def test_monotone_in_host(H, G, data):
    non = [(u, v) for u in range(G.n) for v in range(u + 1, G.n) if not G.has_edge(u, v)]
    if not non:
        return
    u, v = data.draw(st.sampled_from(non))
    G2 = G.add_edge(u, v)
    before, after = count_inj(H, G), count_inj(H, G2)
    using = sum(
        1
        for phi in itertools.permutations(range(G.n), H.n)
        if all(G2.has_edge(phi[a], phi[b]) for a, b in H.edges())
        and any({phi[a], phi[b]} == {u, v} for a, b in H.edges())
    )
    assert after - before == using >= 0
    if H.num_edges == 1 and G.n >= H.n:
        assert after > before


def test_counting_order_is_connected_prefix():
    for k in range(1, 6):
        for H in enumerate_graphs(k):
            order = counting_order(H)
            assert sorted(order) == list(range(k))


def test_overflow_split_is_exact(monkeypatch):
    rng = random.Random(3)
    n = 14
    G = make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.6])
    cases = [(path_graph(4), G), (cycle_graph(4), G), (complete_graph(3), complete_graph(9))]
    expected = [count_inj(H, X) for H, X in cases]
    monkeypatch.setattr(homcount, "OVERFLOW_LIMIT", 40)
    assert [count_inj(H, X) for H, X in cases] == expected
    assert count_extensions(path_graph(4), G, {1: 0}) == brute_extensions(path_graph(4), G, {1: 0})


def test_large_exact_value():
    # 4-cliques in T_4(200): 50^4 choices of one vertex per part, times 4! orderings
    assert count_inj(complete_graph(4), turan_graph(4, 200).graph) == 24 * 50**4
    assert count_inj(complete_graph(4), turan_graph(5, 200).graph) == 307200000


@pytest.mark.parametrize("threads", [1, 2, 4])
def test_thread_split_agrees(threads):
    rng = random.Random(11)
    n = 40
    G = make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.3])
    ref = count_inj(path_graph(4), G, threads=1)
    assert count_inj(path_graph(4), G, threads=threads) == ref
    assert count_inj_avoiding(path_graph(4), G, [0, 5], threads=threads) == count_inj(
        path_graph(4), G.remove_vertex(5).remove_vertex(0), threads=1)
    assert count_extensions(path_graph(4), G, {2: 7}, threads=threads) == count_extensions(
        path_graph(4), G, {2: 7}, threads=1)


def test_default_threads_env(monkeypatch):
    monkeypatch.setattr(homcount, "_threads_override", None)
    monkeypatch.setenv("TURANLAB_THREADS", "3")
    assert homcount.default_threads() == 3
    homcount.set_default_threads(2)
    try:
        assert homcount.default_threads() == 2
    finally:
        homcount.set_default_threads(None)
