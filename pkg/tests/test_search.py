import logging
import random

import numpy as np
import pytest

from oracles import brute_class_ids, burnside_count, code_of, pair_index
from turanlab import (
    GraphSource,
    HypothesisViolation,
    certify_turan_good_at,
    complete_graph,
    complete_multipartite,
    count_inj,
    cycle_graph,
    enumerate_graphs,
    is_kfree,
    make_graph,
    path_graph,
    search_extremal,
    transform_trace,
    turan_edge_count,
    turan_graph,
    write_graph6,
)
from turanlab.search import CorpusError, canonical_code, canonical_form, canonical_graph, decode_code, read_corpus

KNOWN = [1, 1, 2, 4, 11, 34, 156, 1044, 12346]


def labelled(n, code):
    pairs = pair_index(n)
    L = len(pairs)
    return make_graph(n, [p for t, p in enumerate(pairs) if code >> (L - 1 - t) & 1])


@pytest.mark.parametrize("n", range(0, 7))
def test_burnside_matches_table(n):
    assert burnside_count(n) == KNOWN[n]


@pytest.mark.parametrize("n", range(1, 7))
def test_enumeration_against_bucketing_oracle(n):
    classes = brute_class_ids(n)
    reps = enumerate_graphs(n)
    assert len(reps) == len(np.unique(classes)) == KNOWN[n]
    assert len({int(classes[code_of(G)]) for G in reps}) == len(reps)


@pytest.mark.parametrize("n", range(1, 7))
def test_canonical_code_partition_matches_oracle(n):
    classes = brute_class_ids(n)
    mine = {}
    for code in range(1 << (n * (n - 1) // 2)):
        c = canonical_code(labelled(n, code))
        assert mine.setdefault(c, int(classes[code])) == int(classes[code])
    assert len(mine) == KNOWN[n]


def test_enumeration_counts_7_8():
    assert [len(enumerate_graphs(n)) for n in (7, 8)] == KNOWN[7:9]
    with pytest.raises(ValueError):
        enumerate_graphs(9)


def test_canonical_form_relabel():
    rng = random.Random(1)
    for _ in range(200):
        n = rng.randint(0, 10)
        G = make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4])
        perm = list(range(n))
        rng.shuffle(perm)
        code, order = canonical_form(G)
        assert canonical_code(G.relabel(perm)) == code
        assert code_of(canonical_graph(G)) == code
        assert decode_code(n, code) == canonical_graph(G)
        assert sorted(order) == list(range(n))


def test_enumerated_graphs_are_canonical_and_sorted():
    for n in range(0, 7):
        reps = enumerate_graphs(n)
        codes = [code_of(G) for G in reps]
        assert codes == sorted(codes)
        assert all(canonical_code(G) == c for G, c in zip(reps, codes))


# -- search ---------------------------------------------------------------


def test_search_mantel_example():
    res = search_extremal(complete_graph(2), 2, 5)
    assert res.max_copies == 6 and res.turan_is_max
    assert res.maximizers == [write_graph6(canonical_graph(turan_graph(2, 5).graph))]
    assert res.scanned == 34


def test_search_turan_example():
    res = search_extremal(complete_graph(2), 3, 7)
    assert res.max_copies == 16 == turan_edge_count(3, 7) and res.turan_is_max
    assert len(res.maximizers) == 1


def test_search_k3_in_triangle_free():
    res = search_extremal(complete_graph(3), 2, 6)
    assert res.max_copies == 0 and res.turan_value == 0 and res.turan_is_max
    assert len(res.maximizers) == res.kfree


def test_search_n_at_most_r():
    res = search_extremal(path_graph(3), 5, 4)
    assert res.kfree == res.scanned == 11
    assert res.maximizers == [write_graph6(complete_graph(4))]


def test_search_maximizers_are_valid():
    res = search_extremal(path_graph(3), 2, 6)
    for g6 in res.maximizers:
        from turanlab import parse_graph6, count_copies
        G = parse_graph6(g6)
        assert is_kfree(G, 3) and count_copies(path_graph(3), G) == res.max_copies


def test_certify_examples():
    res = certify_turan_good_at(complete_graph(2), 2, 5)
    assert res.certified is True and res.certificate["vertex_checks"] == 5
    res = certify_turan_good_at(path_graph(3), 2, 6)
    assert res.turan_value == 18 and res.turan_is_max and res.certified


def test_search_thread_independence():
    a = search_extremal(path_graph(3), 2, 6, threads=1).to_json()
    b = search_extremal(path_graph(3), 2, 6, threads=4).to_json()
    assert a == b


def _write_corpus(tmp_path, lines, name="c.g6"):
    p = tmp_path / name
    p.write_text("\n".join(lines) + "\n", encoding="ascii")
    return str(p)


def test_corpus_source_order_independent(tmp_path):
    g6 = [write_graph6(G) for G in enumerate_graphs(6)]
    rng = random.Random(4)
    shuffled = g6[:]
    rng.shuffle(shuffled)
    a = search_extremal(path_graph(3), 2, 6, GraphSource.corpus(_write_corpus(tmp_path, g6, "a")))
    b = search_extremal(path_graph(3), 2, 6, GraphSource.corpus(_write_corpus(tmp_path, shuffled, "b")))
    c = search_extremal(path_graph(3), 2, 6)
    assert a.to_json() == b.to_json() == c.to_json()


def test_corpus_relabelled_duplicates_collapse(tmp_path):
    G = cycle_graph(5)
    lines = [">>graph6<<", "", write_graph6(G), write_graph6(G.relabel([2, 0, 4, 1, 3]))]
    res = search_extremal(complete_graph(2), 2, 5, GraphSource.corpus(_write_corpus(tmp_path, lines)))
    assert res.scanned == 2 and len(res.maximizers) == 1
    assert res.turan_value == 6 and res.turan_is_max


def test_corpus_malformed(tmp_path, caplog):
    path = _write_corpus(tmp_path, ["Dhc", "D?", "D??"])
    with pytest.raises(CorpusError, match=":2:"):
        list(read_corpus(path))
    with caplog.at_level(logging.WARNING):
        got = list(read_corpus(path, lenient=True))
    assert len(got) == 2 and ":2:" in caplog.text


def test_corpus_wrong_order(tmp_path):
    path = _write_corpus(tmp_path, ["Dhc", "A_"])
    with pytest.raises(CorpusError):
        search_extremal(complete_graph(2), 2, 5, GraphSource.corpus(path))


# -- trace ----------------------------------------------------------------


def test_trace_turan_is_empty():
    tr = transform_trace(complete_graph(2), turan_graph(3, 7).graph, 3)
    assert tr.steps == [] and tr.rebalances == 0 and tr.ok


def test_trace_c5():
    tr = transform_trace(complete_graph(2), cycle_graph(5), 2)
    assert [s["op"] for s in tr.steps][:3] == ["furedi-decompose", "complete-maximal", "fill-edges"]
    assert tr.steps[0]["e_before"] - tr.steps[0]["e_after"] == 1
    assert tr.final_is_turan and tr.final_inj == 12 == tr.turan_inj and tr.ok


def test_trace_single_rebalance():
    tr = transform_trace(complete_graph(2), complete_multipartite([4, 2]).graph, 2)
    assert tr.rebalances == 1
    step = tr.steps[-1]
    assert (step["inj_before"], step["inj_after"]) == (16, 18)
    assert tr.ok


def test_trace_r3_patterns():
    rng = random.Random(2)
    done = 0
    while done < 15:
        n = rng.randint(4, 8)
        G = make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.6])
        if not is_kfree(G, 4):
            continue
        for H in (complete_graph(2), path_graph(3)):
            tr = transform_trace(H, G, 3)
            assert tr.final_is_turan and tr.final_inj == count_inj(H, turan_graph(3, n).graph)
            assert all(c.get("verdict", "PASS") == "PASS" for c in tr.checks())
        done += 1


def test_trace_rejects():
    with pytest.raises(HypothesisViolation):
        transform_trace(complete_graph(2), complete_graph(3), 2)
    with pytest.raises(HypothesisViolation):
        transform_trace(make_graph(2), cycle_graph(5), 2)
