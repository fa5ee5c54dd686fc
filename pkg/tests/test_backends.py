import json
import os
import subprocess
import sys

import pytest

SCRIPT = r"""
import json, random
import turanlab
from turanlab import *
from turanlab.search import canonical_code
from turanlab.homcount import count_extensions
rng = random.Random(5)
out = {"backend": turanlab.backend(), "counts": [], "partite": [], "canon": [], "local": []}
for _ in range(25):
    n = rng.randint(3, 9)
    G = make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.55])
    for H in (complete_graph(2), path_graph(3), cycle_graph(4), complete_graph(3)):
        out["counts"].append(count_inj(H, G))
    out["counts"].append(count_extensions(path_graph(3), G, {1: 0}))
    out["partite"].append(max_r_partite_exact(G, 2).subgraph.parts)
    out["partite"].append(max_r_partite_exact(G, 3).dropped_edges)
    out["local"].append(max_r_partite_local(G, 3, seed=1).subgraph.parts)
    out["canon"].append(canonical_code(G))
    out["canon"].append(is_kfree(G, 4))
out["enum"] = [len(enumerate_graphs(n)) for n in range(6)]
out["big"] = count_inj(complete_graph(3), turan_graph(3, 60).graph, threads=2)
out["search"] = search_extremal(path_graph(3), 2, 5).to_json()
print(json.dumps(out))
"""


def run_backend(disable):
    env = dict(os.environ, TURANLAB_DISABLE_JIT="1" if disable else "0")
    proc = subprocess.run([sys.executable, "-c", SCRIPT], capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


@pytest.fixture(scope="module")
def results():
    return run_backend(False), run_backend(True)


def test_backend_flag(results):
    jit, py = results
    assert py["backend"] == "python"
    assert jit["backend"] in ("numba", "python")


def test_backends_agree(results):
    jit, py = results
    for key in ("counts", "partite", "canon", "local", "enum", "big", "search"):
        assert jit[key] == py[key], key
    assert jit["big"] == 6 * 20**3
