"""Time the hot kernels under the numba and pure-Python backends.

Each backend runs in its own interpreter because the backend is fixed at
import time by TURANLAB_DISABLE_JIT.  The numba figures exclude compilation:
every workload runs once as a warm-up before timing.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""
import argparse
import json
import os
import subprocess
import sys
import time


def workloads(quick):
    import random

    from turanlab import (
        complete_graph, count_inj, cycle_graph, enumerate_graphs, is_kfree, make_graph,
        max_r_partite_exact, turan_graph,
    )
    from turanlab.search import canonical_code

    rng = random.Random(0)

    def rand(n, p):
        return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])

    host = rand(40 if quick else 70, 0.5)
    cut = rand(11 if quick else 14, 0.5)
    canon = [rand(10, 0.5) for _ in range(100 if quick else 400)]
    kfree = rand(40 if quick else 60, 0.6)
    T = turan_graph(5, 40 if quick else 80).graph
    return {
        "count_inj C4 in G(n,1/2)": lambda: count_inj(cycle_graph(4), host, threads=1),
        "count_inj K4 in T_5(n)": lambda: count_inj(complete_graph(4), T, threads=1),
        "clique search K9 in G(n,0.6)": lambda: is_kfree(kfree, 9),
        "exact max 3-partite": lambda: max_r_partite_exact(cut, 3),
        "canonical codes, 10 vertices": lambda: [canonical_code(G) for G in canon],
        "enumerate n=6" if quick else "enumerate n=7": lambda: enumerate_graphs(6 if quick else 7),
    }


def child(repeat, quick):
    import turanlab

    out = {"backend": turanlab.backend(), "timings": {}}
    for name, fn in workloads(quick).items():
        fn()
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out["timings"][name] = best
    print(json.dumps(out))


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller instances")
    ap.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.child:
        child(args.repeat, args.quick)
        return
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, TURANLAB_DISABLE_JIT=flag)
        cmd = [sys.executable, __file__, "--child", "--repeat", str(args.repeat)] + (["--quick"] if args.quick else [])
        proc = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        data = json.loads(proc.stdout)
        results[data["backend"]] = data["timings"]
    names = list(next(iter(results.values())))
    print(f"{'workload':34s} {'numba (s)':>11s} {'python (s)':>11s} {'speedup':>8s}")
    for name in names:
        jit, py = results.get("numba", {}).get(name), results["python"][name]
        if jit is None:
            print(f"{name:34s} {'n/a':>11s} {py:11.4f}")
        else:
            print(f"{name:34s} {jit:11.4f} {py:11.4f} {py / jit:7.1f}x")


if __name__ == "__main__":
    main()
