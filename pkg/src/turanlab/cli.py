"""Command-line entry point: ``turanlab <subcommand> ...``.

Exit status: 0 on success, 1 if any verification report fails, 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import csv
import os
import re
import sys
from fractions import Fraction

from . import jsonio, lemmas
from .graph import (
    Graph,
    Graph6Error,
    GraphError,
    PartitionedGraph,
    complete_graph,
    cycle_graph,
    parse_graph6,
    path_graph,
    star_graph,
    turan_edge_count,
    turan_graph,
    write_graph6,
)
from .homcount import (
    BudgetExceeded,
    InvalidPartialMap,
    aut_count,
    count_copies,
    count_inj,
    set_default_threads,
)
from .lemmas import HypothesisViolation
from .partite import BudgetExceeded as PartiteBudgetExceeded
from .search import (
    CorpusError,
    GraphSource,
    certify_turan_good_at,
    enumerate_graphs,
    search_extremal,
    transform_trace,
)

_NAMED = re.compile(r"^([KPCS])_?(\d+)$")


class UsageError(Exception):
    pass


def parse_pattern(spec: str) -> Graph:
    """``K_k`` complete, ``P_k`` path on k vertices, ``C_k`` cycle, ``S_k`` star
    with k leaves; anything else is read as graph6."""
    m = _NAMED.match(spec.strip())
    if m:
        kind, k = m.group(1), int(m.group(2))
        if kind == "K":
            return complete_graph(k)
        if kind == "P":
            return path_graph(k)
        if kind == "C":
            return cycle_graph(k)
        return star_graph(k)
    return parse_graph6(spec.strip())


def read_graph(arg: str) -> Graph:
    """Named graph, graph6 literal, a file holding graph6, or ``-`` for stdin."""
    if arg == "-":
        return parse_graph6(sys.stdin.readline())
    if os.path.isfile(arg):
        with open(arg, encoding="ascii") as fh:
            for line in fh:
                if line.strip() and line.strip() != ">>graph6<<":
                    return parse_graph6(line.strip())
        raise UsageError(f"{arg}: no graph found")
    return parse_pattern(arg)


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()] if text else []


def _pm(text):
    out = {}
    for item in (text or "").split(","):
        if item.strip():
            u, _, x = item.partition(":")
            out[int(u)] = int(x)
    return out


# -- output -----------------------------------------------------------------


def _emit(records, fmt, out, columns=None):
    records = list(records)
    if fmt == "json":
        for rec in records:
            out.write(jsonio.dumps(rec) + "\n")
    elif fmt == "csv":
        if columns is None:
            columns = list(records[0]) if records else []
        w = csv.writer(out, lineterminator="\n")
        w.writerow(columns)
        for rec in records:
            w.writerow([_flat(rec.get(c)) for c in columns])
    else:
        for rec in records:
            out.write(" ".join(f"{k}={_flat(v)}" for k, v in rec.items() if not isinstance(v, (dict, list))) + "\n")


def _flat(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (dict, list)):
        return jsonio.dumps(v)
    return v


def _report_row(rep: lemmas.LemmaReport, fmt: str) -> dict:
    d = rep.to_dict()
    if fmt != "json":
        d["slack"] = rep.slack
    return d


REPORT_COLUMNS = ["lemma_id", "verdict", "lhs", "rhs", "slack", "substantive"]


# -- subcommands ------------------------------------------------------------


def cmd_count(args, out):
    H = parse_pattern(args.pattern)
    G = read_graph(args.graph)
    rec = {
        "pattern": write_graph6(H),
        "host": write_graph6(G),
        "inj": count_inj(H, G),
        "aut": aut_count(H),
        "copies": count_copies(H, G),
    }
    _emit([rec], args.format, out)
    return 0


def cmd_turan(args, out):
    pg = turan_graph(args.r, args.n)
    rec = {
        "r": args.r,
        "n": args.n,
        "graph6": write_graph6(pg.graph),
        "edges": turan_edge_count(args.r, args.n),
        "sizes": list(pg.sizes),
    }
    if args.format == "human":
        out.write(f"{rec['graph6']} edges={rec['edges']}\n")
    else:
        _emit([rec], args.format, out)
    return 0


def cmd_enum(args, out):
    for G in enumerate_graphs(args.n):
        out.write(write_graph6(G) + "\n")
    return 0


def cmd_search(args, out):
    H = parse_pattern(args.pattern)
    source = GraphSource.corpus(args.corpus, args.lenient) if args.corpus else GraphSource.internal()
    fn = certify_turan_good_at if args.certify else search_extremal
    res = fn(H, args.r, args.n, source)
    _emit([res.to_dict()], args.format, out)
    return 0


def cmd_trace(args, out):
    H = parse_pattern(args.pattern)
    G = read_graph(args.graph)
    tr = transform_trace(H, G, args.r)
    _emit([tr.to_dict()], args.format, out)
    return 0 if tr.ok else 1


def _generated(args):
    """Reports for a lemma id from generators, an enumeration, or one explicit instance."""
    lid, count, seed = args.lemma_id, args.count, args.seed
    H = parse_pattern(args.pattern) if args.pattern else None
    G = read_graph(args.graph) if args.graph else None

    if lid == "xyp":
        if args.x is not None:
            return [lemmas.check_xyp(Fraction(args.x), Fraction(args.y or 0), args.p or 0)]
        grid = [Fraction(i, 8) for i in range(9)]
        return [lemmas.check_xyp(x, y, p) for x in grid for y in grid for p in range(11)]

    if lid == "furedi":
        r = args.r or 2
        if G is not None:
            return [lemmas.check_furedi(G, r)]
        if args.all_graphs_n is not None:
            out = []
            for g in enumerate_graphs(args.all_graphs_n):
                try:
                    out.append(lemmas.check_furedi(g, r))
                except HypothesisViolation:
                    continue
            return out
        return [lemmas.check_furedi(g, r) for g in lemmas.gen_kfree_instances(count, r, seed)]

    if G is not None:
        if H is None:
            raise UsageError("--pattern is required with --graph")
        if lid == "lowerbound":
            return [lemmas.check_extension_bound(H, G, _pm(args.pm))]
        if lid == "dense-hom":
            return [lemmas.check_dense_hom_bound(H, G)]
        if lid == "rebalance":
            return [lemmas.check_rebalance(H, G, _int_list(args.A), _int_list(args.B))]
        if lid == "rpartite":
            parts = tuple(tuple(_int_list(p)) for p in (args.parts or "").split("/") if p)
            return [lemmas.check_rpartite(H, PartitionedGraph(G, parts))]
        if lid == "vertex-bounds":
            return list(lemmas.check_vertex_bounds(H, G, args.v or 0))
        if lid == "duplication":
            return [lemmas.check_duplication_gain(H, G, args.v0 or 0, args.v if args.v is not None else 1)]
        if lid == "edge-loss":
            if not args.sub:
                raise UsageError("--sub is required for edge-loss")
            return [lemmas.check_edge_loss_bound(H, G, read_graph(args.sub))]

    if args.all_graphs_n is not None and lid in ("dense-hom", "vertex-bounds"):
        pats = [H] if H is not None else lemmas.pattern_pool()
        out = []
        for g in enumerate_graphs(args.all_graphs_n):
            for h in pats:
                if lid == "dense-hom":
                    out.append(lemmas.check_dense_hom_bound(h, g))
                else:
                    for v in range(g.n):
                        out.extend(lemmas.check_vertex_bounds(h, g, v))
        return out

    if lid == "lowerbound":
        return [lemmas.check_extension_bound(*x) for x in lemmas.gen_extension_instances(count, seed)]
    if lid == "dense-hom":
        return [lemmas.check_dense_hom_bound(*x) for x in lemmas.gen_dense_hom_instances(count, seed)]
    if lid == "rebalance":
        reps = [lemmas.check_rebalance(*x) for x in lemmas.gen_rebalance_instances(count, seed)]
        reps += [lemmas.check_rebalance(*x) for x in lemmas.gen_substantive_rebalance(args.substantive, seed)]
        return reps
    if lid == "rpartite":
        reps = [lemmas.check_rpartite(*x) for x in lemmas.gen_rpartite_instances(count, seed)]
        reps += [lemmas.check_rpartite(*x) for x in lemmas.gen_substantive_rpartite(args.substantive, seed)]
        return reps
    if lid == "vertex-bounds":
        out = []
        for x in lemmas.gen_vertex_instances(count, seed):
            out.extend(lemmas.check_vertex_bounds(*x))
        return out
    if lid == "duplication":
        return [lemmas.check_duplication_gain(*x) for x in lemmas.gen_duplication_instances(count, seed)]
    if lid == "edge-loss":
        return [lemmas.check_edge_loss_bound(*x) for x in lemmas.gen_edge_loss_instances(count, seed)]
    raise UsageError(f"unknown lemma id {lid!r}")


def cmd_verify(args, out):
    reports = _generated(args)
    rows = [_report_row(r, args.format) for r in reports]
    _emit(rows, args.format, out, REPORT_COLUMNS)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        sys.stderr.write(f"FAIL {r.lemma_id}: reproducer {jsonio.dumps(r.reproducer)}\n")
    return 1 if failed else 0


# -- parser -----------------------------------------------------------------

_LEMMA_HELP = {
    "lowerbound": "extensions of a partial injective homomorphism into a delta-dense host",
    "dense-hom": "injective homomorphism count of a delta-dense host, lower bound",
    "xyp": "(1-x)(1-y)^p >= 1-x-py on rationals",
    "rebalance": "moving a vertex between fully joined independent sets",
    "rpartite": "Turán graph versus a delta-dense r-partite graph, by edge deficit",
    "furedi": "max r-partite subgraph of a K_{r+1}-free graph loses at most e(T_r(n)) - e(G) edges",
    "vertex-bounds": "averaging lower bound and degree upper bound on per-vertex counts",
    "duplication": "replacing a vertex by a twin of another vertex",
    "edge-loss": "homomorphisms lost when passing to a spanning subgraph",
}


def _common_options(p, default):
    p.add_argument("--threads", type=int, default=default,
                   help="worker threads (default: $TURANLAB_THREADS or CPU count)")
    p.add_argument("--format", choices=("json", "csv", "human"), default=default)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="turanlab",
        description="Exact injective-homomorphism counts, Turán graphs and extremal checks.",
    )
    _common_options(p, argparse.SUPPRESS)
    p.set_defaults(threads=None, format="json")
    common = argparse.ArgumentParser(add_help=False)
    _common_options(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("count", parents=[common], help="inj, aut and copy counts of H in G")
    c.add_argument("pattern", help="K_k, P_k, C_k, S_k or graph6")
    c.add_argument("graph", help="graph6, named graph, file, or - for stdin")
    c.set_defaults(func=cmd_count)

    t = sub.add_parser("turan", parents=[common], help="the Turán graph T_r(n) as graph6 with its edge count")
    t.add_argument("r", type=int)
    t.add_argument("n", type=int)
    t.set_defaults(func=cmd_turan)

    lemma_lines = "\n".join(f"  {k:14s} {v}" for k, v in _LEMMA_HELP.items())
    v = sub.add_parser(
        "verify", parents=[common],
        help="run one inequality checker over generated or explicit instances",
        description="Lemma ids:\n" + lemma_lines,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    v.add_argument("lemma_id", choices=lemmas.LEMMA_IDS)
    v.add_argument("--count", type=int, default=200, help="generated instances (default 200)")
    v.add_argument("--substantive", type=int, default=10,
                   help="extra large-n instances for rebalance/rpartite (default 10)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--all-graphs-n", type=int, default=None, dest="all_graphs_n",
                   help="check every graph on this many vertices (furedi, dense-hom, vertex-bounds)")
    v.add_argument("--r", type=int, default=None)
    v.add_argument("--pattern", default=None)
    v.add_argument("--graph", default=None, help="explicit host graph")
    v.add_argument("--sub", default=None, help="spanning subgraph for edge-loss")
    v.add_argument("--pm", default=None, help="partial map u:x,u:x for lowerbound")
    v.add_argument("--A", default=None, help="comma-separated vertex set")
    v.add_argument("--B", default=None, help="comma-separated vertex set")
    v.add_argument("--parts", default=None, help="parts as 0,1/2,3 for rpartite")
    v.add_argument("--v0", type=int, default=None)
    v.add_argument("--v", type=int, default=None)
    v.add_argument("--x", default=None)
    v.add_argument("--y", default=None)
    v.add_argument("--p", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("search", parents=[common], help="exhaustive max copies of H over K_{r+1}-free n-vertex graphs")
    s.add_argument("pattern")
    s.add_argument("r", type=int)
    s.add_argument("n", type=int)
    s.add_argument("--corpus", default=None, help="graph6 file instead of the internal enumeration")
    s.add_argument("--lenient", action="store_true", help="skip malformed corpus lines")
    s.add_argument("--certify", action="store_true", help="also audit maximizers")
    s.set_defaults(func=cmd_search)

    tr = sub.add_parser("trace", parents=[common], help="walk G to T_r(n) through decomposition, filling and rebalancing")
    tr.add_argument("pattern")
    tr.add_argument("graph")
    tr.add_argument("r", type=int)
    tr.set_defaults(func=cmd_trace)

    e = sub.add_parser("enum", parents=[common], help="all graphs on n <= 8 vertices up to isomorphism, as graph6")
    e.add_argument("n", type=int)
    e.set_defaults(func=cmd_enum)
    return p


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    set_default_threads(args.threads)
    try:
        return args.func(args, out)
    except (UsageError, Graph6Error, GraphError, HypothesisViolation, InvalidPartialMap,
            BudgetExceeded, PartiteBudgetExceeded, CorpusError, ValueError, OSError) as exc:
        sys.stderr.write(f"turanlab: error: {exc}\n")
        return 2
    finally:
        set_default_threads(None)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
