"""Exact injective-homomorphism counting and extremal checks around Turán graphs."""
from ._accel import backend
from .graph import (
    Graph,
    Graph6Error,
    GraphError,
    PartitionedGraph,
    clique_number,
    complete_graph,
    complete_multipartite,
    cycle_graph,
    density_deficit,
    duplicate_vertex,
    is_kfree,
    make_graph,
    parse_graph6,
    path_graph,
    star_graph,
    turan_edge_count,
    turan_graph,
    turan_sizes,
    write_graph6,
)
from .homcount import (
    PatternGraph,
    aut_count,
    count_copies,
    count_extensions,
    count_inj,
    count_inj_brute,
    count_inj_through,
)
from .lemmas import LemmaReport, HypothesisViolation
from .partite import (
    PartiteDecomposition,
    fill_to_complete_multipartite,
    max_r_partite_exact,
    max_r_partite_local,
    maximal_completion,
    rebalance_step,
)
from .search import (
    GraphSource,
    SearchResult,
    TransformTrace,
    certify_turan_good_at,
    enumerate_graphs,
    search_extremal,
    transform_trace,
)

__version__ = "0.1.0"
