"""Precomputed recovery paths for transient single node failures."""

from .escapes import (
    EscapePlan,
    NotBiconnectedError,
    RecoveryGraph,
    all_destinations,
    build_recovery_graph,
    compute_escapes,
    reconstruct_path,
    solve,
)
from .graph import (
    GraphError,
    GraphFormatError,
    ShortestPathTree,
    WeightedGraph,
    bucket_by_nca,
    build_spt,
    is_biconnected,
    load_graph,
    save_graph,
)

__version__ = "0.1.0"
