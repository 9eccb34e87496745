"""Community detection and clustering on a deterministic superstep runtime,
with a strong-scaling benchmark harness."""

from .bench import (
    AmdahlFit,
    BenchConfig,
    BenchRow,
    BenchTable,
    amdahl_speedup,
    fit_parallel_fraction,
    run_benchmark,
)
from .bsp import RunStats, SuperstepProgram, SuperstepRuntime, run_supersteps
from .clustering import (
    Dendrogram,
    KmeansResult,
    PointSet,
    cut_dendrogram,
    kmeans,
    kmeans_search,
    single_link_dendrogram,
)
from .graph import (
    Partition,
    UndirectedGraph,
    coarsen,
    degree_weight,
    from_arrays,
    from_edge_list,
    total_weight,
)
from .io import IdMap, read_partition, read_snap_edge_list, write_partition
from .labelprop import (
    Labeling,
    LlpConfig,
    LpaConfig,
    Ordering,
    apm_update,
    llp,
    lpa_basic,
    lpa_scored,
)
from .louvain import LouvainConfig, LouvainResult, local_moving_phase, louvain
from .metrics import (
    CommunityState,
    delta_modularity_exact,
    delta_modularity_textbook,
    modularity,
    partition_entropy,
    variation_of_information,
)

__version__ = "0.1.0"

__all__ = [
    "AmdahlFit",
    "BenchConfig",
    "BenchRow",
    "BenchTable",
    "CommunityState",
    "Dendrogram",
    "IdMap",
    "KmeansResult",
    "Labeling",
    "LlpConfig",
    "LouvainConfig",
    "LouvainResult",
    "LpaConfig",
    "Ordering",
    "Partition",
    "PointSet",
    "RunStats",
    "SuperstepProgram",
    "SuperstepRuntime",
    "UndirectedGraph",
    "amdahl_speedup",
    "apm_update",
    "coarsen",
    "cut_dendrogram",
    "degree_weight",
    "delta_modularity_exact",
    "delta_modularity_textbook",
    "fit_parallel_fraction",
    "from_arrays",
    "from_edge_list",
    "kmeans",
    "kmeans_search",
    "llp",
    "local_moving_phase",
    "louvain",
    "lpa_basic",
    "lpa_scored",
    "modularity",
    "partition_entropy",
    "read_partition",
    "read_snap_edge_list",
    "run_benchmark",
    "run_supersteps",
    "single_link_dendrogram",
    "total_weight",
    "variation_of_information",
    "write_partition",
]
