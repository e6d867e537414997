"""Core decomposition of multilayer networks, inner-most cores, and their uses in
densest-subgraph extraction, quasi-clique mining and community search."""

from .community import (
    CommunityQuery,
    CommunityResult,
    community_bruteforce,
    community_search,
    phi,
    sigma,
    theta,
)
from .decomposition import (
    ENGINES,
    Core,
    CoreDecomposition,
    TraversalStats,
    cores_path,
    decompose,
    decompose_bfs,
    decompose_dfs,
    decompose_hybrid,
    decompose_naive,
    lookup,
    maximal_vector,
    peel_core,
)
from .densest import DensestResult, delta, densest_bruteforce, densest_subgraph
from .errors import CapExceededError, EdgeListError, EmptyGraphError
from .graph import (
    IngestReport,
    MultilayerGraph,
    degree,
    layer_density,
    load_edge_list,
    min_degree,
    random_multilayer,
    read_edge_list,
    write_edge_list,
)
from .innermost import (
    InnermostSet,
    RightInnermostContext,
    filter_innermost,
    innermost_core_in_layer,
    innermost_cores,
    rim_cores,
)
from .quasiclique import (
    MiningParams,
    QuasiCliqueSet,
    is_quasi_clique,
    mine_fcgqc,
    mine_fcgqc_pruned,
    prune_graph,
)

__version__ = "0.1.0"
