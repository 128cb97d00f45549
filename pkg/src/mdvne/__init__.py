"""Cross-domain virtual network embedding: a desk-scale simulator with a
multi-objective embedding pipeline, two simplified baselines, and a
discrete-event workload engine."""

__version__ = "0.1.0"

from .model import (
    LinkKey,
    ModelError,
    PhysicalLink,
    PhysicalNode,
    SubstrateNetwork,
    VirtualLink,
    VirtualNetworkRequest,
    VirtualNode,
    link_key,
)
from .generators import (
    ConfigError,
    SubstrateConfig,
    VnrConfig,
    arrival_times,
    generate_substrate,
    generate_vnr,
)
from .paths import GraphView, PathTable, all_pairs_shortest_paths, dijkstra_path
from .embedder import (
    CandidateSet,
    EmbedderConfig,
    Embedding,
    ObjectiveWeights,
    PathAssignment,
    check_link_feasible,
    check_node_feasible,
    embed,
    embedding_cost,
    embedding_delay,
    map_inter_domain,
    map_intra_domain,
    node_mapping_cost,
    objective_value,
    partition_vnr,
    select_candidates,
)
from .baselines import (
    ALGORITHM_LABELS,
    ALGORITHMS,
    embed_boundary_hops,
    embed_link_first,
)
from .sim import (
    ConservationAuditor,
    Event,
    MetricsSeries,
    RunScenario,
    Simulation,
    commit,
    release,
    run,
)
