"""Online topology tracking of undirected graphs from streaming smooth signals."""

from .baseline import PrimalPG
from .dissimilarity import DissimilarityStream, batch_dissimilarity, snapshot_dissimilarity
from .dual import (Objective, SolveReport, dual_step, lipschitz_constant, primal_from_dual,
                   solve_batch)
from .edges import (apply_S, apply_S_transpose, from_adjacency, to_adjacency,
                    total_variation)
from .metrics import closeness_centrality, f_measure, grid_search, tracking_error
from .online import OnlineDPG
from .synth import GraphScenario, generate_graph, generate_stream, resample_edges, sample_signal

__version__ = "0.1.0"

__all__ = [
    "PrimalPG", "DissimilarityStream", "batch_dissimilarity", "snapshot_dissimilarity",
    "Objective", "SolveReport", "dual_step", "lipschitz_constant", "primal_from_dual",
    "solve_batch", "apply_S", "apply_S_transpose", "from_adjacency", "to_adjacency",
    "total_variation", "closeness_centrality", "f_measure", "grid_search", "tracking_error",
    "OnlineDPG", "GraphScenario", "generate_graph", "generate_stream", "resample_edges",
    "sample_signal",
]
