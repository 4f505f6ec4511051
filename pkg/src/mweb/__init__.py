"""Maximum weighted edge biclique toolkit.

Solvers for the edge-weight and node-plus-edge biclique objectives on dense
weighted bipartite graphs, the reductions that connect them to CLIQUE, SAMBA
bicluster scoring and MDL summaries with holes.
"""

from .core import (
    EDGE_WEIGHT,
    NODE_PLUS_EDGE,
    Biclique,
    CapacityError,
    OptResult,
    TrivialInstanceError,
    ValidationError,
    WeightedBipartiteGraph,
    WeightSetDescriptor,
    biclique_weight,
    problem_p_value,
    weight_set_of,
)
from .estimators import BicliqueSolver, GammaProduct, MDLHSummarizer, SambaBiclusterer
from .solve import SolverConfig, solve, solve_branch_bound, solve_exact, solve_local_search

__all__ = [
    "EDGE_WEIGHT",
    "NODE_PLUS_EDGE",
    "Biclique",
    "BicliqueSolver",
    "CapacityError",
    "GammaProduct",
    "MDLHSummarizer",
    "OptResult",
    "SambaBiclusterer",
    "SolverConfig",
    "TrivialInstanceError",
    "ValidationError",
    "WeightSetDescriptor",
    "WeightedBipartiteGraph",
    "biclique_weight",
    "problem_p_value",
    "solve",
    "solve_branch_bound",
    "solve_exact",
    "solve_local_search",
    "weight_set_of",
]

__version__ = "0.1.0"
