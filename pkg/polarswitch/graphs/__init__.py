from .builders import collinearity_graph, degenerate_span_graph, orthogonality_graph, polarity_graph
from .core import (
    Graph,
    GraphError,
    complement,
    maximal_clique_sizes,
    maximal_cliques,
    srg_check,
    srg_params,
    triangles,
    triple_intersection_distribution,
)
from .graph6 import Graph6Error, graph6_decode, graph6_encode
from .isomorphism import (
    IsomorphismLimitError,
    find_isomorphism,
    four_clique_distribution,
    four_cliques_per_vertex,
    is_isomorphism,
    pair_profiles,
)

__all__ = [
    "Graph",
    "Graph6Error",
    "GraphError",
    "IsomorphismLimitError",
    "collinearity_graph",
    "complement",
    "degenerate_span_graph",
    "find_isomorphism",
    "four_clique_distribution",
    "four_cliques_per_vertex",
    "graph6_decode",
    "graph6_encode",
    "is_isomorphism",
    "maximal_clique_sizes",
    "maximal_cliques",
    "orthogonality_graph",
    "pair_profiles",
    "polarity_graph",
    "srg_check",
    "srg_params",
    "triangles",
    "triple_intersection_distribution",
]
