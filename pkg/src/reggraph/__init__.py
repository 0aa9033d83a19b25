"""Regression graphs: block-ordered mixed graphs with arrows, dashed and
full lines, their implied independence structure, graph transformations,
exact distributional oracles, and sequences-of-regressions model
selection."""

from .graph import (
    ArrowPointsToPast,
    DuplicateEdge,
    Edge,
    EdgeKind,
    EdgeKindViolatesBlocks,
    GraphError,
    NodeNotInAnyBlock,
    RegressionGraph,
    VConfiguration,
    VKind,
    build_graph,
    connected_components_undirected,
    defining_statements,
    derive_block_ordering,
    enumerate_vs,
    factorization,
)
from .independence import (
    GraphTooLarge,
    IndependenceStatement,
    NodesNotDisjoint,
    NoWitnessFound,
    UnknownNode,
    implied_structure,
    implies,
    parse_statement,
    structure_signature,
    theorem1_witness,
)
from .oracle import (
    DiscretePMF,
    GaussianModel,
    PDRepairFailed,
    Property,
    SingularSubmatrix,
    check_property,
    implied_covariance,
    is_independent,
    partial_correlation,
    partial_correlation_named,
    random_faithful_model,
    random_pmf,
)
from .textio import (
    emit_graph_json,
    emit_graph_text,
    load_graph,
    parse_graph_json,
    parse_graph_text,
    to_dot,
)
from .transform import (
    ConditioningNotSupported,
    EdgeNotDashed,
    InducedGraph,
    NodeSetMismatch,
    expand_full_line,
    expand_hidden,
    marginalize,
    markov_equivalent,
)

__version__ = "0.1.0"
