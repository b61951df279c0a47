"""argscore: trust-propagating scoring for role-labeled argument DAGs.

The library validates argument graphs, fuses per-node verification metrics
into qualities, propagates trust along dependency edges with explicit
gating, aggregates six interpretable graph-level components into a paper
score, supports streaming per-node updates, and calibrates its parameter
surface against coarse triage labels.
"""

__version__ = "0.1.0"

from .components import (
    BridgeSubgraph,
    ComponentScores,
    ScoredGraph,
    ScoreReport,
    best_path_reliability,
    bridge_coverage,
    bridge_subgraph,
    build_report,
    coherence,
    compute_components,
    final_score,
    fragility,
    redundancy,
    role_coverage,
    score_graph,
)
from .config import (
    ComponentWeights,
    EdgeWeights,
    PropagationParams,
    ScoreConfig,
    SynergySpec,
    config_from_dict,
    default_config,
    load_config,
    with_propagation,
)
from .errors import (
    BudgetZeroError,
    CycleError,
    DegenerateLabelsError,
    DegenerateWeightsError,
    EmptyAggregateError,
    EngineError,
    InvalidGraphError,
    MalformedDocumentError,
    MalformedMetricsError,
    NoValidTrialsError,
    RepairUnavailableError,
    UnknownDimensionError,
    UnknownNodeError,
)
from .graph import (
    METRIC_NAMES,
    ROLES,
    KnowledgeGraph,
    MetricVector,
    Node,
    ValidationIssue,
    ValidationReport,
    bfs_order_from_hypotheses,
    canonical_role,
    parse_graph,
    repair_loop,
    topological_order,
    validate,
    validate_document,
)
from .scoring import (
    EdgeScore,
    GraphScores,
    aggregate,
    gated_edge_confidence,
    jaccard_alignment,
    node_quality,
    propagate_trust,
    raw_edge_confidence,
    score_graph_nodes,
    synergy,
)
from .session import ScoreDelta, Session, SessionProtocol, init_session

__all__ = [name for name in dir() if not name.startswith("_")]
