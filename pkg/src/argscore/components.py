"""Bridge subgraph, the six graph-level components, and the paper score.

Every component is computed on the *bridge*: the nodes lying on at least one
directed path from a Hypothesis node to a Conclusion node. An empty bridge
scores 0 on every component (including fragility), which the signed
normalization then maps to a low-but-defined final score.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from typing import Mapping, Optional

from . import flow
from .config import COMPONENT_NAMES, ScoreConfig
from .errors import DegenerateWeightsError
from .graph import KnowledgeGraph, MetricVector
from .scoring import GraphScores, clip01, score_graph_nodes

#: Roles whose presence on the bridge the coverage component counts.
KEY_ROLES = ("Evidence", "Method", "Result")

#: Redundancy is capped at this many edge-disjoint support chains.
REDUNDANCY_CAP = 3.0

#: Floor applied to 1 - confidence when building fragility capacities.
FRAGILITY_CAPACITY_FLOOR = 1e-6

_SOURCE = "__source__"
_SINK = "__sink__"


@dataclass(frozen=True)
class BridgeSubgraph:
    node_ids: frozenset[int]
    edge_set: tuple[tuple[int, int], ...]
    hypothesis_ids: frozenset[int]
    conclusion_ids: frozenset[int]

    @property
    def empty(self) -> bool:
        return not self.node_ids


def bridge_subgraph(graph: KnowledgeGraph) -> BridgeSubgraph:
    """Nodes reachable from some Hypothesis that also reach some Conclusion."""
    edges = graph.edges()
    succ: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    pred: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    for u, v in edges:
        succ[u].append(v)
        pred[v].append(u)

    def reach(seeds, neighbors) -> set[int]:
        seen = set(seeds)
        stack = list(seeds)
        while stack:
            node = stack.pop()
            for nxt in neighbors[node]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    forward = reach(graph.hypothesis_ids(), succ)
    backward = reach(graph.conclusion_ids(), pred)
    bridge_nodes = forward & backward
    bridge_edges = tuple((u, v) for u, v in edges if u in bridge_nodes and v in bridge_nodes)
    return BridgeSubgraph(
        node_ids=frozenset(bridge_nodes),
        edge_set=bridge_edges,
        hypothesis_ids=frozenset(h for h in graph.hypothesis_ids() if h in bridge_nodes),
        conclusion_ids=frozenset(c for c in graph.conclusion_ids() if c in bridge_nodes),
    )


def bridge_coverage(bridge: BridgeSubgraph, graph: KnowledgeGraph) -> float:
    if not graph.nodes:
        return 0.0
    return len(bridge.node_ids) / len(graph.nodes)


def best_path_reliability(
    bridge: BridgeSubgraph,
    gated: Mapping[tuple[int, int], float],
) -> tuple[float, tuple[int, ...]]:
    """Best hypothesis-to-conclusion chain by product of gated confidences.

    Returns the geometric mean of the winning path's edge confidences
    (length-normalized) and the path itself. Ties on the product are broken
    by shorter path, then lexicographically smaller id sequence. If no path
    with a positive product exists the result is (0.0, ()).
    """
    if bridge.empty or not bridge.hypothesis_ids or not bridge.conclusion_ids:
        return 0.0, ()

    # Zero-confidence edges can never lie on a positive-product path; dropping
    # them keeps the prefix-optimality argument of the DP airtight.
    succ: dict[int, list[tuple[int, float]]] = {i: [] for i in bridge.node_ids}
    indegree: dict[int, int] = {i: 0 for i in bridge.node_ids}
    for u, v in bridge.edge_set:
        confidence = gated[(u, v)]
        if confidence > 0.0:
            succ[u].append((v, confidence))
            indegree[v] += 1

    ready = [i for i in bridge.node_ids if indegree[i] == 0]
    heapq.heapify(ready)
    topo: list[int] = []
    while ready:
        node = heapq.heappop(ready)
        topo.append(node)
        for child, _ in succ[node]:
            indegree[child] -= 1
            if indegree[child] == 0:
                heapq.heappush(ready, child)

    # best[v]: (product, path) of the best hypothesis->v chain, compared by
    # (-product, length, id sequence).
    best: dict[int, tuple[float, tuple[int, ...]]] = {}

    def better(a: tuple[float, tuple[int, ...]], b: tuple[float, tuple[int, ...]]) -> bool:
        if a[0] != b[0]:
            return a[0] > b[0]
        if len(a[1]) != len(b[1]):
            return len(a[1]) < len(b[1])
        return a[1] < b[1]

    for node in topo:
        if node in bridge.hypothesis_ids:
            candidate = (1.0, (node,))
            if node not in best or better(candidate, best[node]):
                best[node] = candidate
        if node not in best:
            continue
        product, path = best[node]
        for child, confidence in succ[node]:
            candidate = (product * confidence, path + (child,))
            if child not in best or better(candidate, best[child]):
                best[child] = candidate

    winner: Optional[tuple[float, tuple[int, ...]]] = None
    for conclusion in sorted(bridge.conclusion_ids):
        candidate = best.get(conclusion)
        if candidate is None or len(candidate[1]) < 2:
            continue
        if winner is None or better(candidate, winner):
            winner = candidate
    if winner is None or winner[0] <= 0.0:
        return 0.0, ()
    product, path = winner
    return product ** (1.0 / (len(path) - 1)), path


def redundancy(bridge: BridgeSubgraph) -> float:
    """Capped unit-capacity max-flow: edge-disjoint hypothesis->conclusion chains."""
    if bridge.empty or not bridge.edge_set:
        return 0.0
    arcs = [(u, v, 1.0) for u, v in bridge.edge_set]
    unbounded = float(len(bridge.edge_set) + 1)
    for h in sorted(bridge.hypothesis_ids):
        arcs.append((_SOURCE, h, unbounded))
    for c in sorted(bridge.conclusion_ids):
        arcs.append((c, _SINK, unbounded))
    result = flow.max_flow(arcs, _SOURCE, _SINK)
    return min(result.flow_value / REDUNDANCY_CAP, 1.0)


def fragility_flow(
    bridge: BridgeSubgraph,
    gated: Mapping[tuple[int, int], float],
) -> Optional[flow.FlowResult]:
    """The min-cut construction behind fragility; None when the bridge is empty.

    Internal capacities are max(1e-6, 1 - gated confidence): cheap cuts mean
    the argument is easy to sever where confidence is high on few edges.
    """
    if bridge.empty or not bridge.edge_set:
        return None
    capacities = {
        (u, v): max(FRAGILITY_CAPACITY_FLOOR, 1.0 - gated[(u, v)]) for u, v in bridge.edge_set
    }
    unbounded = sum(capacities.values()) + 1.0
    arcs = [(u, v, capacities[(u, v)]) for u, v in bridge.edge_set]
    for h in sorted(bridge.hypothesis_ids):
        arcs.append((_SOURCE, h, unbounded))
    for c in sorted(bridge.conclusion_ids):
        arcs.append((c, _SINK, unbounded))
    return flow.max_flow(arcs, _SOURCE, _SINK)


def fragility(bridge: BridgeSubgraph, gated: Mapping[tuple[int, int], float]) -> float:
    result = fragility_flow(bridge, gated)
    if result is None:
        return 0.0
    return result.cut_value / len(bridge.edge_set)


def coherence(bridge: BridgeSubgraph, graph: KnowledgeGraph, config: ScoreConfig) -> float:
    """Fraction of bridge edges whose role transition prior is at least 0.5."""
    if not bridge.edge_set:
        return 0.0
    roles = graph.roles_canonical()
    coherent = sum(1 for u, v in bridge.edge_set if config.role_prior(roles[u], roles[v]) >= 0.5)
    return coherent / len(bridge.edge_set)


def role_coverage(bridge: BridgeSubgraph, graph: KnowledgeGraph) -> float:
    """Fraction of the key roles (Evidence, Method, Result) present on the bridge."""
    present = {graph.nodes[i].role_canonical for i in bridge.node_ids}
    return sum(1 for role in KEY_ROLES if role in present) / len(KEY_ROLES)


@dataclass(frozen=True)
class ComponentScores:
    bridge_coverage: float
    best_path_reliability: float
    redundancy: float
    fragility: float
    coherence: float
    coverage: float
    best_path: tuple[int, ...] = ()

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in COMPONENT_NAMES)

    def to_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in COMPONENT_NAMES}


def compute_components(
    graph: KnowledgeGraph,
    scores: GraphScores,
    config: ScoreConfig,
) -> ComponentScores:
    bridge = bridge_subgraph(graph)
    gated = {key: edge.gated for key, edge in scores.edges.items()}
    reliability, path = best_path_reliability(bridge, gated)
    return ComponentScores(
        bridge_coverage=bridge_coverage(bridge, graph),
        best_path_reliability=reliability,
        redundancy=redundancy(bridge),
        fragility=fragility(bridge, gated),
        coherence=coherence(bridge, graph, config),
        coverage=role_coverage(bridge, graph),
        best_path=path,
    )


@dataclass(frozen=True)
class FinalScore:
    s_raw: float
    s_norm: float
    score: float


def final_score(
    components: ComponentScores,
    config: ScoreConfig,
    *,
    plain_clip: bool = False,
) -> FinalScore:
    """Weighted component sum, normalized into [0, 1], then into (0, 1).

    The signed normalization maps the reachable range [n, p] (n = sum of
    negative weights, p = sum of positive weights) onto [0, 1] so penalties
    keep the score interpretable; ``plain_clip`` instead clips the raw sum
    directly (the coarser headline formulation). The endpoint map
    s = eps + (1 - 2 eps) * s_norm keeps the final score strictly inside
    (0, 1).
    """
    gamma = config.component_weights.as_tuple()
    values = components.as_tuple()
    s_raw = 0.0
    for weight, value in zip(gamma, values):
        s_raw += weight * value

    if plain_clip:
        s_norm = clip01(s_raw)
    else:
        positive = 0.0
        negative = 0.0
        for weight in gamma:
            if weight > 0.0:
                positive += weight
            elif weight < 0.0:
                negative += weight
        span = positive - negative
        if span == 0.0:
            raise DegenerateWeightsError("all component weights are zero")
        s_norm = clip01((s_raw - negative) / span)

    eps = config.endpoint_epsilon
    return FinalScore(s_raw=s_raw, s_norm=s_norm, score=eps + (1.0 - 2.0 * eps) * s_norm)


@dataclass(frozen=True)
class ScoreReport:
    """Full scoring output for one graph, with a stable serialized layout."""

    schema_version: str
    mode_tag: Optional[str]
    provisional: bool
    config_fingerprint: str
    components: ComponentScores
    s_raw: float
    s_norm: float
    score: float
    nodes: tuple[dict, ...]
    edges: tuple[dict, ...]

    @property
    def best_path(self) -> tuple[int, ...]:
        return self.components.best_path

    def to_dict(self) -> dict[str, object]:
        return {
            "schema_version": self.schema_version,
            "mode_tag": self.mode_tag,
            "provisional": self.provisional,
            "config_fingerprint": self.config_fingerprint,
            "components": self.components.to_dict(),
            "best_path": list(self.components.best_path),
            "s_raw": self.s_raw,
            "s_norm": self.s_norm,
            "score": self.score,
            "nodes": [dict(row) for row in self.nodes],
            "edges": [dict(row) for row in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


REPORT_SCHEMA_VERSION = "1"


@dataclass(frozen=True)
class ScoredGraph:
    """A graph together with everything computed from it in one pass."""

    graph: KnowledgeGraph
    config: ScoreConfig
    metrics: dict[int, MetricVector]
    scores: GraphScores
    components: ComponentScores
    report: ScoreReport


def build_report(
    graph: KnowledgeGraph,
    metrics: Mapping[int, MetricVector],
    config: ScoreConfig,
    *,
    mode_tag: Optional[str] = None,
) -> ScoreReport:
    return score_graph(graph, metrics, config, mode_tag=mode_tag).report


def score_graph(
    graph: KnowledgeGraph,
    metrics: Mapping[int, MetricVector],
    config: ScoreConfig,
    *,
    mode_tag: Optional[str] = None,
) -> ScoredGraph:
    """Score a validated graph end to end and assemble the report.

    ``mode_tag`` is inert metadata: it is recorded on the report and never
    read by any scoring computation.
    """
    scores = score_graph_nodes(graph, metrics, config)
    components = compute_components(graph, scores, config)
    final = final_score(components, config)

    node_rows = tuple(
        {
            "id": i,
            "role": graph.nodes[i].role_canonical or graph.nodes[i].role,
            "quality": scores.qualities[i],
            "trust": scores.trusts[i],
            "has_metrics": i not in scores.missing_metrics,
            "metrics": metrics[i].to_dict() if i in metrics else None,
        }
        for i in graph.node_ids
    )
    edge_rows = tuple(scores.edges[key].to_dict() for key in sorted(scores.edges))

    report = ScoreReport(
        schema_version=REPORT_SCHEMA_VERSION,
        mode_tag=mode_tag if mode_tag is not None else graph.mode_tag,
        provisional=scores.provisional,
        config_fingerprint=config.fingerprint(),
        components=components,
        s_raw=final.s_raw,
        s_norm=final.s_norm,
        score=final.score,
        nodes=node_rows,
        edges=edge_rows,
    )
    return ScoredGraph(
        graph=graph,
        config=config,
        metrics=dict(metrics),
        scores=scores,
        components=components,
        report=report,
    )
