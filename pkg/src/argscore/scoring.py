"""Node-, edge-, and trust-level scoring.

The pipeline for one graph is strictly staged and deterministic:
qualities -> raw edge confidences -> propagated trust -> gated confidences.
All arithmetic is 64-bit float with no intermediate rounding, and every
iteration runs in sorted id order, so identical inputs produce bit-identical
outputs.

Nodes whose metrics have not arrived yet score quality = trust = 0.5, and
every edge touching such a node takes the configured fallback raw
confidence. This keeps streaming scores defined at all times.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .config import PropagationParams, ScoreConfig
from .errors import EmptyAggregateError
from .graph import KnowledgeGraph, MetricVector, topological_order

#: Quality and trust reported for a node whose metrics are still pending.
PENDING_QUALITY = 0.5

#: Lower clamp applied to parent trust inside the contribution product.
TRUST_FLOOR = 1e-6

_TOKEN_RE = re.compile(r"[0-9a-z]+")


def clip01(x: float) -> float:
    return 0.0 if x < 0.0 else (1.0 if x > 1.0 else x)


def reweighted_metrics(metrics: MetricVector, config: ScoreConfig) -> tuple[float, ...]:
    """Apply global per-metric weights, clipping each back into [0, 1]."""
    g = config.global_metric_weights
    m = metrics.as_tuple()
    return tuple(clip01(g[k] * m[k]) for k in range(6))


def node_quality(metrics: MetricVector, role: Optional[str], config: ScoreConfig) -> float:
    """Fuse six metrics into one quality using role-specific weights.

    Weights are normalized by their l1 magnitude, so only relative emphasis
    matters. A role with no weight vector, or an all-zero one, falls back to
    the mean of the six reweighted metrics.
    """
    tilde = reweighted_metrics(metrics, config)
    weights = config.role_quality_weights.get(role) if role is not None else None
    if weights is None or all(w == 0.0 for w in weights):
        return clip01(sum(tilde) / 6.0)
    numerator = 0.0
    denominator = config.epsilon
    for k in range(6):
        numerator += weights[k] * tilde[k]
        denominator += abs(weights[k])
    return clip01(numerator / denominator)


def tokenize(text: str) -> frozenset[str]:
    """Deduplicated lowercase tokens: maximal ASCII alphanumeric runs."""
    return frozenset(_TOKEN_RE.findall(text.lower()))


def jaccard_alignment(text_u: str, text_v: str) -> float:
    """Jaccard overlap of the two texts' token sets; both empty -> 0."""
    tokens_u = tokenize(text_u)
    tokens_v = tokenize(text_v)
    union = tokens_u | tokens_v
    if not union:
        return 0.0
    return len(tokens_u & tokens_v) / len(union)


def _mix(values: Sequence[float], weights: Sequence[float], epsilon: float) -> float:
    numerator = 0.0
    denominator = epsilon
    for k in range(6):
        numerator += weights[k] * values[k]
        denominator += abs(weights[k])
    return numerator / denominator


def synergy(
    metrics_u: MetricVector,
    metrics_v: MetricVector,
    role_u: Optional[str],
    role_v: Optional[str],
    config: ScoreConfig,
) -> float:
    """Role-pair synergy: how well these metrics support this relationship.

    Known role pairs mix the parent and child reweighted metric vectors with
    pair-specific weights and average the two mixes; unspecified pairs use an
    equal-weight average of the parent and child metric means.
    """
    tilde_u = reweighted_metrics(metrics_u, config)
    tilde_v = reweighted_metrics(metrics_v, config)
    spec = config.synergy_specs.get((role_u, role_v))
    if spec is None:
        value = 0.5 * (sum(tilde_u) / 6.0) + 0.5 * (sum(tilde_v) / 6.0)
    else:
        value = 0.5 * _mix(tilde_u, spec.parent_mix, config.epsilon) + 0.5 * _mix(
            tilde_v, spec.child_mix, config.epsilon
        )
    return clip01(value)


def raw_edge_confidence(
    prior: float,
    parent_quality: float,
    child_quality: float,
    alignment: float,
    synergy_value: float,
    config: ScoreConfig,
) -> float:
    """Clipped weighted sum of the five edge features."""
    w = config.edge_weights
    return clip01(
        w.role_prior * prior
        + w.parent_quality * parent_quality
        + w.child_quality * child_quality
        + w.alignment * alignment
        + w.synergy * synergy_value
    )


def aggregate(values: Sequence[float], params: PropagationParams) -> float:
    """Aggregate parent contributions with the configured mode.

    softmin weights each value by exp(-beta * (z - z_min) / (z_max - z_min))
    and falls back to the mean when the spread is at most 1e-12 or beta is 0;
    dampmin mixes min and mean with weight lambda on the mean.
    """
    if not values:
        raise EmptyAggregateError("cannot aggregate an empty contribution list")
    mode = params.agg_mode
    if mode == "min":
        return min(values)
    if mode == "mean":
        return _mean(values)
    if mode == "softmin":
        return _softmin(values, params.softmin_beta)
    # dampmin
    lam = params.dampmin_lambda
    return (1.0 - lam) * min(values) + lam * _mean(values)


def _mean(values: Sequence[float]) -> float:
    total = 0.0
    for value in values:
        total += value
    return total / len(values)


def _softmin(values: Sequence[float], beta: float) -> float:
    z_min = min(values)
    z_max = max(values)
    spread = z_max - z_min
    if spread <= 1e-12 or beta == 0.0:
        return _mean(values)
    weight_sum = 0.0
    weighted = 0.0
    for value in values:
        w = math.exp(-beta * (value - z_min) / spread)
        weight_sum += w
        weighted += w * value
    return weighted / weight_sum


def gated_edge_confidence(raw: float, parent_trust: float, params: PropagationParams) -> float:
    """Gate a raw confidence by parent trust, floored at eta.

    Uses the unclamped parent trust; 0 ** 0 is taken as 1 so alpha = 0
    disables the gate entirely (gate factor 1).
    """
    gate = params.eta + (1.0 - params.eta) * parent_trust**params.alpha
    return clip01(raw * gate)


def propagate_trust(
    graph: KnowledgeGraph,
    qualities: Mapping[int, float],
    raw_confidences: Mapping[tuple[int, int], float],
    params: PropagationParams,
    *,
    pinned: Iterable[int] = (),
) -> dict[int, float]:
    """Single-pass trust propagation in topological order.

    Parentless nodes take trust = quality. Otherwise each parent u
    contributes z = max(1e-6, t_u) ** alpha * raw(u -> v), the contributions
    are aggregated, and t_v = clip01(q_v * Agg). Nodes in ``pinned`` (metrics
    still missing) keep trust equal to their placeholder quality, and with
    propagation disabled every node takes t = q.
    """
    order = topological_order(graph)
    pinned_set = set(pinned)
    parents: dict[int, list[int]] = {i: [] for i in graph.node_ids}
    for u, v in graph.edges():
        parents[v].append(u)

    trusts: dict[int, float] = {}
    for v in order:
        q_v = qualities[v]
        if not params.enabled or v in pinned_set or not parents[v]:
            trusts[v] = q_v
            continue
        contributions = [
            max(TRUST_FLOOR, trusts[u]) ** params.alpha * raw_confidences[(u, v)]
            for u in sorted(parents[v])
        ]
        # Clamping the aggregate first makes t <= q hold exactly in floats.
        trusts[v] = clip01(q_v * clip01(aggregate(contributions, params)))
    return {i: trusts[i] for i in graph.node_ids}


@dataclass(frozen=True)
class EdgeScore:
    """Feature breakdown plus raw and gated confidence for one edge."""

    parent: int
    child: int
    prior: float
    parent_quality: float
    child_quality: float
    alignment: float
    synergy: float
    raw: float
    gated: float

    def to_dict(self) -> dict[str, object]:
        return {
            "parent": self.parent,
            "child": self.child,
            "prior": self.prior,
            "parent_quality": self.parent_quality,
            "child_quality": self.child_quality,
            "alignment": self.alignment,
            "synergy": self.synergy,
            "raw": self.raw,
            "gated": self.gated,
        }


@dataclass(frozen=True)
class GraphScores:
    """Per-node qualities and trusts plus per-edge scores for one graph."""

    qualities: dict[int, float]
    trusts: dict[int, float]
    edges: dict[tuple[int, int], EdgeScore]
    missing_metrics: frozenset[int]

    @property
    def provisional(self) -> bool:
        return bool(self.missing_metrics)


def score_graph_nodes(
    graph: KnowledgeGraph,
    metrics: Mapping[int, MetricVector],
    config: ScoreConfig,
) -> GraphScores:
    """Deterministic full recomputation of node and edge scores.

    ``metrics`` maps node id to its MetricVector; nodes absent from the map
    are scored with the pending-metrics fallbacks described in the module
    docstring.
    """
    roles = graph.roles_canonical()
    missing = frozenset(i for i in graph.node_ids if i not in metrics)

    qualities: dict[int, float] = {}
    for i in graph.node_ids:
        if i in missing:
            qualities[i] = PENDING_QUALITY
        else:
            qualities[i] = node_quality(metrics[i], roles[i], config)

    features: dict[tuple[int, int], tuple[float, float, float, float, float]] = {}
    raw: dict[tuple[int, int], float] = {}
    for u, v in graph.edges():
        prior = config.role_prior(roles[u], roles[v])
        alignment = jaccard_alignment(graph.nodes[u].text, graph.nodes[v].text)
        if u in missing or v in missing:
            synergy_value = config.default_raw_conf
            raw[(u, v)] = config.default_raw_conf
        else:
            synergy_value = synergy(metrics[u], metrics[v], roles[u], roles[v], config)
            raw[(u, v)] = raw_edge_confidence(
                prior, qualities[u], qualities[v], alignment, synergy_value, config
            )
        features[(u, v)] = (prior, qualities[u], qualities[v], alignment, synergy_value)

    trusts = propagate_trust(graph, qualities, raw, config.propagation, pinned=missing)

    edges: dict[tuple[int, int], EdgeScore] = {}
    for u, v in graph.edges():
        prior, q_u, q_v, alignment, synergy_value = features[(u, v)]
        edges[(u, v)] = EdgeScore(
            parent=u,
            child=v,
            prior=prior,
            parent_quality=q_u,
            child_quality=q_v,
            alignment=alignment,
            synergy=synergy_value,
            raw=raw[(u, v)],
            gated=gated_edge_confidence(raw[(u, v)], trusts[u], config.propagation),
        )

    return GraphScores(qualities=qualities, trusts=trusts, edges=edges, missing_metrics=missing)
