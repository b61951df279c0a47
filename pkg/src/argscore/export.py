"""Machine-learning-ready artifacts from a scored graph.

All exports are deterministic functions of (scored graph, config, seed) and
copy values straight out of the score results; nothing is re-derived. Column
orders are fixed and documented on each function.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .components import ScoredGraph
from .graph import METRIC_NAMES, ROLES
from .scoring import PENDING_QUALITY

EXPORT_SCHEMA_VERSION = "1"

#: Normalizers for the node/edge count slots of the fingerprint.
FINGERPRINT_NODE_NORM = 16.0
FINGERPRINT_EDGE_NORM = 32.0

#: Fixed fingerprint length; unused tail slots are zero padding.
FINGERPRINT_LENGTH = 32


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense real matrix with named columns and per-row entity ids."""

    row_ids: tuple
    columns: tuple[str, ...]
    values: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_ids), len(self.columns))

    def to_csv(self) -> str:
        lines = [",".join(("row_id",) + self.columns)]
        for row_id, row in zip(self.row_ids, self.values):
            cells = [_csv_id(row_id)] + [repr(float(x)) for x in row]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(self.to_csv())


def _csv_id(row_id) -> str:
    if isinstance(row_id, tuple):
        return "->".join(str(part) for part in row_id)
    return str(row_id)


NODE_FEATURE_COLUMNS = tuple(METRIC_NAMES) + ("quality", "trust") + tuple(
    f"role_{role}" for role in ROLES
) + ("in_degree", "out_degree")


def node_feature_matrix(scored: ScoredGraph) -> FeatureMatrix:
    """One row per node (ascending id), 20 columns.

    Columns: the six metrics (0.5 fallback when missing), quality, trust,
    the 10-way role one-hot in canonical role order, in-degree, out-degree.
    """
    graph = scored.graph
    in_degree = {i: 0 for i in graph.node_ids}
    out_degree = {i: 0 for i in graph.node_ids}
    for u, v in graph.edges():
        out_degree[u] += 1
        in_degree[v] += 1

    rows = []
    for i in graph.node_ids:
        metric_values = (
            scored.metrics[i].as_tuple() if i in scored.metrics else (PENDING_QUALITY,) * 6
        )
        role = graph.nodes[i].role_canonical
        one_hot = [1.0 if role == candidate else 0.0 for candidate in ROLES]
        rows.append(
            list(metric_values)
            + [scored.scores.qualities[i], scored.scores.trusts[i]]
            + one_hot
            + [float(in_degree[i]), float(out_degree[i])]
        )
    values = np.array(rows, dtype=float) if rows else np.zeros((0, len(NODE_FEATURE_COLUMNS)))
    return FeatureMatrix(row_ids=graph.node_ids, columns=NODE_FEATURE_COLUMNS, values=values)


EDGE_FEATURE_COLUMNS = (
    "prior",
    "parent_quality",
    "child_quality",
    "alignment",
    "synergy",
    "raw",
    "gated",
)


def edge_feature_matrix(scored: ScoredGraph) -> FeatureMatrix:
    """One row per edge (sorted by (parent, child)), 7 columns.

    Values are copied verbatim from the edge score breakdown.
    """
    keys = tuple(sorted(scored.scores.edges))
    rows = []
    for key in keys:
        edge = scored.scores.edges[key]
        rows.append(
            [edge.prior, edge.parent_quality, edge.child_quality, edge.alignment, edge.synergy,
             edge.raw, edge.gated]
        )
    values = np.array(rows, dtype=float) if rows else np.zeros((0, len(EDGE_FEATURE_COLUMNS)))
    return FeatureMatrix(row_ids=keys, columns=EDGE_FEATURE_COLUMNS, values=values)


def random_walk_corpus(
    scored: ScoredGraph,
    n_walks: int,
    walk_length: int,
    seed: int,
) -> list[list[int]]:
    """Seeded directed random walks weighted by gated edge confidence.

    Each walk starts at a uniformly sampled node and takes up to
    ``walk_length`` steps, choosing among children with probability
    proportional to the gated confidence of the edge taken. A sink (or a
    node whose outgoing confidences are all zero) terminates the walk early.
    """
    if n_walks < 1 or walk_length < 1:
        raise ValueError("n_walks and walk_length must both be >= 1")
    graph = scored.graph
    ids = list(graph.node_ids)
    if not ids:
        return []

    children: dict[int, list[int]] = {i: [] for i in ids}
    for u, v in graph.edges():
        children[u].append(v)
    for i in ids:
        children[i].sort()

    rng = np.random.Generator(np.random.PCG64(seed))
    walks: list[list[int]] = []
    for _ in range(n_walks):
        current = ids[int(rng.integers(len(ids)))]
        walk = [current]
        for _ in range(walk_length):
            succ = children[current]
            if not succ:
                break
            weights = np.array(
                [scored.scores.edges[(current, child)].gated for child in succ], dtype=float
            )
            total = float(weights.sum())
            if total <= 0.0:
                break
            current = succ[int(rng.choice(len(succ), p=weights / total))]
            walk.append(current)
        walks.append(walk)
    return walks


def walks_to_text(walks: list[list[int]]) -> str:
    """Line-delimited id sequences, one walk per line."""
    return "\n".join(" ".join(str(i) for i in walk) for walk in walks) + "\n"


@dataclass(frozen=True)
class Fingerprint:
    """Fixed-length summary vector of one scored graph."""

    values: tuple[float, ...]
    schema_version: str = EXPORT_SCHEMA_VERSION

    def to_dict(self) -> dict[str, object]:
        return {"schema_version": self.schema_version, "values": list(self.values)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def paper_fingerprint(scored: ScoredGraph) -> Fingerprint:
    """Length-32 vector summarizing a scored graph.

    Layout: 6 component scores, final score, mean/min/max of node qualities,
    mean/min/max of node trusts, mean/min/max of gated edge confidences,
    node and edge counts normalized by 16 and 32, the 10-way role histogram
    (normalized by node count), then zero padding to length 32. Empty
    statistics report 0.
    """
    graph = scored.graph
    values: list[float] = list(scored.components.as_tuple())
    values.append(scored.report.score)

    qualities = [scored.scores.qualities[i] for i in graph.node_ids]
    trusts = [scored.scores.trusts[i] for i in graph.node_ids]
    gated = [scored.scores.edges[key].gated for key in sorted(scored.scores.edges)]
    for series in (qualities, trusts, gated):
        if series:
            values.extend((sum(series) / len(series), min(series), max(series)))
        else:
            values.extend((0.0, 0.0, 0.0))

    values.append(len(graph.nodes) / FINGERPRINT_NODE_NORM)
    values.append(len(graph.edges()) / FINGERPRINT_EDGE_NORM)

    n = len(graph.nodes)
    for role in ROLES:
        count = sum(1 for i in graph.node_ids if graph.nodes[i].role_canonical == role)
        values.append(count / n if n else 0.0)

    values.extend(0.0 for _ in range(FINGERPRINT_LENGTH - len(values)))
    return Fingerprint(values=tuple(values))


def export_bundle(scored: ScoredGraph, out_dir, *, n_walks: int = 64, walk_length: int = 8,
                  seed: int = 0) -> dict[str, str]:
    """Write every export artifact into a directory; returns written paths."""
    import os

    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "node_features": os.path.join(out_dir, "node_features.csv"),
        "edge_features": os.path.join(out_dir, "edge_features.csv"),
        "walks": os.path.join(out_dir, "walks.txt"),
        "fingerprint": os.path.join(out_dir, "fingerprint.json"),
    }
    node_feature_matrix(scored).write_csv(paths["node_features"])
    edge_feature_matrix(scored).write_csv(paths["edge_features"])
    with open(paths["walks"], "w", encoding="utf-8") as handle:
        handle.write(walks_to_text(random_walk_corpus(scored, n_walks, walk_length, seed)))
    with open(paths["fingerprint"], "w", encoding="utf-8") as handle:
        handle.write(paper_fingerprint(scored).to_json())
    return paths
