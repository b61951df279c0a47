"""Walkthrough: ML-ready exports from a scored graph.

Node/edge feature matrices (CSV), a seeded random-walk corpus, and the
fixed-length paper fingerprint. All exports copy values from the score
report; nothing is re-derived, so they stay consistent with what a reviewer
sees.

    python demos/04_exports.py
"""

import numpy as np

from argscore import MetricVector, default_config, parse_graph, score_graph
from argscore.export import (
    edge_feature_matrix,
    node_feature_matrix,
    paper_fingerprint,
    random_walk_corpus,
    walks_to_text,
)

document = {
    "nodes": [
        {"id": 0, "text": "Hybrid retrieval beats either retriever alone",
         "role": "Hypothesis", "parents": None, "children": [1, 2]},
        {"id": 1, "text": "BM25 and dense scores are combined by reciprocal rank",
         "role": "Method", "parents": [0], "children": [3]},
        {"id": 2, "text": "Dense retrievers miss rare entities",
         "role": "Evidence", "parents": [0], "children": [3]},
        {"id": 3, "text": "Hybrid wins on 9 of 11 BEIR tasks",
         "role": "Result", "parents": [1, 2], "children": [4]},
        {"id": 4, "text": "Use hybrid retrieval when entity coverage matters",
         "role": "Conclusion", "parents": [3], "children": None},
    ]
}

rng = np.random.default_rng(4)
graph = parse_graph(document)
metrics = {i: MetricVector(*(float(x) for x in rng.uniform(0.4, 0.95, 6)))
           for i in graph.node_ids}
scored = score_graph(graph, metrics, default_config())

# ---------------------------------------------------------------------------
# 1. Node features: 6 metrics + quality + trust + role one-hot + degrees
# ---------------------------------------------------------------------------

nodes = node_feature_matrix(scored)
print(f"node feature matrix: {nodes.shape[0]} rows x {nodes.shape[1]} cols")
print("columns:", ", ".join(nodes.columns))
print(nodes.to_csv().splitlines()[1][:100], "...")

# ---------------------------------------------------------------------------
# 2. Edge features: the full confidence breakdown per edge
# ---------------------------------------------------------------------------

edges = edge_feature_matrix(scored)
print(f"\nedge feature matrix: {edges.shape[0]} rows x {edges.shape[1]} cols")
for row_id, row in zip(edges.row_ids, edges.values):
    print(f"  {row_id}: prior={row[0]:.2f} raw={row[5]:.3f} gated={row[6]:.3f}")

# ---------------------------------------------------------------------------
# 3. Random-walk corpus: directed, weighted by gated confidence, seeded
# ---------------------------------------------------------------------------

walks = random_walk_corpus(scored, n_walks=6, walk_length=5, seed=123)
print("\nrandom walks (seed 123):")
print(walks_to_text(walks))
assert walks == random_walk_corpus(scored, 6, 5, seed=123)  # same seed, same corpus

# ---------------------------------------------------------------------------
# 4. Fingerprint: a 32-slot summary vector for downstream models
# ---------------------------------------------------------------------------

fp = paper_fingerprint(scored)
print("fingerprint length:", len(fp.values))
print("components slice:", [round(v, 3) for v in fp.values[:6]])
print("role histogram slice:", [round(v, 3) for v in fp.values[18:28]])
