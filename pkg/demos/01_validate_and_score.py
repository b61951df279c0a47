"""Walkthrough: parse an argument graph, validate it, repair it, score it.

Run from the repository root:

    python demos/01_validate_and_score.py
"""

import json

from argscore import (
    MetricVector,
    default_config,
    parse_graph,
    repair_loop,
    score_graph,
    validate_document,
)

# ---------------------------------------------------------------------------
# 1. A paper as a role-labeled DAG
# ---------------------------------------------------------------------------
# Each node is a short excerpt with one of ten roles; edges point from a
# supporting statement to the statement that depends on it. The document
# format is a single JSON object with a "nodes" array.

document = {
    "nodes": [
        {"id": 0, "text": "Intermittent fasting improves metabolic health",
         "role": "Hypothesis", "parents": None, "children": [1, 2]},
        {"id": 1, "text": "Randomized trial of 120 adults over 12 weeks",
         "role": "Method", "parents": [0], "children": [3]},
        {"id": 2, "text": "Prior cohort studies reported weight loss",
         "role": "Evidence", "parents": [0], "children": [4]},
        {"id": 3, "text": "Fasting group lost 4.2kg versus 1.1kg control",
         "role": "Result", "parents": [1], "children": [4]},
        {"id": 4, "text": "Time-restricted eating is an effective intervention",
         "role": "Conclusion", "parents": [2, 3], "children": None},
    ]
}

graph, report = validate_document(document)
print("valid:", report.valid)
print("edges:", graph.edges())

# ---------------------------------------------------------------------------
# 2. Validation catches structural defects and reports all of them
# ---------------------------------------------------------------------------

broken = {"nodes": [
    {"id": 0, "text": "claim", "role": "Recommendation",  # not in the ontology
     "parents": None, "children": [1]},
    {"id": 1, "text": "evidence", "role": "Evidence", "parents": [0, 99],  # 99 missing
     "children": None},
]}
_, bad_report = validate_document(broken)
for issue in bad_report.errors:
    print("defect:", issue.code, "->", issue.message)

# ---------------------------------------------------------------------------
# 3. The bounded repair loop delegates fixing to an external corrector
# ---------------------------------------------------------------------------
# The engine never rewrites documents itself. Here the "repairer" is a stub
# that fixes the role and drops the dangling reference; in production it
# would be a call to whatever produced the document in the first place.


def stub_repairer(doc, errors):
    fixed = json.loads(json.dumps(doc))
    fixed["nodes"][0]["role"] = "Claim"
    fixed["nodes"][1]["parents"] = [0]
    return fixed


result = repair_loop(broken, stub_repairer, max_attempts=3)
print("repaired after", result.repair_calls, "call(s); valid:", result.report.valid)

# ---------------------------------------------------------------------------
# 4. Scoring: metrics in, report out
# ---------------------------------------------------------------------------
# Six verification metrics per node (normally produced by an external
# verification stage) drive node qualities; qualities, role priors, lexical
# alignment, and role-pair synergy drive edge confidences; trust propagates
# down dependency edges and gates what each edge exposes.

metrics = {
    0: MetricVector(0.8, 0.9, 0.5, 0.4, 0.3, 0.6),
    1: MetricVector(0.7, 0.5, 0.5, 0.9, 0.8, 0.4),
    2: MetricVector(0.6, 0.7, 0.7, 0.3, 0.3, 0.8),
    3: MetricVector(0.9, 0.8, 0.8, 0.7, 0.6, 0.5),
    4: MetricVector(0.8, 0.8, 0.6, 0.4, 0.4, 0.6),
}

scored = score_graph(graph, metrics, default_config())
rep = scored.report

print("\nper-node quality and trust:")
for row in rep.nodes:
    print(f"  node {row['id']:>2} {row['role']:<11} q={row['quality']:.3f} t={row['trust']:.3f}")

print("\nper-edge confidence (raw -> gated):")
for row in rep.edges:
    print(f"  {row['parent']}->{row['child']}: {row['raw']:.3f} -> {row['gated']:.3f}")

print("\ngraph-level components:")
for name, value in rep.components.to_dict().items():
    print(f"  {name:<22} {value:.3f}")

print("\nbest hypothesis->conclusion path:", rep.best_path)
print(f"final score: {rep.score:.4f}  (raw {rep.s_raw:.4f}, normalized {rep.s_norm:.4f})")
