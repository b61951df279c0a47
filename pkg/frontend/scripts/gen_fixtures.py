"""Record real engine frames for the frontend's hermetic tests.

Runs the session protocol in-process and writes the exact frame sequences
the UI tests replay. Re-run after any engine change that alters reports:

    python frontend/scripts/gen_fixtures.py
"""

from __future__ import annotations

import json
from pathlib import Path

from argscore import MetricVector, default_config, parse_graph, score_graph
from argscore.session import SessionProtocol

FIXTURES = Path(__file__).resolve().parent.parent / "test" / "fixtures"

GRAPH = {
    "nodes": [
        {"id": 0, "text": "Sparse attention scales transformers to long inputs",
         "role": "Hypothesis", "parents": None, "children": [1, 2]},
        {"id": 1, "text": "We evaluate on 16k-token retrieval benchmarks",
         "role": "Method", "parents": [0], "children": [3]},
        {"id": 2, "text": "Dense attention cost grows quadratically",
         "role": "Context", "parents": [0], "children": None},
        {"id": 3, "text": "Sparse models match dense quality at 4x less compute",
         "role": "Result", "parents": [1], "children": [4]},
        {"id": 4, "text": "Sparse attention is a practical default for long documents",
         "role": "Conclusion", "parents": [3], "children": None},
    ]
}

METRICS = {
    0: {"credibility": 0.8, "relevance": 0.9, "evidence_strength": 0.6,
        "method_rigor": 0.5, "reproducibility": 0.5, "citation_support": 0.7},
    1: {"credibility": 0.9, "relevance": 0.8, "evidence_strength": 0.6,
        "method_rigor": 0.9, "reproducibility": 0.8, "citation_support": 0.5},
    2: {"credibility": 0.9, "relevance": 0.6, "evidence_strength": 0.7,
        "method_rigor": 0.5, "reproducibility": 0.6, "citation_support": 0.9},
    3: {"credibility": 0.8, "relevance": 0.8, "evidence_strength": 0.9,
        "method_rigor": 0.8, "reproducibility": 0.7, "citation_support": 0.6},
    4: {"credibility": 0.7, "relevance": 0.9, "evidence_strength": 0.6,
        "method_rigor": 0.5, "reproducibility": 0.5, "citation_support": 0.6},
}

DEGRADED_NODE_1 = {**METRICS[1], "credibility": 0.1}


def main() -> None:
    FIXTURES.mkdir(parents=True, exist_ok=True)
    config = default_config()

    protocol = SessionProtocol()
    exchange = []

    def call(message):
        reply = protocol.handle(message)
        exchange.append({"send": message, "receive": reply})
        return reply

    call({"type": "init", "graph": GRAPH})
    for node_id in (0, 1, 2, 3, 4):
        call({"type": "update", "node_id": node_id, "metrics": METRICS[node_id]})
    # what-if: degrade node 1 credibility, then revert it
    call({"type": "update", "node_id": 1, "metrics": DEGRADED_NODE_1})
    call({"type": "update", "node_id": 1, "metrics": METRICS[1]})
    # what-if: eta = 1.0 (gate off), then back to the default config
    eta_one = config.to_dict()
    eta_one["propagation"]["eta"] = 1.0
    call({"type": "set_config", "config": eta_one})
    call({"type": "set_config", "config": config.to_dict()})

    (FIXTURES / "session_exchange.json").write_text(json.dumps(exchange, indent=2))

    graph = parse_graph(GRAPH)
    metrics = {i: MetricVector.from_mapping(m) for i, m in METRICS.items()}
    report = score_graph(graph, metrics, config).report.to_dict()
    (FIXTURES / "path_report.json").write_text(json.dumps(report, indent=2))
    (FIXTURES / "path_graph.json").write_text(json.dumps(GRAPH, indent=2))

    golden = json.loads(
        (Path(__file__).resolve().parents[2] / "tests" / "data"
         / "golden_cnn_report.json").read_text()
    )
    (FIXTURES / "golden_report.json").write_text(json.dumps(golden, indent=2))

    print(f"wrote fixtures to {FIXTURES}")
    print("committed best_path:", report["best_path"])


if __name__ == "__main__":
    main()
