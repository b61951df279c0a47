"""Shared fixtures: the golden fixture inputs and a seeded random-graph mill."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))  # for reference_scorer / graphgen

from argscore import KnowledgeGraph, MetricVector, Node, default_config, parse_graph

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def cnn_document() -> dict:
    return json.loads((DATA_DIR / "cnn_graph.json").read_text())


@pytest.fixture(scope="session")
def cnn_graph(cnn_document) -> KnowledgeGraph:
    return parse_graph(cnn_document)


@pytest.fixture(scope="session")
def cnn_metrics() -> dict[int, MetricVector]:
    raw = json.loads((DATA_DIR / "cnn_metrics.json").read_text())
    return {int(k): MetricVector.from_mapping(v) for k, v in raw.items()}


@pytest.fixture(scope="session")
def config():
    return default_config()


ROLE_POOL = ("Claim", "Evidence", "Method", "Result", "Context", "Assumption",
             "Counterevidence", "Limitation")


def random_graph(
    rng: np.random.Generator,
    *,
    max_nodes: int = 16,
    min_nodes: int = 3,
    ensure_conclusion: bool = True,
    edge_prob: float = 0.35,
) -> KnowledgeGraph:
    """A random valid DAG: ids ascend along edges, node 0 is a Hypothesis.

    When ``ensure_conclusion`` the last node is a Conclusion and every node
    has at least one earlier parent, so a hypothesis->conclusion bridge is
    guaranteed; otherwise roles and connectivity are unconstrained beyond
    validity.
    """
    n = int(rng.integers(min_nodes, max_nodes + 1))
    roles = ["Hypothesis"]
    for _ in range(n - 2):
        # occasional extra Hypothesis/Conclusion nodes mid-graph exercise
        # multi-seed bridges and paths through terminal roles
        draw = rng.random()
        if draw < 0.08:
            roles.append("Hypothesis")
        elif draw < 0.16:
            roles.append("Conclusion")
        else:
            roles.append(ROLE_POOL[int(rng.integers(len(ROLE_POOL)))])
    if n > 1:
        roles.append("Conclusion" if ensure_conclusion else
                     ROLE_POOL[int(rng.integers(len(ROLE_POOL)))])

    parents: dict[int, set[int]] = {0: set()}
    for i in range(1, n):
        chosen = {int(p) for p in range(i) if rng.random() < edge_prob}
        if ensure_conclusion and not chosen:
            chosen = {int(rng.integers(i))}
        parents[i] = chosen

    children: dict[int, set[int]] = {i: set() for i in range(n)}
    for i, parent_ids in parents.items():
        for p in parent_ids:
            children[p].add(i)

    nodes = {}
    for i in range(n):
        words = " ".join(f"w{int(t)}" for t in rng.integers(0, 40, size=5))
        nodes[i] = Node(
            id=i,
            text=f"statement {i} {words}",
            role=roles[i],
            parents=frozenset(parents[i]),
            children=frozenset(children[i]),
        )
    return KnowledgeGraph(nodes=nodes)


def random_metrics(
    rng: np.random.Generator,
    graph: KnowledgeGraph,
    *,
    present_prob: float = 1.0,
) -> dict[int, MetricVector]:
    metrics = {}
    for i in graph.node_ids:
        if rng.random() <= present_prob:
            metrics[i] = MetricVector(*(float(x) for x in rng.random(6)))
    return metrics


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(20240817))


def pytest_runtest_logreport(report):
    """One FAIL line per failed acceptance criterion (PASS lines print inline)."""
    if report.failed and report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1].replace("test_", "").replace("_", " ")
        print(f"\nACCEPTANCE FAIL: {name}")
