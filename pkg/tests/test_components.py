"""Graph-level components: bridge, best path, flow metrics, final score."""

from __future__ import annotations

import dataclasses
import json

import numpy as np
import pytest

from argscore import (
    DegenerateWeightsError,
    MetricVector,
    best_path_reliability,
    bridge_coverage,
    bridge_subgraph,
    coherence,
    default_config,
    final_score,
    fragility,
    parse_graph,
    redundancy,
    role_coverage,
    score_graph,
    score_graph_nodes,
)
from argscore.components import ComponentScores, compute_components, fragility_flow
from argscore.config import ComponentWeights
from conftest import random_graph, random_metrics
from reference_scorer import (
    brute_min_cut,
    enumerate_paths,
    max_disjoint_paths,
    ref_best_path,
    ref_bridge,
    ref_components,
)

CFG = default_config()


def doc(*records):
    return parse_graph({"nodes": list(records)})


def rec(node_id, role, parents=None, children=None, text=None):
    return {
        "id": node_id,
        "text": text or f"text {node_id}",
        "role": role,
        "parents": parents,
        "children": children,
    }


def graph_nodes_for_oracle(graph):
    return {
        i: {"role": graph.nodes[i].role_canonical, "text": graph.nodes[i].text,
            "parents": list(graph.parents_of(i))}
        for i in graph.node_ids
    }


class TestBridge:
    def test_chain_is_fully_on_bridge(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
        )
        bridge = bridge_subgraph(graph)
        assert bridge.node_ids == {0, 1, 2}
        assert bridge.edge_set == ((0, 1), (1, 2))
        assert bridge.hypothesis_ids == {0}
        assert bridge.conclusion_ids == {2}

    def test_disconnected_conclusion_gives_empty_bridge(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0]),
            rec(2, "Conclusion"),
        )
        assert bridge_subgraph(graph).empty

    def test_dangling_node_excluded_from_diamond(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1, 2]),
            rec(1, "Claim", parents=[0], children=[3]),
            rec(2, "Evidence", parents=[0], children=[3]),
            rec(3, "Conclusion", parents=[1, 2]),
            rec(4, "Context"),
        )
        bridge = bridge_subgraph(graph)
        assert bridge.node_ids == {0, 1, 2, 3}
        assert 4 not in bridge.node_ids

    def test_coverage_values(self):
        chain = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
        )
        assert bridge_coverage(bridge_subgraph(chain), chain) == 1.0
        with_extra = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
            rec(3, "Context"),
        )
        assert bridge_coverage(bridge_subgraph(with_extra), with_extra) == 0.75
        empty = doc(rec(0, "Hypothesis"), rec(1, "Conclusion"))
        assert bridge_coverage(bridge_subgraph(empty), empty) == 0.0


class TestBestPath:
    def chain_graph(self):
        return doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
        )

    def test_geometric_mean_of_single_path(self):
        graph = self.chain_graph()
        bridge = bridge_subgraph(graph)
        value, path = best_path_reliability(bridge, {(0, 1): 0.9, (1, 2): 0.8})
        assert value == pytest.approx((0.9 * 0.8) ** 0.5, abs=1e-12)
        assert path == (0, 1, 2)

    def test_higher_product_wins_regardless_of_length(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1, 3]),
            rec(1, "Claim", parents=[0], children=[2]),
            rec(2, "Evidence", parents=[1], children=[4]),
            rec(3, "Method", parents=[0], children=[4]),
            rec(4, "Conclusion", parents=[2, 3]),
        )
        bridge = bridge_subgraph(graph)
        gated = {(0, 1): 0.9, (1, 2): 0.9, (2, 4): 0.889, (0, 3): 0.71, (3, 4): 0.71}
        # products: long path 0.9*0.9*0.889 = 0.7200..., short 0.5041
        value, path = best_path_reliability(bridge, gated)
        assert path == (0, 1, 2, 4)
        assert value == pytest.approx((0.9 * 0.9 * 0.889) ** (1 / 3), abs=1e-12)

    def test_zero_confidence_mandatory_edge_collapses(self):
        graph = self.chain_graph()
        bridge = bridge_subgraph(graph)
        value, path = best_path_reliability(bridge, {(0, 1): 0.0, (1, 2): 0.9})
        assert value == 0.0
        assert path == ()

    def test_matches_enumeration_oracle_on_random_graphs(self, rng):
        for _ in range(150):
            graph = random_graph(rng, max_nodes=10)
            metrics = random_metrics(rng, graph)
            scores = score_graph_nodes(graph, metrics, CFG)
            gated = {k: e.gated for k, e in scores.edges.items()}
            bridge = bridge_subgraph(graph)
            ours = best_path_reliability(bridge, gated)
            oracle = ref_best_path(graph_nodes_for_oracle(graph), gated)
            assert ours[1] == oracle[1]
            assert ours[0] == pytest.approx(oracle[0], abs=1e-12)


class TestRedundancyAndFragility:
    def test_two_disjoint_paths(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1, 2]),
            rec(1, "Claim", parents=[0], children=[3]),
            rec(2, "Evidence", parents=[0], children=[3]),
            rec(3, "Conclusion", parents=[1, 2]),
        )
        # one source edge pair through two middles: flow is 2
        assert redundancy(bridge_subgraph(graph)) == pytest.approx(2 / 3)

    def test_four_disjoint_paths_cap_at_one(self):
        records = [rec(0, "Hypothesis", children=[1, 2, 3, 4])]
        for i in (1, 2, 3, 4):
            records.append(rec(i, "Claim", parents=[0], children=[5]))
        records.append(rec(5, "Conclusion", parents=[1, 2, 3, 4]))
        graph = doc(*records)
        # max-flow through node 0 fan-out is 4
        assert redundancy(bridge_subgraph(graph)) == 1.0

    def test_single_path_is_one_third(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
        )
        assert redundancy(bridge_subgraph(graph)) == pytest.approx(1 / 3)

    def test_redundancy_equals_disjoint_path_oracle(self, rng):
        checked = 0
        while checked < 120:
            graph = random_graph(rng, max_nodes=8)
            bridge = bridge_subgraph(graph)
            if len(bridge.edge_set) > 10:
                continue
            checked += 1
            flow_paths = max_disjoint_paths(
                list(bridge.edge_set), set(bridge.hypothesis_ids), set(bridge.conclusion_ids)
            ) if bridge.edge_set else 0
            assert redundancy(bridge) == pytest.approx(min(flow_paths / 3.0, 1.0), abs=1e-12)

    def test_single_edge_fragility(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Conclusion", parents=[0]),
        )
        bridge = bridge_subgraph(graph)
        assert fragility(bridge, {(0, 1): 0.9}) == pytest.approx(0.1, abs=1e-12)
        assert fragility(bridge, {(0, 1): 1.0}) == pytest.approx(1e-6, abs=1e-15)

    def test_two_parallel_edges_must_both_be_cut(self):
        graph = doc(
            rec(0, "Hypothesis", children=[2]),
            rec(1, "Hypothesis", children=[2]),
            rec(2, "Conclusion", parents=[0, 1]),
        )
        bridge = bridge_subgraph(graph)
        value = fragility(bridge, {(0, 2): 0.5, (1, 2): 0.5})
        assert value == pytest.approx(0.5, abs=1e-12)

    def test_flow_equals_cut_on_random_graphs(self, rng):
        for _ in range(150):
            graph = random_graph(rng, max_nodes=10)
            metrics = random_metrics(rng, graph)
            scores = score_graph_nodes(graph, metrics, CFG)
            gated = {k: e.gated for k, e in scores.edges.items()}
            result = fragility_flow(bridge_subgraph(graph), gated)
            if result is not None:
                assert result.flow_value == pytest.approx(result.cut_value, abs=1e-9)

    def test_fragility_matches_brute_force_cut(self, rng):
        checked = 0
        while checked < 60:
            graph = random_graph(rng, max_nodes=7)
            bridge = bridge_subgraph(graph)
            if not bridge.edge_set or len(bridge.edge_set) > 9:
                continue
            checked += 1
            metrics = random_metrics(rng, graph)
            scores = score_graph_nodes(graph, metrics, CFG)
            gated = {k: e.gated for k, e in scores.edges.items()}
            capacities = {e: max(1e-6, 1.0 - gated[e]) for e in bridge.edge_set}
            expected = brute_min_cut(
                list(bridge.edge_set), capacities,
                set(bridge.hypothesis_ids), set(bridge.conclusion_ids),
            ) / len(bridge.edge_set)
            assert fragility(bridge, gated) == pytest.approx(expected, abs=1e-9)


class TestCoherenceAndCoverage:
    def test_all_high_prior_edges(self):
        graph = doc(
            rec(0, "Evidence", children=[1]),
            rec(1, "Result", parents=[0], children=[2]),
            rec(2, "Conclusion", parents=[1]),
        )
        # no bridge (no Hypothesis); check directly on a crafted bridge instead
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Result", parents=[1], children=[3]),
            rec(3, "Conclusion", parents=[2]),
        )
        bridge = bridge_subgraph(graph)
        assert coherence(bridge, graph, CFG) == 1.0  # priors 0.75, 1.00, 0.75

    def test_mixed_priors(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Result", parents=[0], children=[2]),  # prior 0.25: incoherent
            rec(2, "Conclusion", parents=[1]),            # prior 0.75: coherent
        )
        bridge = bridge_subgraph(graph)
        assert coherence(bridge, graph, CFG) == pytest.approx(0.5)

    def test_unspecified_pair_counts_as_coherent(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Limitation", parents=[0], children=[2]),  # both priors default 0.5
            rec(2, "Conclusion", parents=[1]),
        )
        bridge = bridge_subgraph(graph)
        assert coherence(bridge, graph, CFG) == 1.0

    def test_role_coverage_census(self):
        graph = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Result", parents=[1], children=[3]),
            rec(3, "Conclusion", parents=[2]),
        )
        assert role_coverage(bridge_subgraph(graph), graph) == pytest.approx(2 / 3)

    def test_role_coverage_full_and_empty(self):
        full = doc(
            rec(0, "Hypothesis", children=[1]),
            rec(1, "Evidence", parents=[0], children=[2]),
            rec(2, "Method", parents=[1], children=[3]),
            rec(3, "Result", parents=[2], children=[4]),
            rec(4, "Conclusion", parents=[3]),
        )
        assert role_coverage(bridge_subgraph(full), full) == 1.0
        empty = doc(rec(0, "Hypothesis"), rec(1, "Conclusion"))
        assert role_coverage(bridge_subgraph(empty), empty) == 0.0


class TestFinalScore:
    def test_normalization_anchors_are_exact(self):
        ones = ComponentScores(1, 1, 1, 0, 1, 1, best_path=(0, 1))
        result = final_score(ones, CFG)
        assert result.s_raw == pytest.approx(0.85)
        assert result.s_norm == 1.0
        fragile = ComponentScores(0, 0, 0, 1, 0, 0)
        assert final_score(fragile, CFG).s_norm == 0.0
        zeros = ComponentScores(0, 0, 0, 0, 0, 0)
        assert final_score(zeros, CFG).s_norm == 0.15

    def test_score_strictly_inside_unit_interval(self):
        for components in (
            ComponentScores(1, 1, 1, 0, 1, 1),
            ComponentScores(0, 0, 0, 1, 0, 0),
            ComponentScores(0, 0, 0, 0, 0, 0),
        ):
            score = final_score(components, CFG).score
            assert 0.0 < score < 1.0

    def test_degenerate_weights_raise(self):
        config = dataclasses.replace(
            CFG, component_weights=ComponentWeights(0, 0, 0, 0, 0, 0)
        )
        with pytest.raises(DegenerateWeightsError):
            final_score(ComponentScores(1, 1, 1, 1, 1, 1), config)

    def test_plain_clip_compatibility_mode(self):
        components = ComponentScores(1, 1, 1, 0, 1, 1)
        plain = final_score(components, CFG, plain_clip=True)
        assert plain.s_norm == pytest.approx(0.85)

    def test_monotone_in_components(self, rng):
        for _ in range(50):
            base_values = [float(x) for x in rng.random(6)]
            base = final_score(ComponentScores(*base_values), CFG).score
            for index in range(6):
                bumped = list(base_values)
                bumped[index] = min(1.0, bumped[index] + 0.2)
                moved = final_score(ComponentScores(*bumped), CFG).score
                if index == 3:  # fragility is penalized
                    assert moved <= base + 1e-12
                else:
                    assert moved >= base - 1e-12


class TestReportAssembly:
    def test_full_report_matches_oracle_on_random_graphs(self, rng):
        checked = 0
        while checked < 40:
            graph = random_graph(rng, max_nodes=8)
            bridge = bridge_subgraph(graph)
            if len(bridge.edge_set) > 9:
                continue
            checked += 1
            metrics = random_metrics(rng, graph)
            report = score_graph(graph, metrics, CFG).report.to_dict()
            oracle_nodes = graph_nodes_for_oracle(graph)
            oracle_metrics = {
                i: dict(zip(
                    ("credibility", "relevance", "evidence_strength", "method_rigor",
                     "reproducibility", "citation_support"), metrics[i].as_tuple()))
                for i in metrics
            }
            expected, _path = ref_components(
                oracle_nodes,
                {(r["parent"], r["child"]): r["gated"] for r in report["edges"]},
            )
            for name, value in expected.items():
                assert report["components"][name] == pytest.approx(value, abs=1e-9), name

    def test_all_ones_fixture_matches_oracle(self, cnn_graph):
        from argscore import MetricVector
        from reference_scorer import nodes_from_document, ref_report

        ones = {i: MetricVector(*(1.0,) * 6) for i in cnn_graph.node_ids}
        engine = score_graph(cnn_graph, ones, CFG).report.to_dict()
        # every role's weights sum to their support: all qualities reach ~1
        for row in engine["nodes"]:
            assert row["quality"] == pytest.approx(1.0, abs=1e-8)
        oracle = ref_report(
            nodes_from_document(cnn_graph.to_document()),
            {i: {name: 1.0 for name in
                 ("credibility", "relevance", "evidence_strength", "method_rigor",
                  "reproducibility", "citation_support")} for i in cnn_graph.node_ids},
        )
        for ours, theirs in zip(engine["nodes"], oracle["nodes"]):
            assert ours["quality"] == pytest.approx(theirs["quality"], abs=1e-9)
            assert ours["trust"] == pytest.approx(theirs["trust"], abs=1e-9)
        for ours, theirs in zip(engine["edges"], oracle["edges"]):
            assert ours["raw"] == pytest.approx(theirs["raw"], abs=1e-9)
            assert ours["gated"] == pytest.approx(theirs["gated"], abs=1e-9)
        assert engine["score"] == pytest.approx(oracle["score"], abs=1e-9)

    def test_serialization_is_stable(self, cnn_graph, cnn_metrics):
        a = score_graph(cnn_graph, cnn_metrics, CFG).report.to_json()
        b = score_graph(cnn_graph, dict(cnn_metrics), CFG).report.to_json()
        assert a == b
        parsed = json.loads(a)
        assert list(parsed) == [
            "schema_version", "mode_tag", "provisional", "config_fingerprint",
            "components", "best_path", "s_raw", "s_norm", "score", "nodes", "edges",
        ]

    def test_mode_tag_is_inert(self, cnn_graph, cnn_metrics):
        tagged = score_graph(cnn_graph, cnn_metrics, CFG, mode_tag="journal").report.to_dict()
        bare = score_graph(cnn_graph, cnn_metrics, CFG).report.to_dict()
        tagged.pop("mode_tag")
        bare.pop("mode_tag")
        assert json.dumps(tagged) == json.dumps(bare)

    def test_best_path_nonempty_iff_reliability_positive(self, rng):
        for _ in range(60):
            graph = random_graph(rng, max_nodes=10, ensure_conclusion=bool(rng.random() < 0.7))
            metrics = random_metrics(rng, graph, present_prob=0.9)
            components = compute_components(graph, score_graph_nodes(graph, metrics, CFG), CFG)
            assert bool(components.best_path) == (components.best_path_reliability > 0.0)
