"""Streaming sessions: cursor discipline, stream/batch equivalence, wire codec."""

from __future__ import annotations

import asyncio
import json

import numpy as np
import pytest

from argscore import (
    InvalidGraphError,
    MalformedMetricsError,
    MetricVector,
    Session,
    SessionProtocol,
    UnknownNodeError,
    default_config,
    init_session,
    parse_graph,
    score_graph,
)
from argscore.config import with_propagation
from argscore.session import FrameDecoder, encode_frame, serve_stream
from conftest import random_graph, random_metrics

CFG = default_config()


class TestSessionLifecycle:
    def test_init_on_cnn_fixture(self, cnn_graph):
        session = init_session(cnn_graph, CFG)
        assert session.order == [0, 1, 2, 3]
        assert session.cursor == 0
        assert session.snapshot().provisional

    def test_single_node_graph(self):
        graph = parse_graph({"nodes": [
            {"id": 0, "text": "only", "role": "Hypothesis", "parents": None, "children": None}
        ]})
        session = Session(graph, CFG)
        assert session.order == [0]
        assert session.snapshot().nodes[0]["quality"] == 0.5

    def test_invalid_graph_is_rejected(self):
        graph = parse_graph({"nodes": [
            {"id": 0, "text": "x", "role": "Recommendation", "parents": None, "children": None}
        ]})
        with pytest.raises(InvalidGraphError):
            Session(graph, CFG)

    def test_unknown_node_update(self, cnn_graph):
        session = Session(cnn_graph, CFG)
        with pytest.raises(UnknownNodeError):
            session.apply_metrics(99, MetricVector(*(0.5,) * 6))

    def test_out_of_range_metrics_rejected(self, cnn_graph):
        session = Session(cnn_graph, CFG)
        with pytest.raises(MalformedMetricsError):
            session.apply_metrics(0, {"credibility": 1.3, "relevance": 0.5,
                                      "evidence_strength": 0.5, "method_rigor": 0.5,
                                      "reproducibility": 0.5, "citation_support": 0.5})


class TestUpdateFlow:
    def test_first_update_rescoring_outgoing_edges(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        delta = session.apply_metrics(0, cnn_metrics[0])
        assert not delta.out_of_order
        assert delta.updated_node["id"] == 0
        assert delta.updated_node["quality"] == pytest.approx(0.85, abs=1e-8)
        # edges incident to node 0 stay at the fallback raw (child metrics still
        # missing) but their gates move with the parent's trust
        touched = {(row["parent"], row["child"]) for row in delta.updated_edges}
        assert (0, 1) in touched and (0, 2) in touched
        assert session.cursor == 1
        assert not delta.done

    def test_cursor_skips_already_filled_nodes(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        out_of_order = session.apply_metrics(2, cnn_metrics[2])
        assert out_of_order.out_of_order
        assert session.cursor == 0
        session.apply_metrics(0, cnn_metrics[0])
        assert session.cursor == 1
        session.apply_metrics(1, cnn_metrics[1])
        assert session.cursor == 3  # node 2 already has metrics
        final = session.apply_metrics(3, cnn_metrics[3])
        assert final.done
        assert session.expected_node() is None

    def test_reupdating_overwrites(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        session.apply_metrics(0, cnn_metrics[0])
        changed = session.apply_metrics(0, MetricVector(*(0.1,) * 6))
        assert changed.out_of_order  # node 0 is no longer the expected node
        assert session.snapshot().nodes[0]["quality"] == pytest.approx(0.1, abs=1e-8)

    def test_final_report_equals_batch(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        for node_id in session.order:
            delta = session.apply_metrics(node_id, cnn_metrics[node_id])
        batch = score_graph(cnn_graph, cnn_metrics, CFG).report
        assert delta.report.to_json() == batch.to_json()

    def test_snapshot_equals_batch_on_partial_prefix(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        partial = {}
        for node_id in [0, 1]:
            partial[node_id] = cnn_metrics[node_id]
            session.apply_metrics(node_id, cnn_metrics[node_id])
        batch = score_graph(cnn_graph, partial, CFG).report
        assert session.snapshot().to_json() == batch.to_json()

    def test_snapshot_is_idempotent(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        for node_id in session.order:
            session.apply_metrics(node_id, cnn_metrics[node_id])
        assert session.snapshot().to_json() == session.snapshot().to_json()

    def test_order_independence(self, rng):
        for _ in range(15):
            graph = random_graph(rng, max_nodes=9)
            metrics = random_metrics(rng, graph)
            reports = set()
            for _ in range(3):
                session = Session(graph, CFG)
                ids = list(graph.node_ids)
                rng.shuffle(ids)
                for node_id in ids:
                    delta = session.apply_metrics(node_id, metrics[node_id])
                assert delta.done
                reports.add(delta.report.to_json())
            assert len(reports) == 1

    def test_updates_never_change_order(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        fixed = list(session.order)
        for node_id in [2, 0, 3, 1]:
            session.apply_metrics(node_id, cnn_metrics[node_id])
            assert session.order == fixed

    def test_set_config_recomputes(self, cnn_graph, cnn_metrics):
        session = Session(cnn_graph, CFG)
        for node_id in session.order:
            session.apply_metrics(node_id, cnn_metrics[node_id])
        report = session.set_config(with_propagation(CFG, eta=1.0))
        for row in report.edges:
            assert row["gated"] == pytest.approx(row["raw"], abs=1e-12)


class TestFrameCodec:
    def test_round_trip(self):
        message = {"type": "snapshot", "nested": {"xs": [1, 2, 3]}}
        decoder = FrameDecoder()
        assert decoder.feed(encode_frame(message)) == [message]

    def test_fragmented_and_coalesced_frames(self):
        messages = [{"type": "a", "n": i} for i in range(5)]
        stream = b"".join(encode_frame(m) for m in messages)
        decoder = FrameDecoder()
        seen = []
        for i in range(0, len(stream), 3):
            seen.extend(decoder.feed(stream[i:i + 3]))
        assert seen == messages

    def test_oversized_frame_rejected(self):
        decoder = FrameDecoder()
        with pytest.raises(ValueError):
            decoder.feed(b"\xff\xff\xff\xff")


class TestSessionProtocol:
    def test_full_exchange(self, cnn_document, cnn_metrics):
        protocol = SessionProtocol()
        reply = protocol.handle({"type": "init", "graph": cnn_document})
        assert reply["type"] == "report"
        assert reply["report"]["provisional"]

        for node_id in [0, 1, 2, 3]:
            reply = protocol.handle({
                "type": "update",
                "node_id": node_id,
                "metrics": cnn_metrics[node_id].to_dict(),
            })
            assert reply["type"] == "delta"
        assert reply["done"]

        snapshot = protocol.handle({"type": "snapshot"})
        assert snapshot["type"] == "report"
        assert snapshot["report"] == reply["report"]

    def test_error_frames(self, cnn_document):
        protocol = SessionProtocol()
        assert protocol.handle({"type": "update", "node_id": 0, "metrics": {}})["code"] == "no_session"
        assert protocol.handle("nonsense")["code"] == "malformed_frame"
        assert protocol.handle({"type": "dance"})["code"] == "unknown_type"
        protocol.handle({"type": "init", "graph": cnn_document})
        assert protocol.handle({"type": "update", "node_id": 42,
                                "metrics": {}})["code"] == "unknown_node"
        assert protocol.handle({"type": "update", "node_id": 0,
                                "metrics": {"credibility": 2.0}})["code"] == "malformed_metrics"
        bad_graph = {"nodes": [{"id": 0, "text": "x", "role": "Nope",
                                "parents": None, "children": None}]}
        assert protocol.handle({"type": "init", "graph": bad_graph})["code"] == "invalid_graph"

    def test_set_config_frame(self, cnn_document, cnn_metrics, config):
        protocol = SessionProtocol()
        protocol.handle({"type": "init", "graph": cnn_document})
        for node_id in [0, 1, 2, 3]:
            protocol.handle({"type": "update", "node_id": node_id,
                             "metrics": cnn_metrics[node_id].to_dict()})
        config_doc = with_propagation(config, eta=1.0).to_dict()
        reply = protocol.handle({"type": "set_config", "config": config_doc})
        assert reply["type"] == "report"
        for row in reply["report"]["edges"]:
            assert row["gated"] == pytest.approx(row["raw"], abs=1e-12)


class TestTcpStream:
    def test_stream_replay_matches_batch(self, cnn_document, cnn_metrics, cnn_graph):
        async def scenario():
            server = await serve_stream("127.0.0.1", 0)
            port = server.sockets[0].getsockname()[1]
            reader, writer = await asyncio.open_connection("127.0.0.1", port)
            decoder = FrameDecoder()

            async def call(message):
                writer.write(encode_frame(message))
                await writer.drain()
                while True:
                    data = await reader.read(65536)
                    frames = decoder.feed(data)
                    if frames:
                        return frames[0]

            reply = await call({"type": "init", "graph": cnn_document})
            assert reply["type"] == "report"
            for node_id in [0, 1, 2, 3]:
                reply = await call({"type": "update", "node_id": node_id,
                                    "metrics": cnn_metrics[node_id].to_dict()})
                assert reply["type"] == "delta"
            final = reply["report"]
            writer.close()
            await writer.wait_closed()
            server.close()
            await server.wait_closed()
            return final

        final = asyncio.run(scenario())
        batch = score_graph(cnn_graph, cnn_metrics, CFG).report.to_dict()
        assert json.dumps(final, sort_keys=True) == json.dumps(batch, sort_keys=True)
