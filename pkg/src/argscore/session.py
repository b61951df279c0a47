"""Streaming scoring sessions and their wire protocol.

A session fixes a verification order (BFS from Hypothesis roots) at init and
accepts per-node metric updates. Every update triggers a full deterministic
recomputation (graphs are small), so the final report is independent of
update order and always equals batch scoring of the same metric assignment.

Wire protocol: JSON messages exchanged over a bidirectional stream, one
message per frame. Over raw TCP each frame is length-delimited (4-byte
big-endian length prefix + UTF-8 JSON body); over WebSocket the transport's
own message framing carries the same JSON documents. Message order per
session is strict FIFO.

  client -> server: {"type": "init", "graph": ..., "config"?: ...}
                    {"type": "update", "node_id": ..., "metrics": ...}
                    {"type": "snapshot"}
                    {"type": "set_config", "config": ...}
  server -> client: {"type": "delta", ...ScoreDelta}
                    {"type": "report", "report": ...ScoreReport}
                    {"type": "error", "code": ..., "message": ...}
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Mapping, Optional

from .components import ScoreReport, score_graph
from .config import ScoreConfig, config_from_dict, default_config
from .errors import (
    EngineError,
    InvalidGraphError,
    MalformedMetricsError,
    UnknownNodeError,
)
from .graph import (
    KnowledgeGraph,
    MetricVector,
    bfs_order_from_hypotheses,
    parse_graph,
    validate,
)


@dataclass(frozen=True)
class ScoreDelta:
    """What one metric update changed: the node, every edge whose raw or
    gated confidence moved, and the refreshed report."""

    updated_node: dict
    updated_edges: tuple[dict, ...]
    report: ScoreReport
    done: bool
    out_of_order: bool

    def to_dict(self) -> dict[str, object]:
        return {
            "updated_node": dict(self.updated_node),
            "updated_edges": [dict(row) for row in self.updated_edges],
            "report": self.report.to_dict(),
            "done": self.done,
            "out_of_order": self.out_of_order,
        }


class Session:
    """One streaming scoring session over one fixed, validated graph.

    Updates must be applied one at a time (callers must not interleave);
    distinct sessions are fully independent.
    """

    def __init__(self, graph: KnowledgeGraph, config: Optional[ScoreConfig] = None):
        report = validate(graph)
        if not report.valid:
            raise InvalidGraphError(report)
        self.graph = graph
        self.config = config if config is not None else default_config()
        order = bfs_order_from_hypotheses(graph)
        self.order: list[int] = order.order
        self.no_hypothesis: bool = order.no_hypothesis
        self.cursor: int = 0
        self.metrics_received: dict[int, MetricVector] = {}
        self._scored = score_graph(graph, self.metrics_received, self.config)

    @property
    def last_report(self) -> ScoreReport:
        return self._scored.report

    @property
    def done(self) -> bool:
        return len(self.metrics_received) == len(self.graph.nodes)

    def expected_node(self) -> Optional[int]:
        """The next node awaiting metrics in session order, or None when done."""
        if self.cursor >= len(self.order):
            return None
        return self.order[self.cursor]

    def _advance_cursor(self) -> None:
        while self.cursor < len(self.order) and self.order[self.cursor] in self.metrics_received:
            self.cursor += 1

    def apply_metrics(self, node_id: int, metrics: MetricVector | Mapping[str, object]) -> ScoreDelta:
        """Store metrics for a node and recompute all downstream state.

        Out-of-order updates (including re-updates, which overwrite) are
        accepted and flagged on the returned delta.
        """
        if node_id not in self.graph.nodes:
            raise UnknownNodeError(f"graph has no node {node_id}")
        if not isinstance(metrics, MetricVector):
            metrics = MetricVector.from_mapping(metrics)

        out_of_order = node_id != self.expected_node()
        previous = self._scored
        self.metrics_received[node_id] = metrics
        self._advance_cursor()
        self._scored = score_graph(self.graph, self.metrics_received, self.config)

        changed_edges = tuple(
            edge.to_dict()
            for key, edge in sorted(self._scored.scores.edges.items())
            if (edge.raw, edge.gated)
            != (previous.scores.edges[key].raw, previous.scores.edges[key].gated)
        )
        return ScoreDelta(
            updated_node={
                "id": node_id,
                "quality": self._scored.scores.qualities[node_id],
                "trust": self._scored.scores.trusts[node_id],
            },
            updated_edges=changed_edges,
            report=self._scored.report,
            done=self.done,
            out_of_order=out_of_order,
        )

    def set_config(self, config: ScoreConfig) -> ScoreReport:
        """Swap the parameter surface and recompute; used for what-if edits."""
        self.config = config
        self._scored = score_graph(self.graph, self.metrics_received, self.config)
        return self._scored.report

    def snapshot(self) -> ScoreReport:
        """Current report without mutating the session."""
        return self._scored.report


def init_session(graph: KnowledgeGraph, config: Optional[ScoreConfig] = None) -> Session:
    return Session(graph, config)


# --------------------------------------------------------------------------
# Wire protocol
# --------------------------------------------------------------------------

_LENGTH = struct.Struct(">I")

#: Refuse frames above this size (16 MiB); a corrupt length prefix otherwise
#: stalls the stream waiting for data that never comes.
MAX_FRAME_BYTES = 16 * 1024 * 1024


def encode_frame(message: Mapping[str, object]) -> bytes:
    """Length-delimited frame: 4-byte big-endian length + UTF-8 JSON body."""
    body = json.dumps(message, separators=(",", ":")).encode("utf-8")
    return _LENGTH.pack(len(body)) + body


class FrameDecoder:
    """Incremental decoder for length-delimited frames."""

    def __init__(self) -> None:
        self._buffer = bytearray()

    def feed(self, data: bytes) -> list[dict]:
        self._buffer.extend(data)
        frames: list[dict] = []
        while True:
            if len(self._buffer) < _LENGTH.size:
                return frames
            (length,) = _LENGTH.unpack_from(self._buffer)
            if length > MAX_FRAME_BYTES:
                raise ValueError(f"frame of {length} bytes exceeds the {MAX_FRAME_BYTES} limit")
            if len(self._buffer) < _LENGTH.size + length:
                return frames
            body = bytes(self._buffer[_LENGTH.size : _LENGTH.size + length])
            del self._buffer[: _LENGTH.size + length]
            frames.append(json.loads(body.decode("utf-8")))


class SessionProtocol:
    """Transport-agnostic server side of the session wire protocol.

    Feed it one decoded client message at a time; it returns the reply
    message. Protocol errors produce error frames rather than exceptions so
    a single bad message does not kill the stream; only transport-level
    corruption should close the connection.
    """

    def __init__(self) -> None:
        self.session: Optional[Session] = None

    def handle(self, message: object) -> dict:
        if not isinstance(message, Mapping) or "type" not in message:
            return _error("malformed_frame", "message must be an object with a 'type' field")
        kind = message["type"]
        try:
            if kind == "init":
                return self._handle_init(message)
            if kind == "update":
                return self._handle_update(message)
            if kind == "snapshot":
                return self._require_session() or {
                    "type": "report",
                    "report": self.session.snapshot().to_dict(),
                }
            if kind == "set_config":
                return self._handle_set_config(message)
            return _error("unknown_type", f"unknown message type {kind!r}")
        except InvalidGraphError as exc:
            return _error("invalid_graph", str(exc), report=exc.report.to_dict())
        except UnknownNodeError as exc:
            return _error("unknown_node", str(exc))
        except MalformedMetricsError as exc:
            return _error("malformed_metrics", str(exc))
        except (ValueError, KeyError, TypeError) as exc:
            return _error("malformed_frame", str(exc))
        except EngineError as exc:
            return _error("engine_error", str(exc))

    def _require_session(self) -> Optional[dict]:
        if self.session is None:
            return _error("no_session", "send an 'init' message first")
        return None

    def _handle_init(self, message: Mapping[str, object]) -> dict:
        if "graph" not in message:
            return _error("malformed_frame", "'init' requires a 'graph' document")
        graph = parse_graph(message["graph"])
        config = (
            config_from_dict(message["config"]) if message.get("config") is not None else None
        )
        self.session = Session(graph, config)
        return {"type": "report", "report": self.session.snapshot().to_dict()}

    def _handle_update(self, message: Mapping[str, object]) -> dict:
        failure = self._require_session()
        if failure is not None:
            return failure
        if "node_id" not in message or "metrics" not in message:
            return _error("malformed_frame", "'update' requires 'node_id' and 'metrics'")
        node_id = message["node_id"]
        if isinstance(node_id, bool) or not isinstance(node_id, int):
            return _error("malformed_frame", "'node_id' must be an integer")
        delta = self.session.apply_metrics(node_id, message["metrics"])
        return {"type": "delta", **delta.to_dict()}

    def _handle_set_config(self, message: Mapping[str, object]) -> dict:
        failure = self._require_session()
        if failure is not None:
            return failure
        if "config" not in message:
            return _error("malformed_frame", "'set_config' requires a 'config' document")
        report = self.session.set_config(config_from_dict(message["config"]))
        return {"type": "report", "report": report.to_dict()}


def _error(code: str, message: str, **extra: object) -> dict:
    frame: dict[str, object] = {"type": "error", "code": code, "message": message}
    frame.update(extra)
    return frame


async def serve_stream(host: str, port: int):
    """Serve the wire protocol over raw TCP with length-delimited frames.

    Returns the asyncio server; each connection gets its own protocol state.
    Malformed framing closes the stream after an error frame, per contract.
    """
    import asyncio

    async def handle_connection(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        protocol = SessionProtocol()
        decoder = FrameDecoder()
        try:
            while True:
                data = await reader.read(65536)
                if not data:
                    break
                try:
                    frames = decoder.feed(data)
                except (ValueError, UnicodeDecodeError) as exc:
                    writer.write(encode_frame(_error("malformed_frame", str(exc))))
                    await writer.drain()
                    break
                for frame in frames:
                    writer.write(encode_frame(protocol.handle(frame)))
                await writer.drain()
        finally:
            writer.close()
            try:
                await writer.wait_closed()
            except (ConnectionError, OSError):
                pass

    return await asyncio.start_server(handle_connection, host, port)
