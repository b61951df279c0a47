"""HTTP service and WebSocket session bridge for the scoring engine.

Endpoints:
  POST /graphs                   upload + validate a graph document
  POST /graphs/{id}/score        batch-score an uploaded graph
  GET  /graphs/{id}/report       last computed report
  GET  /graphs/{id}/export/{kind}  node_features | edge_features | walks | fingerprint
  GET  /healthz                  liveness + version
  WS   /session                  the session wire protocol, one JSON message
                                 per WebSocket frame (see argscore.session)

Errors use structured bodies {"code": ..., "message": ...}; uploading an
invalid graph answers 422 with the full validation report.
"""

from __future__ import annotations

import json
from typing import Optional

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from . import __version__
from .components import ScoredGraph, score_graph
from .config import ScoreConfig, config_from_dict, default_config
from .errors import EngineError, MalformedDocumentError, MalformedMetricsError
from .export import (
    edge_feature_matrix,
    node_feature_matrix,
    paper_fingerprint,
    random_walk_corpus,
    walks_to_text,
)
from .graph import KnowledgeGraph, MetricVector, validate_document
from .session import SessionProtocol

MODES = ("academic", "journal", "finance")


class _GraphStore:
    """In-memory store of uploaded graphs and their latest scoring."""

    def __init__(self) -> None:
        self._graphs: dict[str, KnowledgeGraph] = {}
        self._scored: dict[str, ScoredGraph] = {}
        self._counter = 0

    def put(self, graph: KnowledgeGraph) -> str:
        self._counter += 1
        graph_id = f"g{self._counter}"
        self._graphs[graph_id] = graph
        return graph_id

    def graph(self, graph_id: str) -> Optional[KnowledgeGraph]:
        return self._graphs.get(graph_id)

    def scored(self, graph_id: str) -> Optional[ScoredGraph]:
        return self._scored.get(graph_id)

    def set_scored(self, graph_id: str, scored: ScoredGraph) -> None:
        self._scored[graph_id] = scored


def _error(status: int, code: str, message: str, **extra) -> JSONResponse:
    body = {"code": code, "message": message}
    body.update(extra)
    return JSONResponse(status_code=status, content=body)


def _parse_metrics(raw) -> dict[int, MetricVector]:
    metrics: dict[int, MetricVector] = {}
    for key, value in (raw or {}).items():
        metrics[int(key)] = MetricVector.from_mapping(value)
    return metrics


def create_app() -> FastAPI:
    app = FastAPI(title="argscore", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # reviewer UI is served separately during audits
        allow_methods=["*"],
        allow_headers=["*"],
    )
    store = _GraphStore()

    @app.get("/healthz")
    async def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/graphs")
    async def upload_graph(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "malformed_json", "request body must be JSON")
        mode = request.query_params.get("mode")
        if mode is not None and mode not in MODES:
            return _error(400, "unknown_mode", f"mode must be one of {MODES}")
        graph, report = validate_document(body)
        if graph is None or not report.valid:
            return JSONResponse(status_code=422, content=report.to_dict())
        graph.mode_tag = mode
        graph_id = store.put(graph)
        return {"graph_id": graph_id, "report": report.to_dict()}

    @app.post("/graphs/{graph_id}/score")
    async def score(graph_id: str, request: Request):
        graph = store.graph(graph_id)
        if graph is None:
            return _error(404, "unknown_graph", f"no graph {graph_id!r}")
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = {}
        try:
            metrics = _parse_metrics(body.get("metrics"))
            config = (
                config_from_dict(body["config"]) if body.get("config") is not None
                else default_config()
            )
        except (MalformedMetricsError, ValueError, TypeError, KeyError) as exc:
            return _error(400, "malformed_request", str(exc))
        scored = score_graph(graph, metrics, config)
        store.set_scored(graph_id, scored)
        # Serve the report's canonical serialization so CLI and service emit
        # byte-identical documents for identical inputs.
        return PlainTextResponse(scored.report.to_json(), media_type="application/json")

    @app.get("/graphs/{graph_id}/report")
    async def report(graph_id: str):
        scored = store.scored(graph_id)
        if scored is None:
            if store.graph(graph_id) is None:
                return _error(404, "unknown_graph", f"no graph {graph_id!r}")
            return _error(404, "not_scored", f"graph {graph_id!r} has not been scored yet")
        return PlainTextResponse(scored.report.to_json(), media_type="application/json")

    @app.get("/graphs/{graph_id}/export/{kind}")
    async def export(graph_id: str, kind: str, n_walks: int = 64, walk_length: int = 8,
                     seed: int = 0):
        scored = store.scored(graph_id)
        if scored is None:
            return _error(404, "not_scored", f"graph {graph_id!r} has not been scored yet")
        if kind == "node_features":
            return PlainTextResponse(node_feature_matrix(scored).to_csv(), media_type="text/csv")
        if kind == "edge_features":
            return PlainTextResponse(edge_feature_matrix(scored).to_csv(), media_type="text/csv")
        if kind == "walks":
            walks = random_walk_corpus(scored, n_walks, walk_length, seed)
            return PlainTextResponse(walks_to_text(walks), media_type="text/plain")
        if kind == "fingerprint":
            return JSONResponse(content=paper_fingerprint(scored).to_dict())
        return _error(404, "unknown_export", f"no export kind {kind!r}")

    @app.websocket("/session")
    async def session_endpoint(websocket: WebSocket):
        await websocket.accept()
        protocol = SessionProtocol()
        try:
            while True:
                raw = await websocket.receive_text()
                try:
                    message = json.loads(raw)
                except json.JSONDecodeError as exc:
                    # Malformed framing closes the stream after an error frame.
                    await websocket.send_text(json.dumps(
                        {"type": "error", "code": "malformed_frame", "message": str(exc)}
                    ))
                    await websocket.close()
                    return
                reply = protocol.handle(message)
                await websocket.send_text(json.dumps(reply))
        except WebSocketDisconnect:
            return

    @app.exception_handler(MalformedDocumentError)
    async def malformed_document(_request, exc: MalformedDocumentError):
        return _error(400, "malformed_document", str(exc))

    @app.exception_handler(EngineError)
    async def engine_error(_request, exc: EngineError):
        return _error(400, "engine_error", str(exc))

    return app


def serve(
    host: str = "127.0.0.1",
    port: int = 8000,
    *,
    stream_port: Optional[int] = None,
) -> None:
    """Run the HTTP service (and optionally the raw TCP session stream)."""
    import asyncio

    import uvicorn

    app = create_app()

    if stream_port is None:
        uvicorn.run(app, host=host, port=port, log_level="warning")
        return

    async def _run() -> None:
        from .session import serve_stream

        tcp_server = await serve_stream(host, stream_port)
        config = uvicorn.Config(app, host=host, port=port, log_level="warning")
        server = uvicorn.Server(config)
        try:
            await server.serve()
        finally:
            tcp_server.close()
            await tcp_server.wait_closed()

    asyncio.run(_run())
