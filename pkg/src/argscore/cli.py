"""Command-line entry points.

Exit codes: 0 success, 2 domain failure (invalid graph, degenerate corpus),
64 usage or I/O failure, 1 unexpected error. The default configuration path
can be supplied via the ARGSCORE_CONFIG environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
import uuid
from typing import Optional

from . import __version__
from .calibration import (
    StageSpec,
    TrialCache,
    generate_synthetic_corpus,
    load_corpus,
    run_stages,
    save_corpus,
    write_trace,
)
from .components import score_graph
from .config import ScoreConfig, default_config, load_config
from .errors import BudgetZeroError, EngineError, MalformedDocumentError
from .export import export_bundle
from .graph import MetricVector, validate_document
from .service import MODES, serve

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_USAGE_IO = 64
EXIT_INTERNAL = 1

CONFIG_ENV_VAR = "ARGSCORE_CONFIG"


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_cli_config(path: Optional[str]) -> ScoreConfig:
    effective = path or os.environ.get(CONFIG_ENV_VAR)
    if effective is None:
        return default_config()
    return load_config(_read_text(effective))


def _load_metrics_file(path: str) -> dict[int, MetricVector]:
    data = json.loads(_read_text(path))
    if not isinstance(data, dict):
        raise ValueError("metrics document must map node ids to metric objects")
    return {int(node_id): MetricVector.from_mapping(value) for node_id, value in data.items()}


def _write_output(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    print(text)


def _write_manifest(out_dir: str, *, inputs: dict, config: ScoreConfig, seeds: dict,
                    timings: dict) -> None:
    manifest = {
        "run_id": str(uuid.uuid4()),
        "tool_version": __version__,
        "inputs": inputs,
        "config_fingerprint": config.fingerprint(),
        "seeds": seeds,
        "timings_seconds": timings,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as handle:
        json.dump(manifest, handle, indent=2)


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        document = _read_text(args.path)
    except OSError as exc:
        print(f"cannot read {args.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    _graph, report = validate_document(document, strict_appendix_a=args.strict_appendix_a)
    _write_output(json.dumps(report.to_dict(), indent=2), args.out)
    return EXIT_OK if report.valid else EXIT_DOMAIN


def cmd_score(args: argparse.Namespace) -> int:
    try:
        document = _read_text(args.graph)
        metrics = _load_metrics_file(args.metrics) if args.metrics else {}
        config = _load_cli_config(args.config)
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    except (ValueError, EngineError) as exc:
        print(f"bad input document: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    graph, report = validate_document(document, strict_appendix_a=args.strict_appendix_a)
    if graph is None or not report.valid:
        _write_output(json.dumps(report.to_dict(), indent=2), args.out)
        return EXIT_DOMAIN

    started = time.perf_counter()
    scored = score_graph(graph, metrics, config, mode_tag=args.mode)
    elapsed = time.perf_counter() - started
    _write_output(scored.report.to_json(), args.out)

    if args.export_dir:
        os.makedirs(args.export_dir, exist_ok=True)
        export_bundle(scored, args.export_dir, seed=args.seed)
        _write_manifest(
            args.export_dir,
            inputs={"graph": args.graph, "metrics": args.metrics, "config": args.config},
            config=config,
            seeds={"walks": args.seed},
            timings={"score": elapsed},
        )
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    try:
        document = _read_text(args.graph)
        metrics = _load_metrics_file(args.metrics) if args.metrics else {}
        config = _load_cli_config(args.config)
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO

    graph, report = validate_document(document)
    if graph is None or not report.valid:
        print(json.dumps(report.to_dict(), indent=2), file=sys.stderr)
        return EXIT_DOMAIN
    scored = score_graph(graph, metrics, config)
    paths = export_bundle(
        scored, args.out, n_walks=args.n_walks, walk_length=args.walk_length, seed=args.seed
    )
    print(json.dumps(paths, indent=2))
    return EXIT_OK


def cmd_calibrate(args: argparse.Namespace) -> int:
    try:
        corpus = load_corpus(args.corpus)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read corpus: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO
    except (ValueError, EngineError) as exc:
        print(f"bad corpus: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    try:
        base = _load_cli_config(args.config)
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO

    specs = [
        StageSpec(stage="dense", budget=args.budget_dense, seed=args.seed),
        StageSpec(stage="refine", budget=args.budget_refine, seed=args.seed + 1,
                  locality_radius=args.radius),
        StageSpec(stage="sparse", budget=args.budget_sparse, seed=args.seed + 2,
                  locality_radius=args.radius / 2.0),
    ]
    cache = TrialCache()
    os.makedirs(args.out, exist_ok=True)
    started = time.perf_counter()
    try:
        results = run_stages(corpus, cache, specs, objective=args.objective,
                             initial_incumbent=base)
    except (BudgetZeroError, EngineError) as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    elapsed = time.perf_counter() - started

    trace = [entry for result in results for entry in result.trace]
    write_trace(trace, os.path.join(args.out, "trace.jsonl"))
    best = results[-1]
    with open(os.path.join(args.out, "best_config.json"), "w", encoding="utf-8") as handle:
        handle.write(best.best_config.to_json())
    summary = {
        "stages": [
            {
                "stage": spec.stage,
                "budget": spec.budget,
                "objective": result.objective_value,
                "auroc": result.evaluation.auroc,
                "spearman": result.evaluation.spearman,
            }
            for spec, result in zip(specs, results)
        ],
        "best_objective": best.objective_value,
        "cache_entries": len(cache),
    }
    _write_manifest(
        args.out,
        inputs={"corpus": args.corpus, "config": args.config},
        config=best.best_config,
        seeds={"stages": args.seed},
        timings={"calibrate": elapsed},
    )
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def cmd_synth_corpus(args: argparse.Namespace) -> int:
    corpus = generate_synthetic_corpus(
        args.seed, args.n_papers, args.separation, k_dag_samples=args.k_dag_samples
    )
    save_corpus(corpus, args.out)
    print(json.dumps({"out": args.out, "n_papers": args.n_papers, "seed": args.seed}))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    serve(args.host, args.port, stream_port=args.stream_port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="argscore",
        description="Trust-propagating scoring for role-labeled argument DAGs",
    )
    parser.add_argument("--version", action="version", version=f"argscore {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a graph document")
    p.add_argument("path")
    p.add_argument("--strict-appendix-a", action="store_true",
                   help="also enforce the single-root document convention")
    p.add_argument("--out", help="write the report here as well as stdout")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("score", help="batch-score a graph with a metrics sidecar")
    p.add_argument("graph")
    p.add_argument("--metrics", help="sidecar JSON mapping node id -> six metrics")
    p.add_argument("--config", help=f"config JSON (default: ${CONFIG_ENV_VAR} or built-ins)")
    p.add_argument("--mode", choices=MODES, help="inert analysis-mode tag recorded on the report")
    p.add_argument("--out", help="write the report here as well as stdout")
    p.add_argument("--export-dir", help="also write export artifacts + run manifest here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--strict-appendix-a", action="store_true")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("export", help="write feature matrices, walks, fingerprint")
    p.add_argument("graph")
    p.add_argument("--metrics")
    p.add_argument("--config")
    p.add_argument("--out", required=True)
    p.add_argument("--n-walks", type=int, default=64)
    p.add_argument("--walk-length", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("calibrate", help="staged parameter search against a labeled corpus")
    p.add_argument("corpus", help="corpus directory (manifest.json + papers/)")
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--objective", choices=("auroc", "spearman"), default="auroc")
    p.add_argument("--budget-dense", type=int, default=24)
    p.add_argument("--budget-refine", type=int, default=16)
    p.add_argument("--budget-sparse", type=int, default=12)
    p.add_argument("--radius", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("synth-corpus", help="generate a synthetic labeled corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-papers", type=int, default=60)
    p.add_argument("--separation", type=float, default=0.6)
    p.add_argument("--k-dag-samples", type=int, default=3)
    p.set_defaults(func=cmd_synth_corpus)

    p = sub.add_parser("serve", help="run the HTTP service and session stream")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--stream-port", type=int,
                   help="also serve length-delimited frames over raw TCP on this port")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MalformedDocumentError as exc:
        print(f"malformed document: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE_IO


if __name__ == "__main__":
    sys.exit(main())
