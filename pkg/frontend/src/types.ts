/** Wire and report types mirroring the engine's JSON documents. */

export interface MetricMap {
  credibility: number;
  relevance: number;
  evidence_strength: number;
  method_rigor: number;
  reproducibility: number;
  citation_support: number;
}

export const METRIC_NAMES: ReadonlyArray<keyof MetricMap> = [
  "credibility",
  "relevance",
  "evidence_strength",
  "method_rigor",
  "reproducibility",
  "citation_support",
];

export interface NodeRow {
  id: number;
  role: string;
  quality: number;
  trust: number;
  has_metrics: boolean;
  metrics: MetricMap | null;
}

export interface EdgeRow {
  parent: number;
  child: number;
  prior: number;
  parent_quality: number;
  child_quality: number;
  alignment: number;
  synergy: number;
  raw: number;
  gated: number;
}

export interface ComponentMap {
  bridge_coverage: number;
  best_path_reliability: number;
  redundancy: number;
  fragility: number;
  coherence: number;
  coverage: number;
}

export interface ScoreReport {
  schema_version: string;
  mode_tag: string | null;
  provisional: boolean;
  config_fingerprint: string;
  components: ComponentMap;
  best_path: number[];
  s_raw: number;
  s_norm: number;
  score: number;
  nodes: NodeRow[];
  edges: EdgeRow[];
}

export interface DeltaFrame {
  type: "delta";
  updated_node: { id: number; quality: number; trust: number };
  updated_edges: EdgeRow[];
  report: ScoreReport;
  done: boolean;
  out_of_order: boolean;
}

export interface ReportFrame {
  type: "report";
  report: ScoreReport;
}

export interface ErrorFrame {
  type: "error";
  code: string;
  message: string;
}

export type ServerFrame = DeltaFrame | ReportFrame | ErrorFrame;

export type ClientFrame =
  | { type: "init"; graph: unknown; config?: unknown }
  | { type: "update"; node_id: number; metrics: MetricMap }
  | { type: "snapshot" }
  | { type: "set_config"; config: unknown };

/** The one permitted transformation of engine numbers: fixed-width display. */
export function formatValue(value: number): string {
  return value.toFixed(4);
}
