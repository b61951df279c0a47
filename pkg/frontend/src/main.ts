/** Browser bootstrap: upload a graph over HTTP, open the session stream,
 * and wire the control panel. All rendering logic lives in render.ts; all
 * session logic in app.ts, so this file is glue only.
 */

import { AuditorApp } from "./app.js";
import { connectWebSocket } from "./protocol.js";
import { METRIC_NAMES, type MetricMap } from "./types.js";

const DEFAULT_BASE = "http://127.0.0.1:8000";
const BASELINE_CONFIG = { schema_version: "1" };

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

async function boot(): Promise<void> {
  const container = el<HTMLDivElement>("graph-container");
  const graphInput = el<HTMLTextAreaElement>("graph-input");
  const baseInput = el<HTMLInputElement>("base-url");
  baseInput.value = DEFAULT_BASE;

  let app: AuditorApp | null = null;

  el<HTMLButtonElement>("connect").onclick = async () => {
    const base = baseInput.value.replace(/\/$/, "");
    const graph = JSON.parse(graphInput.value);

    // Upload first so validation failures surface with their full report.
    const upload = await fetch(`${base}/graphs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(graph),
    });
    if (!upload.ok) {
      container.textContent = `validation failed: ${await upload.text()}`;
      return;
    }

    const wsUrl = base.replace(/^http/, "ws") + "/session";
    const client = connectWebSocket(wsUrl);
    app = new AuditorApp(client, container, BASELINE_CONFIG);
    await app.start(graph);
    wireControls(app);
  };
}

function wireControls(app: AuditorApp): void {
  const threshold = el<HTMLInputElement>("quality-threshold");
  threshold.oninput = () => {
    app.filter({ qualityThreshold: Number(threshold.value) });
  };

  const roleBoxes = Array.from(
    document.querySelectorAll<HTMLInputElement>("input[data-role-filter]"),
  );
  const applyRoles = () => {
    const chosen = roleBoxes.filter((box) => box.checked).map((box) => box.dataset.roleFilter!);
    app.filter({ roles: chosen.length === roleBoxes.length ? null : new Set(chosen) });
  };
  roleBoxes.forEach((box) => (box.onchange = applyRoles));

  const eta = el<HTMLInputElement>("eta-slider");
  eta.onchange = () => {
    void app.whatIfConfig({
      schema_version: "1",
      propagation: { eta: Number(eta.value) },
    });
  };

  const nodeId = el<HTMLInputElement>("edit-node");
  const credibility = el<HTMLInputElement>("edit-credibility");
  el<HTMLButtonElement>("apply-edit").onclick = () => {
    const id = Number(nodeId.value);
    const committed = app.state.committedReport?.nodes.find((node) => node.id === id);
    if (!committed?.metrics) return;
    const metrics: MetricMap = { ...committed.metrics };
    metrics.credibility = Number(credibility.value);
    void app.whatIfMetrics(id, metrics);
  };

  el<HTMLButtonElement>("revert").onclick = () => {
    void app.revert();
  };

  // keep the metric name list visible for reference
  el<HTMLSpanElement>("metric-names").textContent = METRIC_NAMES.join(", ");
}

void boot();
