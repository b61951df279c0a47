/** SVG rendering of the score report into a container element.
 *
 * Every displayed number is copied from an engine frame and formatted with
 * formatValue; nothing is derived. Nodes hidden by filters are simply not
 * rendered. The best path reported by the engine is emphasized with the
 * "best-path" class on exactly its nodes and edges; an empty path shows the
 * "no bridge" banner instead.
 */

import { layeredLayout } from "./layout.js";
import { hiddenCount, nodeVisible, type ViewState } from "./state.js";
import { METRIC_NAMES, formatValue, type EdgeRow, type NodeRow } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const WIDTH = 900;

export function render(container: HTMLElement, state: ViewState): void {
  container.textContent = "";
  container.appendChild(statusBar(state));

  if (state.lastError) {
    const panel = document.createElement("div");
    panel.className = "error-panel";
    panel.textContent = `engine error [${state.lastError.code}]: ${state.lastError.message}`;
    container.appendChild(panel);
  }

  const report = state.report;
  if (!report) {
    const empty = document.createElement("div");
    empty.className = "placeholder";
    empty.textContent = "no report loaded";
    container.appendChild(empty);
    return;
  }

  if (report.best_path.length === 0) {
    const banner = document.createElement("div");
    banner.className = "no-bridge-banner";
    banner.textContent = "no bridge: no hypothesis-to-conclusion path exists";
    container.appendChild(banner);
  }

  const hidden = hiddenCount(state);
  if (hidden > 0) {
    const counter = document.createElement("div");
    counter.className = "hidden-count";
    counter.textContent = `hidden: ${hidden}`;
    container.appendChild(counter);
  }

  container.appendChild(graphSvg(state));
  if (state.selectedNode !== null) {
    const row = report.nodes.find((node) => node.id === state.selectedNode);
    if (row) container.appendChild(detailPanel(row));
  }
}

function statusBar(state: ViewState): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "status-bar";

  const connection = document.createElement("span");
  connection.className = `connection connection-${state.connection}`;
  connection.textContent = state.connection;
  bar.appendChild(connection);

  if (state.report) {
    const score = document.createElement("span");
    score.className = "score";
    score.textContent = `score ${formatValue(state.report.score)}`;
    bar.appendChild(score);

    if (state.report.provisional) {
      const badge = document.createElement("span");
      badge.className = "badge provisional";
      badge.textContent = "provisional";
      bar.appendChild(badge);
    }
  }
  if (state.overlayActive) {
    const overlay = document.createElement("span");
    overlay.className = "badge what-if";
    overlay.textContent = "what-if (uncommitted)";
    bar.appendChild(overlay);
  }
  return bar;
}

function pathEdges(path: number[]): Set<string> {
  const pairs = new Set<string>();
  for (let i = 0; i + 1 < path.length; i += 1) {
    pairs.add(`${path[i]}->${path[i + 1]}`);
  }
  return pairs;
}

function graphSvg(state: ViewState): SVGSVGElement {
  const report = state.report!;
  const layout = layeredLayout(report, { width: WIDTH });
  const maxLayer = Math.max(0, ...[...layout.values()].map((p) => p.layer));
  const height = 60 + maxLayer * 110 + 80;

  const svg = document.createElementNS(SVG_NS, "svg");
  svg.setAttribute("class", "graph");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${height}`);
  svg.setAttribute("width", String(WIDTH));
  svg.setAttribute("height", String(height));

  const visible = new Set(
    report.nodes.filter((node) => nodeVisible(state, node)).map((node) => node.id),
  );
  const onPath = new Set(report.best_path);
  const onPathEdges = pathEdges(report.best_path);

  for (const edge of report.edges) {
    if (!visible.has(edge.parent) || !visible.has(edge.child)) continue;
    const from = layout.get(edge.parent);
    const to = layout.get(edge.child);
    if (!from || !to) continue;
    const line = document.createElementNS(SVG_NS, "line");
    const emphasized = onPathEdges.has(`${edge.parent}->${edge.child}`);
    line.setAttribute("class", emphasized ? "edge best-path" : "edge");
    line.setAttribute("data-edge", `${edge.parent}->${edge.child}`);
    line.setAttribute("data-raw", formatValue(edge.raw));
    line.setAttribute("data-gated", formatValue(edge.gated));
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y));
    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = edgeTooltip(edge);
    line.appendChild(tooltip);
    svg.appendChild(line);
  }

  for (const node of report.nodes) {
    if (!visible.has(node.id)) continue;
    const place = layout.get(node.id);
    if (!place) continue;
    const group = document.createElementNS(SVG_NS, "g");
    const emphasized = onPath.has(node.id);
    group.setAttribute(
      "class",
      `node role-${node.role}${emphasized ? " best-path" : ""}${
        node.has_metrics ? "" : " pending"
      }`,
    );
    group.setAttribute("data-node-id", String(node.id));
    group.setAttribute("data-trust", formatValue(node.trust));
    group.setAttribute("data-quality", formatValue(node.quality));

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(place.x));
    circle.setAttribute("cy", String(place.y));
    circle.setAttribute("r", "22");
    group.appendChild(circle);

    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("x", String(place.x));
    label.setAttribute("y", String(place.y + 40));
    label.setAttribute("text-anchor", "middle");
    label.textContent = `${node.id} ${node.role}`;
    group.appendChild(label);

    const tooltip = document.createElementNS(SVG_NS, "title");
    tooltip.textContent = nodeTooltip(node);
    group.appendChild(tooltip);

    svg.appendChild(group);
  }
  return svg;
}

function nodeTooltip(node: NodeRow): string {
  const lines = [`node ${node.id} (${node.role})`];
  for (const name of METRIC_NAMES) {
    const value = node.metrics ? formatValue(node.metrics[name]) : "pending";
    lines.push(`${name}: ${value}`);
  }
  lines.push(`quality: ${formatValue(node.quality)}`);
  lines.push(`trust: ${formatValue(node.trust)}`);
  return lines.join("\n");
}

function edgeTooltip(edge: EdgeRow): string {
  return [
    `edge ${edge.parent} -> ${edge.child}`,
    `prior: ${formatValue(edge.prior)}`,
    `parent quality: ${formatValue(edge.parent_quality)}`,
    `child quality: ${formatValue(edge.child_quality)}`,
    `alignment: ${formatValue(edge.alignment)}`,
    `synergy: ${formatValue(edge.synergy)}`,
    `raw confidence: ${formatValue(edge.raw)}`,
    `gated confidence: ${formatValue(edge.gated)}`,
  ].join("\n");
}

function detailPanel(node: NodeRow): HTMLElement {
  const panel = document.createElement("div");
  panel.className = "detail-panel";
  const title = document.createElement("h3");
  title.textContent = `node ${node.id} (${node.role})`;
  panel.appendChild(title);
  const list = document.createElement("dl");
  const rows: Array<[string, string]> = METRIC_NAMES.map((name) => [
    name,
    node.metrics ? formatValue(node.metrics[name]) : "pending",
  ]);
  rows.push(["quality", formatValue(node.quality)]);
  rows.push(["trust", formatValue(node.trust)]);
  for (const [key, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = key;
    const dd = document.createElement("dd");
    dd.textContent = value;
    list.appendChild(dt);
    list.appendChild(dd);
  }
  panel.appendChild(list);
  return panel;
}
