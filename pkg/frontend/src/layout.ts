/** Deterministic layered top-down placement: parents above children.
 *
 * A node's layer is its longest-path depth from the parentless roots, so
 * every edge points strictly downward. Within a layer, nodes are ordered by
 * ascending id. The same report always produces the same coordinates.
 */

import type { ScoreReport } from "./types.js";

export interface PlacedNode {
  id: number;
  layer: number;
  x: number;
  y: number;
}

export interface LayoutOptions {
  width: number;
  rowHeight: number;
  top: number;
}

const DEFAULTS: LayoutOptions = { width: 900, rowHeight: 110, top: 60 };

export function layeredLayout(
  report: ScoreReport,
  options: Partial<LayoutOptions> = {},
): Map<number, PlacedNode> {
  const { width, rowHeight, top } = { ...DEFAULTS, ...options };
  const ids = report.nodes.map((node) => node.id).sort((a, b) => a - b);
  const parents = new Map<number, number[]>(ids.map((id) => [id, []]));
  for (const edge of report.edges) {
    parents.get(edge.child)?.push(edge.parent);
  }

  const layers = new Map<number, number>();
  const depth = (id: number, trail: Set<number>): number => {
    const known = layers.get(id);
    if (known !== undefined) return known;
    if (trail.has(id)) return 0; // defensive: reports only carry DAGs
    trail.add(id);
    const above = parents.get(id) ?? [];
    const layer = above.length === 0 ? 0 : 1 + Math.max(...above.map((p) => depth(p, trail)));
    layers.set(id, layer);
    return layer;
  };
  for (const id of ids) depth(id, new Set());

  const byLayer = new Map<number, number[]>();
  for (const id of ids) {
    const layer = layers.get(id) ?? 0;
    const row = byLayer.get(layer) ?? [];
    row.push(id);
    byLayer.set(layer, row);
  }

  const placed = new Map<number, PlacedNode>();
  for (const [layer, row] of byLayer) {
    row.sort((a, b) => a - b);
    row.forEach((id, index) => {
      placed.set(id, {
        id,
        layer,
        x: (width * (index + 1)) / (row.length + 1),
        y: top + layer * rowHeight,
      });
    });
  }
  return placed;
}
