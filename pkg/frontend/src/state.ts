/** View state and the pure frame-application logic.
 *
 * The state holds engine reports verbatim; the UI never computes scores.
 * Filters affect rendering only and never mutate session data. A what-if
 * overlay marks the displayed report as hypothetical until it is reverted
 * or explicitly committed; the committed report is kept alongside so audits
 * can always distinguish observed from hypothetical state.
 */

import type { ScoreReport, ServerFrame } from "./types.js";

export interface Filters {
  /** null = all roles visible. */
  roles: Set<string> | null;
  qualityThreshold: number;
}

export type Connection = "disconnected" | "connected" | "error";

export interface ViewState {
  report: ScoreReport | null;
  committedReport: ScoreReport | null;
  overlayActive: boolean;
  done: boolean;
  filters: Filters;
  selectedNode: number | null;
  connection: Connection;
  lastError: { code: string; message: string } | null;
}

export function initialState(): ViewState {
  return {
    report: null,
    committedReport: null,
    overlayActive: false,
    done: false,
    filters: { roles: null, qualityThreshold: 0 },
    selectedNode: null,
    connection: "disconnected",
    lastError: null,
  };
}

/** Apply one server frame; pure (returns a new state). */
export function applyFrame(state: ViewState, frame: ServerFrame): ViewState {
  if (frame.type === "error") {
    // connection is retained: only the error panel changes
    return { ...state, lastError: { code: frame.code, message: frame.message } };
  }
  const report = frame.report;
  const done = frame.type === "delta" ? frame.done : state.done;
  const next: ViewState = { ...state, report, done, lastError: null };
  if (!state.overlayActive) {
    next.committedReport = report;
  }
  return next;
}

export function beginOverlay(state: ViewState): ViewState {
  return { ...state, overlayActive: true };
}

/** Drop the hypothetical layer and show committed state again. */
export function clearOverlay(state: ViewState): ViewState {
  return { ...state, overlayActive: false, report: state.committedReport };
}

export function setFilters(state: ViewState, filters: Partial<Filters>): ViewState {
  return { ...state, filters: { ...state.filters, ...filters } };
}

export function selectNode(state: ViewState, nodeId: number | null): ViewState {
  return { ...state, selectedNode: nodeId };
}

export function setConnection(state: ViewState, connection: Connection): ViewState {
  return { ...state, connection };
}

export function nodeVisible(
  state: ViewState,
  node: { role: string; quality: number },
): boolean {
  const { roles, qualityThreshold } = state.filters;
  if (roles !== null && !roles.has(node.role)) return false;
  return node.quality >= qualityThreshold;
}

export function visibleNodeIds(state: ViewState): Set<number> {
  const visible = new Set<number>();
  for (const node of state.report?.nodes ?? []) {
    if (nodeVisible(state, node)) visible.add(node.id);
  }
  return visible;
}

export function hiddenCount(state: ViewState): number {
  const total = state.report?.nodes.length ?? 0;
  return total - visibleNodeIds(state).size;
}

/** Reproduce the state produced by a recorded frame log. */
export function replayFrames(frames: ServerFrame[], start?: ViewState): ViewState {
  let state = start ?? initialState();
  for (const frame of frames) {
    state = applyFrame(state, frame);
  }
  return state;
}
