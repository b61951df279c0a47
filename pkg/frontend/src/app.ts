/** The auditor application: session wiring, what-if edits, revert history.
 *
 * Committed state is whatever the verification stream produced; once the
 * stream is done, further metric or config edits are hypothetical and flip
 * the what-if overlay on. Reverting replays the remembered pre-edit values
 * through the engine (the engine recomputes deterministically, so the
 * reverted report is bit-identical to the committed one) and clears the
 * overlay.
 */

import type { SessionClient } from "./protocol.js";
import { render } from "./render.js";
import {
  applyFrame,
  beginOverlay,
  clearOverlay,
  initialState,
  selectNode,
  setConnection,
  setFilters,
  type Filters,
  type ViewState,
} from "./state.js";
import type { MetricMap, ServerFrame } from "./types.js";

interface MetricEdit {
  kind: "metrics";
  nodeId: number;
  previous: MetricMap;
}

interface ConfigEdit {
  kind: "config";
}

type WhatIfEdit = MetricEdit | ConfigEdit;

export class AuditorApp {
  state: ViewState = initialState();
  private edits: WhatIfEdit[] = [];

  constructor(
    private readonly client: SessionClient,
    private readonly container: HTMLElement,
    /** Full config document to restore on revert (the committed surface). */
    private readonly baselineConfig: unknown,
  ) {}

  private show(state: ViewState): void {
    this.state = state;
    render(this.container, state);
  }

  private absorb(frame: ServerFrame): void {
    this.show(applyFrame(this.state, frame));
  }

  async start(graph: unknown, config?: unknown): Promise<void> {
    this.show(setConnection(this.state, "connected"));
    this.absorb(await this.client.init(graph, config));
  }

  /** Committed-path update (verification stream). */
  async streamUpdate(nodeId: number, metrics: MetricMap): Promise<void> {
    this.absorb(await this.client.update(nodeId, metrics));
  }

  /** Hypothetical edit: remembers the previous metrics for revert. */
  async whatIfMetrics(nodeId: number, metrics: MetricMap): Promise<void> {
    const row = this.state.committedReport?.nodes.find((node) => node.id === nodeId);
    if (!row || row.metrics === null) {
      throw new Error(`node ${nodeId} has no committed metrics to edit`);
    }
    this.edits.push({ kind: "metrics", nodeId, previous: row.metrics });
    this.show(beginOverlay(this.state));
    this.absorb(await this.client.update(nodeId, metrics));
  }

  /** Hypothetical config edit (e.g. an eta slider). */
  async whatIfConfig(config: unknown): Promise<void> {
    this.edits.push({ kind: "config" });
    this.show(beginOverlay(this.state));
    this.absorb(await this.client.setConfig(config));
  }

  /** Undo every hypothetical edit, newest first, then show committed state. */
  async revert(): Promise<void> {
    while (this.edits.length > 0) {
      const edit = this.edits.pop()!;
      if (edit.kind === "metrics") {
        this.absorb(await this.client.update(edit.nodeId, edit.previous));
      } else {
        this.absorb(await this.client.setConfig(this.baselineConfig));
      }
    }
    this.show(clearOverlay(this.state));
  }

  get hasWhatIfEdits(): boolean {
    return this.edits.length > 0;
  }

  filter(filters: Partial<Filters>): void {
    this.show(setFilters(this.state, filters));
  }

  select(nodeId: number | null): void {
    this.show(selectNode(this.state, nodeId));
  }

  disconnect(): void {
    this.client.close();
    this.show(setConnection(this.state, "disconnected"));
  }
}
