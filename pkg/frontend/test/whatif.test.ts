/** What-if round trips against real recorded engine frames.
 *
 * The fixture exchange was recorded from the engine's session protocol: a
 * full verification stream, a credibility edit on node 1, its revert, an
 * eta=1.0 config edit, and the config revert. The scripted transport
 * asserts the client sends exactly the recorded frames and replies with the
 * recorded responses, so these tests exercise the same bytes a live session
 * would carry.
 */

import { beforeEach, describe, expect, it } from "vitest";

import { AuditorApp } from "../src/app.js";
import type {
  DeltaFrame,
  MetricMap,
  ReportFrame,
  ScoreReport,
  ServerFrame,
} from "../src/types.js";
import { formatValue } from "../src/types.js";
import { fixture, mount, scriptedClient, type ExchangeStep } from "./helpers.js";

const exchange = fixture<ExchangeStep[]>("session_exchange.json");
const graph = fixture<unknown>("path_graph.json");

const INIT = 0;
const STREAM_UPDATES = [1, 2, 3, 4, 5];
const DEGRADE = 6;
const REVERT_METRICS = 7;
const ETA_ONE = 8;
const REVERT_CONFIG = 9;

function sendOf(step: number): Record<string, unknown> {
  return exchange[step]!.send as Record<string, unknown>;
}

function reportOf(step: number): ScoreReport {
  const frame = exchange[step]!.receive as DeltaFrame | ReportFrame;
  return frame.report;
}

function trustShown(container: HTMLElement, nodeId: number): string {
  const el = container.querySelector(`.node[data-node-id="${nodeId}"]`);
  expect(el, `node ${nodeId} should be rendered`).not.toBeNull();
  return el!.getAttribute("data-trust")!;
}

async function playCommittedStream(app: AuditorApp): Promise<void> {
  await app.start(graph);
  for (const step of STREAM_UPDATES) {
    const frame = sendOf(step);
    await app.streamUpdate(frame.node_id as number, frame.metrics as MetricMap);
  }
}

describe("what-if editing over the session stream", () => {
  let container: HTMLElement;
  let app: AuditorApp;

  beforeEach(() => {
    document.body.innerHTML = "";
    container = mount();
    const client = scriptedClient(exchange.map((step) => step));
    const baseline = sendOf(REVERT_CONFIG).config;
    app = new AuditorApp(client, container, baseline);
  });

  it("streams the committed run and then round-trips a credibility edit", async () => {
    await playCommittedStream(app);
    const committed = reportOf(STREAM_UPDATES[STREAM_UPDATES.length - 1]!);
    expect(app.state.done).toBe(true);
    expect(app.state.overlayActive).toBe(false);
    expect(trustShown(container, 3)).toBe(formatValue(
      committed.nodes.find((n) => n.id === 3)!.trust,
    ));

    // one what-if edit = one update frame = one delta frame; the downstream
    // trust display must change with that single frame
    const degraded = sendOf(DEGRADE);
    await app.whatIfMetrics(degraded.node_id as number, degraded.metrics as MetricMap);
    const hypothetical = reportOf(DEGRADE);
    expect(app.state.overlayActive).toBe(true);
    expect(container.querySelector(".badge.what-if")).not.toBeNull();
    for (const nodeId of [1, 3, 4]) {
      const shown = trustShown(container, nodeId);
      expect(shown).toBe(formatValue(hypothetical.nodes.find((n) => n.id === nodeId)!.trust));
      expect(shown).not.toBe(formatValue(committed.nodes.find((n) => n.id === nodeId)!.trust));
    }
    // upstream of the edit nothing moves
    expect(trustShown(container, 0)).toBe(
      formatValue(committed.nodes.find((n) => n.id === 0)!.trust),
    );
  });

  it("revert restores the committed snapshot exactly", async () => {
    await playCommittedStream(app);
    const committedHtml = container.innerHTML;

    const degraded = sendOf(DEGRADE);
    await app.whatIfMetrics(degraded.node_id as number, degraded.metrics as MetricMap);
    expect(container.innerHTML).not.toBe(committedHtml);

    await app.revert();
    expect(app.state.overlayActive).toBe(false);
    expect(app.hasWhatIfEdits).toBe(false);
    expect(container.innerHTML).toBe(committedHtml);
  });

  it("eta = 1.0 makes every displayed gated confidence equal its raw value", async () => {
    await playCommittedStream(app);
    // consume the recorded metric edit + revert to stay aligned with the script
    const degraded = sendOf(DEGRADE);
    await app.whatIfMetrics(degraded.node_id as number, degraded.metrics as MetricMap);
    await app.revert(); // replays REVERT_METRICS ... but keeps config edits for later

    await app.whatIfConfig(sendOf(ETA_ONE).config);
    const edges = container.querySelectorAll(".edge");
    expect(edges.length).toBeGreaterThan(0);
    for (const edge of edges) {
      expect(edge.getAttribute("data-gated")).toBe(edge.getAttribute("data-raw"));
    }

    await app.revert(); // sends the baseline config, restoring committed state
    const committed = reportOf(STREAM_UPDATES[STREAM_UPDATES.length - 1]!);
    const finalFrame = exchange[REVERT_CONFIG]!.receive as ReportFrame;
    expect(JSON.stringify(finalFrame.report)).toBe(JSON.stringify(committed));
    expect(app.state.overlayActive).toBe(false);
  });

  it("the frame log replays to the identical final view state", async () => {
    await playCommittedStream(app);
    const degraded = sendOf(DEGRADE);
    await app.whatIfMetrics(degraded.node_id as number, degraded.metrics as MetricMap);
    await app.revert();
    await app.whatIfConfig(sendOf(ETA_ONE).config);
    await app.revert();

    const { replayFrames } = await import("../src/state.js");
    const received = exchange.map((step) => step.receive as ServerFrame);
    const replayA = replayFrames(received);
    const replayB = replayFrames(received);
    expect(JSON.stringify(replayA)).toBe(JSON.stringify(replayB));
    // the replayed report is the final frame's report, which equals committed
    expect(JSON.stringify(replayA.report)).toBe(
      JSON.stringify(reportOf(REVERT_CONFIG)),
    );
  });
});
