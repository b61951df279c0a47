/** Session wire-protocol client over an injectable transport.
 *
 * The protocol is strict FIFO: every client frame gets exactly one reply, so
 * a simple resolver queue correlates them. All frames (both directions) are
 * appended to a log; replaying a log's received frames through the view
 * state reproduces the identical final view.
 */

import type { ClientFrame, MetricMap, ServerFrame } from "./types.js";

export interface Transport {
  send(text: string): void;
  close?(): void;
}

export interface LogEntry {
  dir: "send" | "receive";
  frame: unknown;
}

export class SessionClient {
  readonly log: LogEntry[] = [];
  /** Observer for every received frame, in arrival order. */
  onFrame: ((frame: ServerFrame) => void) | null = null;

  private pending: Array<(frame: ServerFrame) => void> = [];

  constructor(private readonly transport: Transport) {}

  /** Wire incoming transport text to the client (call from onmessage). */
  receive(text: string): void {
    let frame: ServerFrame;
    try {
      frame = JSON.parse(text) as ServerFrame;
    } catch {
      frame = { type: "error", code: "malformed_frame", message: "unparseable server frame" };
    }
    this.log.push({ dir: "receive", frame });
    const resolve = this.pending.shift();
    if (this.onFrame) this.onFrame(frame);
    if (resolve) resolve(frame);
  }

  request(frame: ClientFrame): Promise<ServerFrame> {
    this.log.push({ dir: "send", frame });
    const reply = new Promise<ServerFrame>((resolve) => this.pending.push(resolve));
    this.transport.send(JSON.stringify(frame));
    return reply;
  }

  init(graph: unknown, config?: unknown): Promise<ServerFrame> {
    const frame: ClientFrame =
      config === undefined ? { type: "init", graph } : { type: "init", graph, config };
    return this.request(frame);
  }

  update(nodeId: number, metrics: MetricMap): Promise<ServerFrame> {
    return this.request({ type: "update", node_id: nodeId, metrics });
  }

  snapshot(): Promise<ServerFrame> {
    return this.request({ type: "snapshot" });
  }

  setConfig(config: unknown): Promise<ServerFrame> {
    return this.request({ type: "set_config", config });
  }

  close(): void {
    this.transport.close?.();
  }
}

/** Browser transport: one JSON frame per WebSocket text message. */
export function connectWebSocket(
  url: string,
  hooks: { onOpen?: () => void; onClose?: () => void } = {},
): SessionClient {
  const socket = new WebSocket(url);
  const client = new SessionClient({
    send: (text) => socket.send(text),
    close: () => socket.close(),
  });
  socket.onmessage = (event) => client.receive(String(event.data));
  if (hooks.onOpen) socket.onopen = hooks.onOpen;
  if (hooks.onClose) socket.onclose = hooks.onClose;
  return client;
}
