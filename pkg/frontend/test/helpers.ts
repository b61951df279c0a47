import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { expect } from "vitest";

import { SessionClient, type Transport } from "../src/protocol.js";

const HERE = dirname(fileURLToPath(import.meta.url));

export function fixture<T>(name: string): T {
  return JSON.parse(readFileSync(join(HERE, "fixtures", name), "utf-8")) as T;
}

export interface ExchangeStep {
  send: unknown;
  receive: unknown;
}

/** Transport that verifies each outgoing frame against a recorded exchange
 * and replies with the recorded engine frame. */
export class ScriptedTransport implements Transport {
  client: SessionClient | null = null;
  sent = 0;

  constructor(private readonly script: ExchangeStep[]) {}

  send(text: string): void {
    const step = this.script[this.sent];
    expect(step, `unexpected extra frame #${this.sent}`).toBeDefined();
    expect(JSON.parse(text)).toEqual(step!.send);
    this.sent += 1;
    queueMicrotask(() => this.client?.receive(JSON.stringify(step!.receive)));
  }

  close(): void {}
}

export function scriptedClient(script: ExchangeStep[]): SessionClient {
  const transport = new ScriptedTransport(script);
  const client = new SessionClient(transport);
  transport.client = client;
  return client;
}

export function mount(): HTMLDivElement {
  const container = document.createElement("div");
  document.body.appendChild(container);
  return container;
}
