import { describe, expect, it } from "vitest";

import { SessionClient } from "../src/protocol.js";
import type { ServerFrame } from "../src/types.js";

function echoClient(replies: ServerFrame[]): { client: SessionClient; sent: string[] } {
  const sent: string[] = [];
  let index = 0;
  const client = new SessionClient({
    send: (text) => {
      sent.push(text);
      const reply = replies[index];
      index += 1;
      queueMicrotask(() => client.receive(JSON.stringify(reply)));
    },
  });
  return { client, sent };
}

describe("session client", () => {
  it("correlates replies to requests in strict FIFO order", async () => {
    const { client } = echoClient([
      { type: "error", code: "a", message: "first" },
      { type: "error", code: "b", message: "second" },
      { type: "error", code: "c", message: "third" },
    ]);
    const [first, second, third] = await Promise.all([
      client.snapshot(),
      client.snapshot(),
      client.snapshot(),
    ]);
    expect((first as { code: string }).code).toBe("a");
    expect((second as { code: string }).code).toBe("b");
    expect((third as { code: string }).code).toBe("c");
  });

  it("logs every frame in both directions, in order", async () => {
    const { client } = echoClient([{ type: "error", code: "x", message: "m" }]);
    await client.snapshot();
    expect(client.log.map((entry) => entry.dir)).toEqual(["send", "receive"]);
  });

  it("turns unparseable server text into a malformed_frame error", async () => {
    const client = new SessionClient({
      send: () => queueMicrotask(() => client.receive("this is not json")),
    });
    const reply = await client.snapshot();
    expect(reply.type).toBe("error");
    expect((reply as { code: string }).code).toBe("malformed_frame");
  });

  it("notifies the frame observer for every received frame", async () => {
    const { client } = echoClient([
      { type: "error", code: "a", message: "" },
      { type: "error", code: "b", message: "" },
    ]);
    const seen: string[] = [];
    client.onFrame = (frame) => seen.push((frame as { code: string }).code);
    await client.snapshot();
    await client.snapshot();
    expect(seen).toEqual(["a", "b"]);
  });
});
