import { describe, expect, it } from "vitest";

import { LineFramer, ServiceClient, Transport } from "../src/protocol.js";

class ScriptedTransport implements Transport {
  sent: string[] = [];
  private handler: ((line: string) => void) | null = null;
  private replies: string[] = [];

  queue(reply: unknown): void {
    this.replies.push(JSON.stringify(reply) + "\n");
  }

  send(line: string): void {
    this.sent.push(line);
    const reply = this.replies.shift();
    if (reply !== undefined) this.handler?.(reply);
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  deliver(raw: string): void {
    this.handler?.(raw);
  }

  close(): void {}
}

describe("line framing", () => {
  it("reassembles lines from arbitrary chunks", () => {
    const lines: string[] = [];
    const framer = new LineFramer((l) => lines.push(l));
    framer.feed('{"ok": tr');
    framer.feed('ue}\n{"ok": false}\n{"par');
    framer.feed("tial");
    expect(lines).toEqual(['{"ok": true}', '{"ok": false}']);
  });

  it("skips blank lines", () => {
    const lines: string[] = [];
    const framer = new LineFramer((l) => lines.push(l));
    framer.feed("\n\n{}\n");
    expect(lines).toEqual(["{}"]);
  });
});

describe("service client", () => {
  it("frames a request as one JSON line", async () => {
    const transport = new ScriptedTransport();
    const client = new ServiceClient(transport);
    transport.queue({ ok: true, version: 0, payload: { session: "s1" } });
    const response = await client.call("new-session", undefined, { seed: 0 });
    expect(response.ok).toBe(true);
    expect(JSON.parse(transport.sent[0])).toEqual({
      verb: "new-session",
      args: { seed: 0 },
    });
    expect(transport.sent[0].endsWith("\n")).toBe(true);
  });

  it("includes the session id when given", async () => {
    const transport = new ScriptedTransport();
    const client = new ServiceClient(transport);
    transport.queue({ ok: true, version: 1, payload: {} });
    await client.call("step", "s1", {});
    expect(JSON.parse(transport.sent[0]).session).toBe("s1");
  });

  it("rejects a second request while one is pending", async () => {
    const transport = new ScriptedTransport();
    const client = new ServiceClient(transport);
    const first = client.call("step", "s1", {}); // no reply queued yet
    await expect(client.call("step", "s1", {})).rejects.toThrow("in flight");
    transport.deliver('{"ok": true, "version": 1, "payload": {}}\n');
    await expect(first).resolves.toMatchObject({ ok: true });
  });

  it("surfaces error responses through expectOk", async () => {
    const transport = new ScriptedTransport();
    const client = new ServiceClient(transport);
    transport.queue({ ok: false, error: "unknown verb 'warp'" });
    await expect(client.expectOk("warp", "s1")).rejects.toThrow("unknown verb");
  });

  it("turns malformed response lines into protocol errors", async () => {
    const transport = new ScriptedTransport();
    const client = new ServiceClient(transport);
    const pending = client.call("step", "s1", {});
    transport.deliver("not json at all\n");
    const response = await pending;
    expect(response.ok).toBe(false);
  });
});
