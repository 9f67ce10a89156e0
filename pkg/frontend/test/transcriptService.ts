/**
 * In-memory stand-in for the session service, driven by a transcript
 * recorded from the real engine. Mutating requests must arrive in exactly
 * the recorded order with exactly the recorded content; reads (get-state)
 * are answered from the engine snapshot taken after the last mutation.
 */

import { Transport } from "../src/protocol.js";

export interface TranscriptStep {
  request: { verb: string; session?: string; args: Record<string, unknown> };
  response: Record<string, unknown>;
  state: Record<string, unknown>;
}

export interface Transcript {
  session: string;
  steps: TranscriptStep[];
}

function stableJson(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(stableJson).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .filter(([, v]) => v !== undefined)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${stableJson(v)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

export class TranscriptTransport implements Transport {
  private handler: ((line: string) => void) | null = null;
  private cursor = 0;
  readonly mismatches: string[] = [];

  constructor(private readonly transcript: Transcript) {}

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  send(line: string): void {
    const request = JSON.parse(line);
    let response: Record<string, unknown>;
    if (request.verb === "get-state") {
      const snapshot = this.currentState();
      response = { ok: true, version: snapshot.version, payload: snapshot };
    } else {
      const expected = this.transcript.steps[this.cursor];
      if (!expected) {
        this.mismatches.push(`unexpected extra request: ${line.trim()}`);
        response = { ok: false, error: "transcript exhausted" };
      } else if (stableJson(request) !== stableJson(expected.request)) {
        this.mismatches.push(
          `request ${this.cursor}: got ${stableJson(request)}, ` +
          `recorded ${stableJson(expected.request)}`);
        response = { ok: false, error: "request diverges from transcript" };
      } else {
        response = expected.response;
        this.cursor += 1;
      }
    }
    this.handler?.(JSON.stringify(response) + "\n");
  }

  close(): void {}

  currentState(): Record<string, unknown> & { version: number } {
    const index = Math.max(0, this.cursor - 1);
    return this.transcript.steps[index].state as Record<string, unknown> & {
      version: number;
    };
  }

  consumedAll(): boolean {
    return this.cursor === this.transcript.steps.length;
  }
}
