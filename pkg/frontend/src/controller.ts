/**
 * Wires workbench gestures to protocol verbs. The controller keeps no
 * engine state of its own: after every mutating verb it refreshes the
 * whole view from one get-state, so a page reload reconstructs exactly
 * what the server knows. Every gesture issues exactly one mutating verb,
 * recorded in the action log.
 */

import { ActionLog } from "./actionLog.js";
import { ServiceClient } from "./protocol.js";
import { WorkbenchState } from "./state.js";

export type StateListener = (state: WorkbenchState) => void;
export type ErrorListener = (message: string) => void;

export class WorkbenchController {
  readonly log = new ActionLog();
  private session: string | null = null;
  private listeners: StateListener[] = [];
  private errorListeners: ErrorListener[] = [];
  state: WorkbenchState | null = null;

  constructor(private readonly client: ServiceClient) {}

  onState(listener: StateListener): void {
    this.listeners.push(listener);
  }

  onError(listener: ErrorListener): void {
    this.errorListeners.push(listener);
  }

  private fail(message: string): void {
    for (const listener of this.errorListeners) listener(message);
  }

  sessionId(): string | null {
    return this.session;
  }

  /** Start a session (optionally one of the five prepared examples). */
  async newSession(seed: number, example?: number): Promise<void> {
    const args: Record<string, unknown> = { seed };
    if (example !== undefined) args.example = example;
    this.log.record("new-session", args);
    const response = await this.client.call("new-session", undefined, args);
    if (!response.ok) {
      this.fail(response.error);
      return;
    }
    this.session = String(response.payload.session);
    await this.refresh();
  }

  /** Pull the whole view from the server; not a gesture, never logged. */
  async refresh(): Promise<WorkbenchState | null> {
    if (!this.session) return null;
    const response = await this.client.call("get-state", this.session, {});
    if (!response.ok) {
      this.fail(response.error);
      return null;
    }
    this.state = response.payload as unknown as WorkbenchState;
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  /** One mutating gesture: log it, send it, surface errors, refresh. */
  private async gesture(verb: string, args: Record<string, unknown> = {}): Promise<boolean> {
    if (!this.session) {
      this.fail("no session");
      return false;
    }
    this.log.record(verb, args);
    const response = await this.client.call(verb, this.session, args);
    if (!response.ok) {
      this.fail(response.error);
      await this.refresh();
      return false;
    }
    await this.refresh();
    return true;
  }

  step(): Promise<boolean> {
    return this.gesture("step", {});
  }

  init(utter: string, write?: string): Promise<boolean> {
    const args: Record<string, unknown> = { utter };
    if (write !== undefined) args.write = write;
    return this.gesture("init", args);
  }

  setMode(target: string, value: string): Promise<boolean> {
    return this.gesture("set-mode", { target, value });
  }

  editTape(index: number, symbol: string): Promise<boolean> {
    return this.gesture("edit-tape", { index, symbol });
  }

  setScan(index: number): Promise<boolean> {
    return this.gesture("set-scan", { index });
  }

  editSlot(field: "am" | "as", index: number, part: "input" | "output",
           pos: number, symbol: string): Promise<boolean> {
    return this.gesture("edit-slot", { field, index, part, pos, symbol });
  }

  clear(what: string): Promise<boolean> {
    return this.gesture("clear", { what });
  }

  teacherEntry(channel: string, symbol: string): Promise<boolean> {
    return this.gesture("teacher-entry", { channel, symbol });
  }

  /**
   * The second demonstration as a scripted macro: step with the eye open
   * until the handoff to the checker (uttered state becomes '0'), click
   * the working-memory field over to its memory source, and keep stepping
   * until the machine halts. The action log then holds exactly the verb
   * sequence a human would have produced.
   */
  async runExampleTwo(seed: number, maxSteps = 1000): Promise<void> {
    await this.newSession(seed, 2);
    let closed = false;
    for (let i = 0; i < maxSteps; i += 1) {
      const state = await this.refresh();
      if (!state || state.diagnostics.halted) break;
      if (!closed && state.tape.uttered === "0") {
        await this.setMode("as_source", "memory");
        closed = true;
      }
      await this.step();
    }
  }
}
