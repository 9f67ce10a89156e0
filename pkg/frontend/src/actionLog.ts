/**
 * Audit trail: every user gesture maps to exactly one protocol verb, and
 * this log is the record of that mapping. Read-only refreshes are not
 * gestures and are not logged.
 */

export interface LoggedAction {
  verb: string;
  args: Record<string, unknown>;
}

export class ActionLog {
  private readonly entries: LoggedAction[] = [];

  record(verb: string, args: Record<string, unknown> = {}): void {
    this.entries.push({ verb, args });
  }

  verbs(): string[] {
    return this.entries.map((e) => e.verb);
  }

  all(): LoggedAction[] {
    return this.entries.slice();
  }

  clear(): void {
    this.entries.length = 0;
  }
}
