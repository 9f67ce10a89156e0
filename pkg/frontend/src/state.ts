/** Typed view of the get-state payload. */

export interface SlotView {
  index: number;
  gx: string[];
  gy: string[];
  e: number;
}

export interface FieldPane {
  learn: string;
  select: string;
  bm: number;
  ba: number;
  tau: number;
  slots: SlotView[];
  s: Record<string, number>;
  se: Record<string, number>;
  winner: number | null;
}

export interface TapePane {
  literal: string;
  i_scan: number;
  uttered: string;
  written: string;
  position_written: number;
}

export interface Modes {
  eye: "open" | "closed";
  am_source: "teacher" | "memory";
  as_source: "tape" | "memory";
  am_learn: "all" | "new" | "none";
  as_learn: "all" | "new" | "none";
}

export interface Diagnostics {
  halted: boolean;
  starved: string | null;
  boundary: boolean;
}

export interface WorkbenchState {
  version: number;
  time: number;
  tape: TapePane;
  history: string[];
  am: FieldPane;
  as: FieldPane;
  modes: Modes;
  teacher_entries: Record<string, string>;
  diagnostics: Diagnostics;
}

export const BLANK_GLYPH = "·";
