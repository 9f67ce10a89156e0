/**
 * The three workbench panes as virtual trees: the working-memory field,
 * the motor field, and the external world (tape plus history). Pure
 * functions of the server state; gestures are injected as handlers so a
 * click maps to exactly one verb.
 *
 * Conventions carried over from the desktop original: the active mode
 * word is highlighted, the scanned square carries the green cursor (placed
 * with a right click), the winner's similarity bar is red and other
 * similarity bars green, excitation bars magenta, and the motor entry row
 * accepts input only while the motor field listens to the teacher.
 */

import { FieldPane, Modes, WorkbenchState, BLANK_GLYPH } from "./state.js";
import { VNode, h } from "./vdom.js";

export interface Gestures {
  step(): void;
  init(): void;
  setMode(target: string, value: string): void;
  editTape(index: number, symbol: string): void;
  setScan(index: number): void;
  editSlot(field: "am" | "as", index: number, part: "input" | "output",
           pos: number, symbol: string): void;
  clear(what: string): void;
  teacherEntry(channel: string, symbol: string): void;
}

function modeToggle(label: string, target: string, options: string[],
                    active: string, gestures: Gestures): VNode {
  return h("div", { class: "mode-toggle" }, [
    h("span", { class: "mode-label" }, [label]),
    ...options.map((option) =>
      h("button", {
        class: option === active ? "mode-option active" : "mode-option",
      }, [option], { onClick: () => gestures.setMode(target, option) })),
  ]);
}

function bar(kind: string, value: number): VNode {
  const width = Math.round(Math.max(0, Math.min(1, value)) * 100);
  return h("div", { class: `bar ${kind}`, style: `width:${width}%` }, []);
}

function slotCell(field: "am" | "as", index: number, part: "input" | "output",
                  pos: number, symbol: string, gestures: Gestures): VNode {
  return h("input", {
    class: "slot-cell",
    value: symbol,
    maxlength: "4",
    "data-slot": String(index),
    "data-part": part,
    "data-pos": String(pos),
  }, [], {
    onInput: (value) => gestures.editSlot(field, index, part, pos,
                                          value || BLANK_GLYPH),
  });
}

export function renderFieldPane(name: "am" | "as", title: string,
                                pane: FieldPane, gestures: Gestures): VNode {
  const rows = pane.slots.map((slot) => {
    const s = pane.s[String(slot.index)] ?? 0;
    const isWinner = pane.winner === slot.index;
    return h("tr", { class: isWinner ? "slot-row winner" : "slot-row" }, [
      h("td", { class: "slot-index" }, [String(slot.index)]),
      h("td", { class: "slot-gx" },
        slot.gx.map((sym, pos) => slotCell(name, slot.index, "input", pos, sym, gestures))),
      h("td", { class: "slot-gy" },
        slot.gy.map((sym, pos) => slotCell(name, slot.index, "output", pos, sym, gestures))),
      h("td", { class: "slot-s" }, [bar(isWinner ? "s-winner" : "s-other", s)]),
      ...(name === "as"
        ? [h("td", { class: "slot-e" }, [bar("e", slot.e)])]
        : []),
    ]);
  });
  const toggles: VNode[] = [];
  if (name === "as") {
    toggles.push(modeToggle("from:", "as_source", ["tape", "memory"],
                            pane.select === "teacher" ? "tape" : "memory", gestures));
  } else {
    toggles.push(modeToggle("from:", "am_source", ["teacher", "memory"],
                            pane.select, gestures));
  }
  toggles.push(modeToggle("learn:", `${name}_learn`, ["all", "new", "none"],
                          pane.learn, gestures));
  const header: (VNode | string)[] = [h("h2", {}, [title])];
  if (name === "as") {
    header.push(h("span", { class: "tau" }, [`τ = ${pane.tau}`]));
  }
  return h("section", { class: `pane field-pane pane-${name}` }, [
    h("header", {}, header),
    ...toggles,
    h("div", { class: "pane-buttons" }, [
      h("button", { class: "btn-clear-fronts" }, ["Clr S,E"],
        { onClick: () => gestures.clear(`${name}_fronts`) }),
      h("button", { class: "btn-clear-ltm" }, ["Clr G"],
        { onClick: () => gestures.clear(`${name}_ltm`) }),
    ]),
    h("table", { class: "ltm-table" }, rows),
  ]);
}

function teacherRow(modes: Modes, entries: Record<string, string>,
                    gestures: Gestures, hasEye: boolean): VNode {
  const channels = hasEye ? ["utter", "move", "write", "eye"] : ["utter", "move", "write"];
  const enabled = modes.am_source === "teacher";
  return h("div", { class: enabled ? "teacher-row" : "teacher-row disabled" },
    channels.map((channel) =>
      h("label", { class: `teacher-${channel}` }, [
        channel,
        h("input", {
          class: "teacher-cell",
          value: entries[channel] ?? "",
          ...(enabled ? {} : { disabled: "disabled" }),
        }, [], enabled
          ? { onInput: (value) => gestures.teacherEntry(channel, value || BLANK_GLYPH) }
          : {}),
      ])));
}

export function renderMotorPane(state: WorkbenchState, gestures: Gestures): VNode {
  const pane = renderFieldPane("am", "Motor control — AM", state.am, gestures);
  pane.children.push(
    teacherRow(state.modes, state.teacher_entries, gestures,
               state.am.slots.some((slot) => slot.gy.length === 4)),
    h("div", { class: "run-buttons" }, [
      h("button", { class: "btn-step" }, ["Step"], { onClick: () => gestures.step() }),
      h("button", { class: "btn-init" }, ["Init"], { onClick: () => gestures.init() }),
      h("button", { class: "btn-clear-history" }, ["Clr TH"],
        { onClick: () => gestures.clear("history") }),
      h("button", { class: "btn-clear-tape" }, ["Clr T"],
        { onClick: () => gestures.clear("tape") }),
    ]),
  );
  return pane;
}

export function renderWorldPane(state: WorkbenchState, gestures: Gestures): VNode {
  const cells: VNode[] = [];
  const literal = state.tape.literal;
  const width = Math.max(literal.length + 2, 12);
  for (let i = 0; i < width; i += 1) {
    const symbol = i < literal.length ? literal[i] : BLANK_GLYPH;
    const scanned = i === state.tape.i_scan;
    cells.push(h("input", {
      class: scanned ? "tape-cell scanned" : "tape-cell",
      value: symbol,
      maxlength: "1",
      "data-index": String(i),
    }, [], {
      onInput: (value) => gestures.editTape(i, value || BLANK_GLYPH),
      onContextMenu: () => gestures.setScan(i),
    }));
  }
  const historyRows = state.history.map((row) =>
    h("div", { class: "history-row" }, [row]));
  const flags: string[] = [];
  if (state.diagnostics.halted) flags.push("halted");
  if (state.diagnostics.starved) flags.push(`starved: ${state.diagnostics.starved}`);
  if (state.diagnostics.boundary) flags.push("boundary");
  return h("section", { class: "pane world-pane" }, [
    h("header", {}, [h("h2", {}, ["External world — tape"]),
                     h("span", { class: "clock" }, [`t = ${state.time}`])]),
    h("div", { class: "tape-row" }, cells),
    h("div", { class: "diagnostics" }, [flags.join("; ")]),
    h("div", { class: "history" }, historyRows),
  ]);
}

export function renderWorkbench(state: WorkbenchState, gestures: Gestures): VNode {
  return h("main", { class: "workbench" }, [
    renderFieldPane("as", "Working memory & imagery — AS", state.as, gestures),
    renderMotorPane(state, gestures),
    renderWorldPane(state, gestures),
  ]);
}
