/**
 * Browser bootstrap: connect to the session service through a WebSocket
 * bridge, start a session, and repaint the whole workbench from server
 * state after every gesture.
 *
 * The engine speaks line-JSON over loopback TCP; point any
 * websocket-to-tcp bridge at it and pass the bridge URL as ?ws=...
 * (default ws://localhost:7321). Append &example=N to load one of the
 * five prepared demonstrations, &seed=K to pick the generator seed.
 */

import { WorkbenchController } from "./controller.js";
import { Gestures, renderWorkbench } from "./panes.js";
import { ServiceClient, WebSocketTransport } from "./protocol.js";
import { BLANK_GLYPH } from "./state.js";
import { h, mount } from "./vdom.js";

function gesturesFor(controller: WorkbenchController): Gestures {
  return {
    step: () => void controller.step(),
    init: () => {
      const entries = controller.state?.teacher_entries ?? {};
      void controller.init(entries.utter ?? BLANK_GLYPH, entries.write);
    },
    setMode: (target, value) => void controller.setMode(target, value),
    editTape: (index, symbol) => void controller.editTape(index, symbol),
    setScan: (index) => void controller.setScan(index),
    editSlot: (field, index, part, pos, symbol) =>
      void controller.editSlot(field, index, part, pos, symbol),
    clear: (what) => void controller.clear(what),
    teacherEntry: (channel, symbol) =>
      void controller.teacherEntry(channel, symbol),
  };
}

export function start(root: Element): void {
  const params = new URLSearchParams(window.location.search);
  const url = params.get("ws") ?? "ws://localhost:7321";
  const seed = Number(params.get("seed") ?? "0");
  const exampleParam = params.get("example");
  const example = exampleParam === null ? undefined : Number(exampleParam);

  const socket = new WebSocket(url);
  const client = new ServiceClient(new WebSocketTransport(socket));
  const controller = new WorkbenchController(client);
  const gestures = gesturesFor(controller);

  controller.onState((state) => {
    mount(root, renderWorkbench(state, gestures));
  });
  controller.onError((message) => {
    const banner = document.getElementById("error-banner");
    if (banner) banner.textContent = message;
  });

  socket.addEventListener("open", () => {
    void controller.newSession(seed, example);
  });
  socket.addEventListener("error", () => {
    mount(root, h("div", { class: "connect-error" }, [
      `cannot reach ${url}; start the service and a websocket bridge`,
    ]));
  });
}

if (typeof document !== "undefined" && document.getElementById("workbench-root")) {
  start(document.getElementById("workbench-root")!);
}
