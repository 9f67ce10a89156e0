"""Session server for the companion UI.

Line-delimited JSON over a loopback TCP socket: each request is one line
``{"session": id, "verb": name, "args": {...}}`` and each response one
line ``{"ok": true, "version": n, "payload": ...}`` or ``{"ok": false,
"error": msg}``. The verb set mirrors exactly the human actions the
workbench supports -- stepping, init, mode toggles, tape/table editing,
clear buttons, cursor placement, teacher entry -- and the engine never
steps on its own. ``get-state`` is side-effect-free; every mutating verb
bumps the session's version number.

The dispatcher is transport-independent (see handle_request), so tests
drive the protocol without sockets.
"""

from __future__ import annotations

import json
import socket
import socketserver
import threading
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

from tapemind.field import AssociativeField, CapacityError
from tapemind.programs import example_scenario
from tapemind.robot import Robot, StarvationHalt, trace_row_text
from tapemind.session import SessionRng
from tapemind.symbols import render, unrender
from tapemind.world import MotorCommand


class VerbError(ValueError):
    """Illegal request: unknown verb/session, bad argument, or an edit the
    current mode forbids."""


TEACHER_CHANNELS = ("utter", "move", "write", "eye")


@dataclass
class EngineSession:
    robot: Robot
    version: int = 0
    teacher_entries: dict[str, str] = dc_field(default_factory=dict)
    lock: threading.Lock = dc_field(default_factory=threading.Lock)

    def bump(self) -> int:
        self.version += 1
        return self.version


class ServiceState:
    """All live sessions of one server process."""

    def __init__(self) -> None:
        self.sessions: dict[str, EngineSession] = {}
        self._next = 1
        self._lock = threading.Lock()

    def create(self, robot: Robot) -> str:
        with self._lock:
            sid = f"s{self._next}"
            self._next += 1
            self.sessions[sid] = EngineSession(robot)
            return sid

    def get(self, sid: str) -> EngineSession:
        try:
            return self.sessions[sid]
        except KeyError:
            raise VerbError(f"unknown session {sid!r}") from None


def _field_pane(fld: AssociativeField) -> dict[str, Any]:
    slots = []
    for i in fld.occupied_indices():
        slot = fld.slot(i)
        slots.append({
            "index": i,
            "gx": [render(c) for c in slot.gx],
            "gy": [render(c) for c in slot.gy],
            "e": slot.e,
        })
    return {
        "learn": fld.cfg.learn_mode,
        "select": fld.cfg.select_source,
        "bm": fld.cfg.bm,
        "ba": fld.cfg.ba,
        "tau": fld.cfg.tau,
        "slots": slots,
        "s": {str(i): v for i, v in fld.last_s.items() if v},
        "se": {str(i): v for i, v in fld.last_se.items() if v},
        "winner": fld.last_i_read,
    }


def _state_payload(session: EngineSession, panes: Optional[list[str]]) -> dict[str, Any]:
    robot = session.robot
    wanted = set(panes) if panes else {"world", "am", "as", "modes"}
    payload: dict[str, Any] = {
        "version": session.version,
        "time": robot.v,
        "diagnostics": {
            "halted": robot.halted,
            "starved": robot.starved,
            "boundary": robot.world.boundary_clamped,
        },
    }
    if "world" in wanted:
        payload["tape"] = {
            "literal": robot.world.literal(with_scan=False),
            "i_scan": robot.world.i_scan,
            "uttered": render(robot.world.symbol_uttered),
            "written": render(robot.world.symbol_written),
            "position_written": robot.world.position_written,
        }
        payload["history"] = [trace_row_text(r) for r in robot.history]
    if "am" in wanted:
        payload["am"] = _field_pane(robot.am)
    if "as" in wanted:
        payload["as"] = _field_pane(robot.as_field)
    if "modes" in wanted:
        payload["modes"] = {
            "eye": "open" if robot.eye_open else "closed",
            "am_source": robot.am.cfg.select_source,
            "as_source": robot.as_source(),
            "am_learn": robot.am.cfg.learn_mode,
            "as_learn": robot.as_field.cfg.learn_mode,
        }
        payload["teacher_entries"] = dict(session.teacher_entries)
    return payload


def _staged_command(session: EngineSession) -> MotorCommand:
    entries = session.teacher_entries
    eye: Optional[str] = None
    if session.robot.cfg.motor_width == 4:
        eye = unrender(entries.get("eye", "·"))
    return MotorCommand(
        utter=unrender(entries.get("utter", "·")),
        move=unrender(entries.get("move", "·")),
        write=unrender(entries.get("write", "·")),
        eye=eye,
    )


def _arg(args: dict, key: str, kind=str):
    if key not in args:
        raise VerbError(f"missing argument {key!r}")
    value = args[key]
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise VerbError(f"bad argument {key}={value!r}") from None


def handle_request(state: ServiceState, request: dict) -> dict:
    """Dispatch one request object; always returns a response object."""
    try:
        verb = request.get("verb")
        args = request.get("args") or {}
        if not isinstance(args, dict):
            raise VerbError("args must be an object")
        if verb == "new-session":
            seed = int(args.get("seed", 0))
            example = args.get("example")
            if example is not None:
                scenario = example_scenario(int(example), seed=seed)
                scenario.initialize()
                robot = scenario.robot
            else:
                robot = Robot(rng=SessionRng(seed))
            sid = state.create(robot)
            return {"ok": True, "version": 0, "payload": {"session": sid}}

        sid = request.get("session")
        if not isinstance(sid, str):
            raise VerbError("request needs a session id")
        session = state.get(sid)
        with session.lock:
            return _dispatch(session, verb, args)
    except VerbError as exc:
        return {"ok": False, "error": str(exc)}
    except (CapacityError, StarvationHalt, ValueError, IndexError) as exc:
        return {"ok": False, "error": f"{type(exc).__name__}: {exc}"}


def _dispatch(session: EngineSession, verb: Optional[str], args: dict) -> dict:
    robot = session.robot

    if verb == "get-state":
        panes = args.get("panes")
        if panes is not None and not isinstance(panes, list):
            raise VerbError("panes must be a list of pane names")
        return {"ok": True, "version": session.version,
                "payload": _state_payload(session, panes)}

    if verb == "step":
        teacher = None
        if robot.am.cfg.select_source == "teacher":
            teacher = _staged_command(session)
        payload: dict[str, Any] = {}
        try:
            row = robot.macro_step(teacher)
            payload["row"] = trace_row_text(row)
        except StarvationHalt as exc:
            payload["starved"] = str(exc)
        return {"ok": True, "version": session.bump(), "payload": payload}

    if verb == "init":
        utter = args.get("utter")
        write = args.get("write")
        if robot.am.cfg.select_source != "teacher":
            raise VerbError("init is available only in teacher mode")
        robot.init_step(
            utter=None if utter is None else unrender(str(utter)),
            write=None if write is None else unrender(str(write)),
        )
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "set-mode":
        target = _arg(args, "target")
        value = _arg(args, "value")
        if target == "am_source":
            robot.set_am_source(value)
        elif target == "as_source":
            robot.set_as_source(value)
        elif target == "eye":
            if value not in ("open", "closed"):
                raise VerbError("eye must be 'open' or 'closed'")
            robot.set_eye(value == "open")
        elif target == "am_learn":
            robot.set_learn_modes(am=value)
        elif target == "as_learn":
            robot.set_learn_modes(as_=value)
        elif target == "as_tau":
            tau = float(value)
            if tau <= 1:
                raise VerbError("tau must exceed 1")
            robot.as_field.cfg.tau = tau
        else:
            raise VerbError(f"unknown mode target {target!r}")
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "edit-tape":
        index = _arg(args, "index", int)
        symbol = unrender(_arg(args, "symbol"))
        robot.world.edit_square(index, symbol)
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "set-scan":
        robot.world.set_scan(_arg(args, "index", int))
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "edit-slot":
        fld = _field_by_name(robot, _arg(args, "field"))
        fld.edit_slot(_arg(args, "index", int), _arg(args, "part"),
                      _arg(args, "pos", int), unrender(_arg(args, "symbol")))
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "clear":
        what = _arg(args, "what")
        if what == "tape":
            robot.world.clear()
        elif what == "history":
            robot.history.clear()
        elif what in ("am_ltm", "as_ltm"):
            _field_by_name(robot, what[:2]).clear_all()
        elif what in ("am_fronts", "as_fronts"):
            _field_by_name(robot, what[:2]).clear_fronts()
        else:
            raise VerbError(f"unknown clear target {what!r}")
        return {"ok": True, "version": session.bump(), "payload": {}}

    if verb == "teacher-entry":
        channel = _arg(args, "channel")
        symbol = _arg(args, "symbol")
        if channel not in TEACHER_CHANNELS:
            raise VerbError(f"unknown teacher channel {channel!r}")
        if channel == "eye" and robot.cfg.motor_width != 4:
            raise VerbError("this robot has no eye-control channel")
        if robot.am.cfg.select_source != "teacher":
            raise VerbError("teacher entries require AM in teacher mode")
        session.teacher_entries[channel] = symbol
        return {"ok": True, "version": session.bump(), "payload": {}}

    raise VerbError(f"unknown verb {verb!r}")


def _field_by_name(robot: Robot, name: str) -> AssociativeField:
    if name == "am":
        return robot.am
    if name == "as":
        return robot.as_field
    raise VerbError(f"unknown field {name!r}")


# -- socket transport ---------------------------------------------------------

class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        while True:
            line = self.rfile.readline()
            if not line:
                return
            text = line.decode("utf-8").strip()
            if not text:
                continue
            try:
                request = json.loads(text)
                if not isinstance(request, dict):
                    raise ValueError("request must be an object")
            except ValueError as exc:
                response = {"ok": False, "error": f"malformed request: {exc}"}
            else:
                response = handle_request(self.server.state, request)
            self.wfile.write((json.dumps(response) + "\n").encode("utf-8"))


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = 0):
        super().__init__((host, port), _Handler)
        self.state = ServiceState()

    @property
    def address(self) -> tuple[str, int]:
        return self.server_address[:2]


class ServiceClient:
    """Minimal line-JSON client, one request in flight at a time."""

    def __init__(self, host: str, port: int):
        self._sock = socket.create_connection((host, port))
        self._file = self._sock.makefile("rwb")

    def call(self, verb: str, session: Optional[str] = None,
             **args) -> dict:
        request = {"verb": verb, "args": args}
        if session is not None:
            request["session"] = session
        self._file.write((json.dumps(request) + "\n").encode("utf-8"))
        self._file.flush()
        line = self._file.readline()
        if not line:
            raise ConnectionError("server closed the connection")
        return json.loads(line.decode("utf-8"))

    def close(self) -> None:
        self._file.close()
        self._sock.close()


def main(argv=None) -> int:
    import argparse
    parser = argparse.ArgumentParser(prog="tapemind-service")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=7320)
    args = parser.parse_args(argv)
    server = SessionServer(args.host, args.port)
    host, port = server.address
    print(f"listening on {host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
