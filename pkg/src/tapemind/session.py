"""Determinism, persistence and replay.

All randomness flows through one SessionRng per robot session; it counts
its draws so a project file (seed + draw count) pins the generator state
exactly, making mid-run snapshots replayable. Project files are
line-oriented UTF-8 ([section] / key=value) and round-trip byte-identically
through save -> load -> save.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Optional

from tapemind.field import FieldConfig
from tapemind.robot import Robot, RobotConfig, trace_row_text
from tapemind.symbols import BLANK, parse_vector, render, render_vector
from tapemind.world import HistoryRow, parse_tape_literal

PROJECT_VERSION = 1


class SessionRng:
    """Counting wrapper around a seeded Mersenne Twister.

    Every consumer draws uniform floats via draw(); restoring seed plus
    draw count reproduces the stream exactly.
    """

    def __init__(self, seed: int, draws: int = 0):
        self.seed = int(seed)
        self.draws = 0
        self._rng = random.Random(self.seed)
        if draws:
            self.fast_forward(draws)

    def draw(self) -> float:
        self.draws += 1
        return self._rng.random()

    def fast_forward(self, draws: int) -> None:
        for _ in range(draws):
            self._rng.random()
        self.draws += draws

    def clone(self) -> "SessionRng":
        dup = SessionRng.__new__(SessionRng)
        dup.seed = self.seed
        dup.draws = self.draws
        dup._rng = random.Random()
        dup._rng.setstate(self._rng.getstate())
        return dup


class ProjectError(ValueError):
    """Malformed or version-incompatible project text."""


@dataclass
class TraceLog:
    """Unbounded run trace (the UI history window is the bounded view)."""

    rows: list[HistoryRow] = dc_field(default_factory=list)
    diagnostics: list[str] = dc_field(default_factory=list)

    def append(self, row: HistoryRow) -> None:
        if self.rows and row.step <= self.rows[-1].step:
            raise ValueError("trace steps must increase strictly")
        self.rows.append(row)

    def lines(self) -> list[str]:
        return [trace_row_text(r) for r in self.rows]


def trace_diff(a: TraceLog, b: TraceLog) -> Optional[tuple[int, str, str]]:
    """First divergence between two traces as (index, row_a, row_b) with
    '<absent>' standing in for a missing row; None when equal."""
    la, lb = a.lines(), b.lines()
    for i in range(max(len(la), len(lb))):
        ra = la[i] if i < len(la) else "<absent>"
        rb = lb[i] if i < len(lb) else "<absent>"
        if ra != rb:
            return i, ra, rb
    return None


# -- project text format ----------------------------------------------------

def _field_section(name: str, fld) -> list[str]:
    cfg = fld.cfg
    lines = [
        f"[{name}]",
        f"nx={fld.nx}",
        f"ny={fld.ny}",
        f"capacity={cfg.capacity}",
        f"bm={cfg.bm!r}",
        f"ba={cfg.ba!r}",
        f"tau={cfg.tau!r}",
        f"x_inh={cfg.x_inh!r}",
        f"novelty_threshold={cfg.novelty_threshold!r}",
        f"learn_mode={cfg.learn_mode}",
        f"select_source={cfg.select_source}",
    ]
    for i in fld.occupied_indices():
        slot = fld.slot(i)
        lines.append(
            f"slot={i} {render_vector(slot.gx)} → "
            f"{render_vector(slot.gy)} e={slot.e:.12g}"
        )
    return lines


def save_project(robot: Robot) -> str:
    w = robot.world
    lines = [
        "[project]",
        f"version={PROJECT_VERSION}",
        f"seed={robot.rng.seed}",
        f"draws={robot.rng.draws}",
        f"time={robot.v}",
        "[robot]",
        f"motor_width={robot.cfg.motor_width}",
        f"state_alphabet={render_vector(robot.cfg.state_alphabet)}",
        f"external_alphabet={render_vector(robot.cfg.external_alphabet)}",
        f"eye={'open' if robot.eye_open else 'closed'}",
        f"am_source={robot.am.cfg.select_source}",
        f"am_learn={robot.am.cfg.learn_mode}",
        f"as_learn={robot.as_field.cfg.learn_mode}",
        f"halted={int(robot.halted)}",
        f"starved={robot.starved if robot.starved else '-'}",
        "[world]",
        f"tape={w.literal()}",
        f"uttered={render(w.symbol_uttered)}",
        f"written={render(w.symbol_written)}",
        f"position_written={w.position_written}",
        f"boundary={int(w.boundary_clamped)}",
    ]
    lines.extend(_field_section("am", robot.am))
    lines.extend(_field_section("as", robot.as_field))
    return "\n".join(lines) + "\n"


def _parse_sections(text: str) -> list[tuple[str, list[tuple[int, str, str]]]]:
    sections: list[tuple[str, list[tuple[int, str, str]]]] = []
    current: Optional[list[tuple[int, str, str]]] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        if not line.strip():
            continue
        if line.startswith("[") and line.endswith("]"):
            current = []
            sections.append((line[1:-1], current))
            continue
        if current is None:
            raise ProjectError(f"line {lineno}: content before any section")
        key, sep, value = line.partition("=")
        if not sep:
            raise ProjectError(f"line {lineno}: expected key=value, got {line!r}")
        current.append((lineno, key, value))
    return sections


def _section_map(entries: list[tuple[int, str, str]]) -> dict[str, str]:
    return {key: value for _, key, value in entries if key != "slot"}


def _require(mapping: dict[str, str], key: str, section: str) -> str:
    if key not in mapping:
        raise ProjectError(f"section [{section}] missing field {key!r}")
    return mapping[key]


def _load_field(fld, entries: list[tuple[int, str, str]], section: str) -> None:
    for lineno, key, value in entries:
        if key != "slot":
            continue
        head, sep, e_part = value.rpartition(" e=")
        if not sep:
            raise ProjectError(f"line {lineno}: slot row without e value")
        idx_text, _, rest = head.partition(" ")
        gx_text, arrow, gy_text = rest.partition(" → ")
        if not arrow:
            raise ProjectError(f"line {lineno}: slot row without → separator")
        try:
            index = int(idx_text)
            e = float(e_part)
        except ValueError:
            raise ProjectError(f"line {lineno}: malformed slot row") from None
        fld.set_slot(index, parse_vector(gx_text), parse_vector(gy_text), e)


def load_project(text: str) -> Robot:
    sections = _parse_sections(text)
    by_name = {name: entries for name, entries in sections}
    for required in ("project", "robot", "world", "am", "as"):
        if required not in by_name:
            raise ProjectError(f"missing section [{required}]")

    proj = _section_map(by_name["project"])
    version = int(_require(proj, "version", "project"))
    if version != PROJECT_VERSION:
        raise ProjectError(f"unsupported project version {version}")

    rob_map = _section_map(by_name["robot"])
    world_map = _section_map(by_name["world"])

    def field_cfg(name: str) -> tuple[int, int, FieldConfig]:
        m = _section_map(by_name[name])
        cfg = FieldConfig(
            capacity=int(_require(m, "capacity", name)),
            bm=float(_require(m, "bm", name)),
            ba=float(_require(m, "ba", name)),
            tau=float(_require(m, "tau", name)),
            x_inh=float(_require(m, "x_inh", name)),
            novelty_threshold=float(_require(m, "novelty_threshold", name)),
            learn_mode=_require(m, "learn_mode", name),
            select_source=_require(m, "select_source", name),
        )
        return int(_require(m, "nx", name)), int(_require(m, "ny", name)), cfg

    _, _, am_cfg = field_cfg("am")
    _, _, as_cfg = field_cfg("as")
    cfg = RobotConfig(
        motor_width=int(_require(rob_map, "motor_width", "robot")),
        state_alphabet=parse_vector(_require(rob_map, "state_alphabet", "robot")),
        external_alphabet=parse_vector(_require(rob_map, "external_alphabet", "robot")),
        am=am_cfg,
        as_=as_cfg,
    )
    rng = SessionRng(int(_require(proj, "seed", "project")),
                     draws=int(_require(proj, "draws", "project")))
    robot = Robot(cfg, rng)
    robot.v = int(_require(proj, "time", "project"))
    robot.set_eye(_require(rob_map, "eye", "robot") == "open")
    robot.set_am_source(_require(rob_map, "am_source", "robot"))
    robot.halted = bool(int(_require(rob_map, "halted", "robot")))
    starved = _require(rob_map, "starved", "robot")
    robot.starved = None if starved == "-" else starved

    w = robot.world
    squares, i_scan = parse_tape_literal(_require(world_map, "tape", "world"), w.length)
    w.squares = squares
    if i_scan is not None:
        w.i_scan = i_scan
    uttered = _require(world_map, "uttered", "world")
    written = _require(world_map, "written", "world")
    w.symbol_uttered = BLANK if uttered == "·" else uttered
    w.symbol_written = BLANK if written == "·" else written
    w.position_written = int(_require(world_map, "position_written", "world"))
    w.boundary_clamped = bool(int(_require(world_map, "boundary", "world")))

    _load_field(robot.am, by_name["am"], "am")
    _load_field(robot.as_field, by_name["as"], "as")
    return robot


def replay(project_text: str, steps: int) -> TraceLog:
    """Deterministically re-execute a memory-mode snapshot."""
    robot = load_project(project_text)
    log = TraceLog()
    from tapemind.robot import StarvationHalt
    for _ in range(steps):
        if robot.halted:
            break
        try:
            log.append(robot.macro_step())
        except StarvationHalt as exc:
            log.diagnostics.append(str(exc))
            break
    return log
