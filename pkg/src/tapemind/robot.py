"""The complete cognitive system: motor field AM, sensory field AS, tape
world, and the sensory switch that feeds AM either the eye or AS's
prediction.

One macro-step:

1. read the world outputs (scanned symbol plus delayed registers),
2. AS write micro-cycle -- confirm/record the previous step's write as a
   (written-position, written-symbol) association (skipped while nothing
   has been written yet),
3. AS read micro-cycle -- blank-data probe at the current square; the
   freshest association there wins, which is the working-memory read,
4. the sensory switch picks the eye (open) or the AS prediction (closed),
5. AM cycle with input (selected read symbol, uttered symbol); in teacher
   mode the output is forced by the teacher entry,
6. the optional fourth motor channel drives the eye,
7. the world applies the motor command (the physical tape is written and
   the head moves whether or not the eye is open),
8. the step is appended to the bounded history and time advances.

The AS read micro-cycle never records (it is a probe); associations enter
AS exclusively through the write echo. Runs starve -- halt with a
diagnostic -- when the robot is driving itself from memory and either the
mental image at the scanned square is unavailable or the motor field
retrieves nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from tapemind.field import AssociativeField, FieldConfig
from tapemind.symbols import BLANK, Symbol, is_null, render
from tapemind.world import History, HistoryRow, MotorCommand, Tape, WorldOutputs

HALT_SYMBOL = "H"

DEFAULT_STATE_ALPHABET = ("0", "1", "2", "3", "4", "8", "9", HALT_SYMBOL)
DEFAULT_EXTERNAL_ALPHABET = ("A", "(", ")", "X", "T", "F")


class StarvationHalt(RuntimeError):
    """Raised when a memory-driven step cannot be completed: the mental
    image or the motor retrieval came back blank."""


def position_token(index: int) -> Symbol:
    """Tape addresses enter AS as atomic symbols compared for equality."""
    return str(index)


def ns1_select(eye_open: bool, symbol_read_eye: Symbol, as_prediction: Symbol) -> Symbol:
    """The sensory switch: the eye when open, the AS prediction otherwise."""
    return symbol_read_eye if eye_open else as_prediction


@dataclass
class RobotConfig:
    motor_width: int = 3                      # 4 adds the eye-control channel
    state_alphabet: tuple[Symbol, ...] = DEFAULT_STATE_ALPHABET
    external_alphabet: tuple[Symbol, ...] = DEFAULT_EXTERNAL_ALPHABET
    am: FieldConfig = dc_field(default_factory=lambda: FieldConfig(
        bm=0.0, ba=0.0, learn_mode="none", select_source="memory"))
    as_: FieldConfig = dc_field(default_factory=lambda: FieldConfig(
        bm=0.5, ba=0.0, tau=50.0, learn_mode="none", select_source="teacher"))

    def validate(self) -> None:
        if self.motor_width not in (3, 4):
            raise ValueError("motor_width must be 3 or 4")
        if self.am.bm != 0.0 or self.am.ba != 0.0:
            raise ValueError("the motor field runs without excitation bias")


class Robot:
    """A single sequential robot session."""

    def __init__(self, cfg: Optional[RobotConfig] = None, rng=None):
        self.cfg = cfg if cfg is not None else RobotConfig()
        self.cfg.validate()
        if rng is None:
            from tapemind.session import SessionRng
            rng = SessionRng(0)
        self.rng = rng
        self.am = AssociativeField(2, self.cfg.motor_width, self.cfg.am, name="am")
        self.as_field = AssociativeField(2, 1, self.cfg.as_, name="as")
        self.world = Tape()
        self.history = History()
        self.eye_open = True
        self.v = 0
        self.halted = False
        self.starved: Optional[str] = None
        self._sync_as_source()

    def clone(self) -> "Robot":
        """Deep copy sharing nothing, including the generator state."""
        dup = Robot.__new__(Robot)
        dup.cfg = self.cfg
        dup.rng = self.rng.clone()
        dup.am = self.am.clone()
        dup.as_field = self.as_field.clone()
        dup.world = self.world.clone()
        dup.history = History()
        dup.history.rows.extend(self.history.rows)
        dup.eye_open = self.eye_open
        dup.v = self.v
        dup.halted = self.halted
        dup.starved = self.starved
        return dup

    # -- mode switches ----------------------------------------------------

    def _sync_as_source(self) -> None:
        self.as_field.cfg.select_source = "teacher" if self.eye_open else "memory"

    def set_eye(self, open_: bool) -> None:
        self.eye_open = open_
        self._sync_as_source()

    def set_as_source(self, source: str) -> None:
        """'tape' is the open eye; 'memory' is the closed eye."""
        if source not in ("tape", "memory"):
            raise ValueError("AS source must be 'tape' or 'memory'")
        self.set_eye(source == "tape")

    def as_source(self) -> str:
        return "tape" if self.eye_open else "memory"

    def set_am_source(self, source: str) -> None:
        if source not in ("teacher", "memory"):
            raise ValueError("AM source must be 'teacher' or 'memory'")
        self.am.cfg.select_source = source

    def set_learn_modes(self, am: Optional[str] = None, as_: Optional[str] = None) -> None:
        if am is not None:
            if am not in ("all", "new", "none"):
                raise ValueError(f"bad learn mode {am!r}")
            self.am.cfg.learn_mode = am
        if as_ is not None:
            if as_ not in ("all", "new", "none"):
                raise ValueError(f"bad learn mode {as_!r}")
            self.as_field.cfg.learn_mode = as_

    # -- micro-cycles ------------------------------------------------------

    def as_write_microcycle(self, outputs: WorldOutputs) -> None:
        """Confirm or record the previous step's write as an association
        (written position, written symbol) -> written symbol. Skipped while
        no write has happened yet."""
        if outputs.symbol_written == BLANK:
            return
        x = (position_token(outputs.position_written), outputs.symbol_written)
        yt = (outputs.symbol_written,) if self.eye_open else None
        self.as_field.cycle(x, yt, rng=self.rng)

    def as_read_microcycle(self, outputs: WorldOutputs) -> Symbol:
        """Blank-data probe at the current square. With the eye open the
        emitted symbol is the eye's (the tape teaches AS); with it closed
        the retrieval is the mental image. Never records."""
        x = (position_token(outputs.scanned_square_position), BLANK)
        yt = (outputs.symbol_read_eye,) if self.eye_open else None
        y = self.as_field.cycle(x, yt, rng=self.rng, allow_learning=False)
        return y[0]

    # -- stepping ----------------------------------------------------------

    def macro_step(self, teacher_motor: Optional[MotorCommand] = None) -> HistoryRow:
        """One complete robot step; returns the history row."""
        am_teacher = self.am.cfg.select_source == "teacher"
        if am_teacher and teacher_motor is None:
            raise ValueError("teacher mode requires a teacher motor command")
        if not am_teacher and teacher_motor is not None:
            raise ValueError("teacher command supplied while AM reads from memory")

        outputs = self.world.read_outputs()
        self.as_write_microcycle(outputs)
        prediction = self.as_read_microcycle(outputs)

        if not self.eye_open and not am_teacher and prediction == BLANK:
            self.starved = (f"no mental image for square "
                            f"{outputs.scanned_square_position} at step {self.v + 1}")
            raise StarvationHalt(self.starved)

        selected = ns1_select(self.eye_open, outputs.symbol_read_eye, prediction)
        x = (selected, outputs.symbol_uttered)
        yt = teacher_motor.channels() if am_teacher else None
        y = self.am.cycle(x, yt, rng=self.rng)

        if not am_teacher and is_null(y):
            self.starved = (f"no motor command for "
                            f"(read={render(selected)}, uttered="
                            f"{render(outputs.symbol_uttered)}) at step {self.v + 1}")
            raise StarvationHalt(self.starved)

        eye_ctl = y[3] if self.cfg.motor_width == 4 else None
        if eye_ctl == "1":
            self.set_eye(False)
        elif eye_ctl == "0":
            self.set_eye(True)

        command = MotorCommand(utter=y[0], move=y[1], write=y[2], eye=eye_ctl)
        clamped = self.world.apply(command)
        if command.utter == HALT_SYMBOL:
            self.halted = True

        self.v += 1
        flags = []
        if not self.eye_open:
            flags.append("eye-closed")
        if clamped:
            flags.append("boundary")
        if self.halted:
            flags.append("halted")
        row = HistoryRow(
            step=self.v,
            command_input=x,
            command_output=y,
            tape_literal=self.world.literal(),
            flags=",".join(flags),
        )
        self.history.push(row)
        return row

    def init_step(self, utter: Optional[Symbol] = None,
                  write: Optional[Symbol] = None) -> None:
        """Latch the delayed registers without touching tape, time, memory
        or excitations. Only available while AM is in teacher mode."""
        if self.am.cfg.select_source != "teacher":
            raise ValueError("init requires AM in teacher mode")
        if utter is not None:
            self.world.symbol_uttered = utter
        if write is not None:
            self.world.symbol_written = write
        self.halted = self.world.symbol_uttered == HALT_SYMBOL
        self.starved = None


def trace_row_text(row: HistoryRow) -> str:
    """Stable line format: step ⟂ read,uttered → utter,move,write[,eye] ⟂
    tape-literal ⟂ flags."""
    inp = ",".join(render(c) for c in row.command_input)
    out = ",".join(render(c) for c in row.command_output)
    flags = row.flags if row.flags else "-"
    return f"{row.step} ⟂ {inp} → {out} ⟂ {row.tape_literal} ⟂ {flags}"
