"""The external system: a finite tape, the scanned-square position, and
one-step-delayed proprioceptive registers.

Output reading and command application are split exactly as the robot
needs them: reading returns the scanned symbol plus what was uttered and
written on the *previous* step; applying a command latches those delayed
registers, writes through at the scanned square, and then moves. Moves
past either end clamp and raise a boundary flag instead of wrapping.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Deque, NamedTuple, Optional

from tapemind.symbols import BLANK, BLANK_GLYPH, Symbol, render

TAPE_LENGTH = 1000
HISTORY_ROWS = 199
MOVES = ("L", "S", "R")


@dataclass(frozen=True)
class MotorCommand:
    """One motor output: utter a state symbol, move, write, and optionally
    drive the eye ('1' close, '0' open, blank = no change)."""

    utter: Symbol = BLANK
    move: Symbol = BLANK          # blank is treated as S
    write: Symbol = BLANK
    eye: Optional[Symbol] = None  # None on three-channel robots

    def channels(self) -> tuple[Symbol, ...]:
        if self.eye is None:
            return (self.utter, self.move, self.write)
        return (self.utter, self.move, self.write, self.eye)


class WorldOutputs(NamedTuple):
    symbol_read_eye: Symbol
    scanned_square_position: int
    symbol_written: Symbol
    symbol_uttered: Symbol
    position_written: int


@dataclass
class HistoryRow:
    step: int
    command_input: tuple[Symbol, Symbol]      # (read symbol, uttered symbol)
    command_output: tuple[Symbol, ...]        # (utter, move, write[, eye])
    tape_literal: str
    flags: str = ""


class Tape:
    """Tape squares plus the delayed registers of the previous step."""

    def __init__(self, length: int = TAPE_LENGTH):
        if length <= 0:
            raise ValueError("tape length must be positive")
        self.length = length
        self.squares: list[Symbol] = [BLANK] * length
        self.i_scan = 0
        self.symbol_uttered: Symbol = BLANK
        self.symbol_written: Symbol = BLANK
        self.position_written = 0
        self.boundary_clamped = False   # sticky diagnostic

    def clone(self) -> "Tape":
        dup = Tape(self.length)
        dup.squares = list(self.squares)
        dup.i_scan = self.i_scan
        dup.symbol_uttered = self.symbol_uttered
        dup.symbol_written = self.symbol_written
        dup.position_written = self.position_written
        dup.boundary_clamped = self.boundary_clamped
        return dup

    def read_outputs(self) -> WorldOutputs:
        return WorldOutputs(
            symbol_read_eye=self.squares[self.i_scan],
            scanned_square_position=self.i_scan,
            symbol_written=self.symbol_written,
            symbol_uttered=self.symbol_uttered,
            position_written=self.position_written,
        )

    def apply(self, cmd: MotorCommand) -> bool:
        """Latch delayed registers, write through, move. Returns True when
        the move clamped at a tape boundary."""
        move = cmd.move if cmd.move != BLANK else "S"
        if move not in MOVES:
            raise ValueError(f"illegal move symbol {move!r}")
        self.symbol_uttered = cmd.utter
        self.symbol_written = cmd.write
        self.position_written = self.i_scan
        self.squares[self.i_scan] = cmd.write
        clamped = False
        if move == "L":
            if self.i_scan == 0:
                clamped = True
            else:
                self.i_scan -= 1
        elif move == "R":
            if self.i_scan == self.length - 1:
                clamped = True
            else:
                self.i_scan += 1
        if clamped:
            self.boundary_clamped = True
        return clamped

    # -- editing ----------------------------------------------------------

    def edit_square(self, index: int, symbol: Symbol) -> None:
        if not 0 <= index < self.length:
            raise IndexError(f"square {index} out of range")
        self.squares[index] = symbol

    def set_scan(self, index: int) -> None:
        if not 0 <= index < self.length:
            raise IndexError(f"square {index} out of range")
        self.i_scan = index

    def clear(self) -> None:
        self.squares = [BLANK] * self.length

    # -- literals ---------------------------------------------------------

    def literal(self, with_scan: bool = True) -> str:
        """Tape as a one-character-per-square string, trailing blanks
        trimmed, '·' for blank, optional '@k' carrying the scanned square."""
        last = self.length - 1
        while last >= 0 and self.squares[last] == BLANK:
            last -= 1
        body = "".join(render(c) for c in self.squares[: last + 1])
        return f"{body}@{self.i_scan}" if with_scan else body

    def load_literal(self, text: str) -> None:
        squares, i_scan = parse_tape_literal(text, self.length)
        self.squares = squares
        if i_scan is not None:
            self.i_scan = i_scan


def parse_tape_literal(text: str, length: int = TAPE_LENGTH) -> tuple[list[Symbol], Optional[int]]:
    """Parse e.g. "A(()())A@1" into squares plus the optional scan index."""
    body, sep, suffix = text.partition("@")
    i_scan: Optional[int] = None
    if sep:
        try:
            i_scan = int(suffix)
        except ValueError:
            raise ValueError(f"bad scan suffix in tape literal {text!r}") from None
        if not 0 <= i_scan < length:
            raise ValueError(f"scan index {i_scan} out of range")
    if len(body) > length:
        raise ValueError(f"tape literal longer than {length} squares")
    squares = [BLANK] * length
    for i, ch in enumerate(body):
        squares[i] = BLANK if ch == BLANK_GLYPH else ch
    return squares, i_scan


class History:
    """Bounded FIFO of past steps: at most HISTORY_ROWS previous rows."""

    def __init__(self, rows: int = HISTORY_ROWS):
        self.rows: Deque[HistoryRow] = deque(maxlen=rows)

    def push(self, row: HistoryRow) -> None:
        self.rows.append(row)

    def clear(self) -> None:
        self.rows.clear()

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)
