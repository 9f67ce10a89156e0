"""Tape world: output reading, command application, the one-step delay
law, boundary clamping, literals, and the bounded history."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tapemind.symbols import BLANK
from tapemind.world import (
    History,
    HistoryRow,
    MotorCommand,
    Tape,
    parse_tape_literal,
)

B = BLANK


def tape_from(literal: str) -> Tape:
    t = Tape()
    t.load_literal(literal)
    return t


def test_read_scanned_symbol():
    t = tape_from("A()A@1")
    assert t.read_outputs().symbol_read_eye == "("


def test_fresh_tape_delayed_registers_blank():
    t = Tape()
    out = t.read_outputs()
    assert out.symbol_written == B and out.symbol_uttered == B


def test_apply_latches_delayed_registers():
    t = tape_from("AAAAAA@3")
    t.apply(MotorCommand(utter="1", move="R", write="X"))
    out = t.read_outputs()
    assert out.symbol_written == "X"
    assert out.symbol_uttered == "1"
    assert out.position_written == 3
    assert out.scanned_square_position == 4


def test_apply_overwrites_scanned_square():
    t = tape_from("A()A@2")
    t.apply(MotorCommand(utter="0", move="S", write="("))
    assert t.squares[2] == "("


def test_move_stay_keeps_position():
    t = tape_from("A()A@2")
    t.apply(MotorCommand(utter="0", move="S", write=")"))
    assert t.i_scan == 2


def test_blank_move_treated_as_stay():
    t = tape_from("A()A@2")
    t.apply(MotorCommand(utter="0", move=B, write=")"))
    assert t.i_scan == 2


def test_left_clamp_at_zero_sets_flag():
    t = tape_from("A()A@0")
    clamped = t.apply(MotorCommand(utter="0", move="L", write="A"))
    assert clamped and t.i_scan == 0 and t.boundary_clamped


def test_right_clamp_at_end():
    t = Tape()
    t.set_scan(t.length - 1)
    assert t.apply(MotorCommand(utter="0", move="R", write="A"))
    assert t.i_scan == t.length - 1


def test_illegal_move_symbol_rejected():
    t = Tape()
    with pytest.raises(ValueError):
        t.apply(MotorCommand(utter="0", move="Q", write="A"))


def test_writes_touch_only_the_scanned_square():
    t = tape_from("A(()())A@1")
    before = list(t.squares)
    t.apply(MotorCommand(utter="0", move="R", write="X"))
    diffs = [i for i in range(t.length) if t.squares[i] != before[i]]
    assert diffs == [1] and t.position_written == 1


@given(st.lists(st.tuples(st.sampled_from(["0", "1", "H"]),
                          st.sampled_from(["L", "S", "R"]),
                          st.sampled_from(["A", "(", ")", "X"])),
                min_size=1, max_size=30))
def test_one_step_delay_law(commands):
    t = tape_from("A(()())A@3")
    for utter, move, write in commands:
        t.apply(MotorCommand(utter=utter, move=move, write=write))
        out = t.read_outputs()
        assert (out.symbol_uttered, out.symbol_written) == (utter, write)


@given(st.lists(st.tuples(st.sampled_from(["0", "1"]),
                          st.sampled_from(["L", "S", "R"]),
                          st.sampled_from(["A", "(", ")"])),
                min_size=1, max_size=40))
def test_replaying_commands_reproduces_tape(commands):
    t1 = tape_from("A(()())A@3")
    t2 = tape_from("A(()())A@3")
    for utter, move, write in commands:
        t1.apply(MotorCommand(utter=utter, move=move, write=write))
    for utter, move, write in commands:
        t2.apply(MotorCommand(utter=utter, move=move, write=write))
    assert t1.squares == t2.squares and t1.i_scan == t2.i_scan


# -- editing -------------------------------------------------------------------

def test_set_scan_then_read():
    t = tape_from("A()A")
    t.set_scan(1)
    assert t.read_outputs().scanned_square_position == 1


def test_edit_square():
    t = Tape()
    t.edit_square(0, "A")
    assert t.squares[0] == "A"


def test_edit_square_bounds():
    t = Tape()
    with pytest.raises(IndexError):
        t.edit_square(t.length, "A")


def test_clear_blanks_everything():
    t = tape_from("A()A")
    t.clear()
    assert all(c == B for c in t.squares)


# -- literals -------------------------------------------------------------------

def test_literal_round_trip():
    t = tape_from("A(()())A@1")
    assert t.literal() == "A(()())A@1"


def test_literal_renders_blanks():
    t = Tape()
    t.edit_square(2, "A")
    assert t.literal(with_scan=False) == "··A"


def test_parse_literal_scan_suffix():
    squares, i_scan = parse_tape_literal("AB@5")
    assert squares[0] == "A" and squares[1] == "B" and i_scan == 5


def test_parse_literal_bad_suffix():
    with pytest.raises(ValueError):
        parse_tape_literal("AA@x")


def test_parse_literal_out_of_range_scan():
    with pytest.raises(ValueError):
        parse_tape_literal("AA@1000")


# -- history --------------------------------------------------------------------

def row(step: int) -> HistoryRow:
    return HistoryRow(step, ("A", "0"), ("0", "R", "A"), "A@0")


def test_history_single_push():
    h = History()
    h.push(row(1))
    assert len(h) == 1


def test_history_keeps_latest_199():
    h = History()
    for i in range(250):
        h.push(row(i))
    assert len(h) == 199
    steps = [r.step for r in h]
    assert steps[0] == 51 and steps[-1] == 249


def test_history_fifo_order():
    h = History()
    for i in range(10):
        h.push(row(i))
    assert [r.step for r in h] == list(range(10))


def test_history_clear():
    h = History()
    h.push(row(1))
    h.clear()
    assert len(h) == 0
