"""Robot composition: the sensory switch, the two working-memory
micro-cycles, the macro-step protocol, init, mode switches, starvation,
and the architecture-level invariants."""

import pytest

from tapemind.field import AssociativeField, FieldConfig
from tapemind.programs import (
    Scenario,
    build_checker,
    build_scan_then_check,
    load_program,
    make_robot,
    run_until_halt,
    train_as,
)
from tapemind.robot import StarvationHalt, ns1_select, position_token
from tapemind.session import SessionRng
from tapemind.symbols import BLANK
from tapemind.world import MotorCommand

B = BLANK


# -- sensory switch -----------------------------------------------------------

def test_ns1_eye_open_dominates():
    assert ns1_select(True, "(", ")") == "("


def test_ns1_eye_closed_uses_prediction():
    assert ns1_select(False, "(", "X") == "X"


def test_ns1_blank_prediction_passes_through():
    assert ns1_select(False, "(", B) == B


# -- write micro-cycle ----------------------------------------------------------

def test_write_echo_records_association_with_full_excitation():
    robot = make_robot(0)
    robot.set_am_source("teacher")
    robot.set_learn_modes(as_="new")
    robot.world.load_literal("AAAAAA@4")
    robot.init_step(utter="0", write=B)
    robot.macro_step(MotorCommand(utter="0", move="S", write="X"))
    robot.macro_step(MotorCommand(utter="0", move="S", write="X"))
    slots = [robot.as_field.slot(i) for i in robot.as_field.occupied_indices()]
    assert len(slots) == 1
    assert slots[0].gx == (position_token(4), "X")
    assert slots[0].gy == ("X",)
    assert slots[0].e == 1.0


def test_first_step_skips_write_microcycle():
    robot = make_robot(0)
    robot.set_am_source("teacher")
    robot.set_learn_modes(as_="new")
    robot.world.load_literal("AAAA@1")
    robot.init_step(utter="0", write=B)
    robot.macro_step(MotorCommand(utter="0", move="S", write="A"))
    # only one step ran: the write echo of that step has not landed yet
    assert robot.as_field.occupied_count() == 0


def test_rewrite_refreshes_without_new_slot():
    robot = make_robot(0)
    robot.set_am_source("teacher")
    robot.set_learn_modes(as_="new")
    robot.world.load_literal("AAAA@2")
    robot.init_step(utter="0", write=B)
    for _ in range(4):
        robot.macro_step(MotorCommand(utter="0", move="S", write="A"))
    assert robot.as_field.occupied_count() == 1
    index = robot.as_field.occupied_indices()[0]
    assert robot.as_field.slot(index).e == 1.0


# -- read micro-cycle -------------------------------------------------------------

def as_probe_field() -> AssociativeField:
    return AssociativeField(2, 1, FieldConfig(capacity=16, bm=0.5, tau=50.0,
                                              learn_mode="none",
                                              select_source="memory"))


def test_read_probe_prefers_freshest_excitation():
    f = as_probe_field()
    f.set_slot(0, (position_token(2), "("), ("(",), e=0.90)
    f.set_slot(1, (position_token(2), "X"), ("X",), e=0.95)
    y = f.cycle((position_token(2), B), rng=SessionRng(0), allow_learning=False)
    assert y == ("X",)


def test_read_probe_single_candidate():
    f = as_probe_field()
    f.set_slot(0, (position_token(5), ")"), (")",), e=0.2)
    y = f.cycle((position_token(5), B), rng=SessionRng(0), allow_learning=False)
    assert y == (")",)


def test_read_probe_unknown_square_returns_blank():
    f = as_probe_field()
    f.set_slot(0, (position_token(5), ")"), (")",), e=0.2)
    y = f.cycle((position_token(7), B), rng=SessionRng(0), allow_learning=False)
    assert y == (B,)


def test_mental_probe_starves_at_unknown_square():
    robot = make_robot(0)
    load_program(robot.am, build_checker())
    robot.set_learn_modes(am="none")
    robot.world.load_literal("A()A@1")
    robot.set_am_source("teacher")
    robot.init_step(utter="0", write=B)
    robot.set_am_source("memory")
    robot.set_eye(False)
    with pytest.raises(StarvationHalt):
        robot.macro_step()
    assert "mental image" in robot.starved


# -- macro step --------------------------------------------------------------------

def test_checker_run_halts_with_verdict(checker_base):
    robot = checker_base.clone()
    scenario = Scenario(0, robot, "", "0", "A(()())A@1")
    outcome = scenario.run()
    assert outcome.kind == "halted"
    assert outcome.verdict == "T"
    assert "T" in outcome.final_tape


def test_teacher_mode_output_ignores_ltm(checker_base):
    robot = checker_base.clone()
    robot.set_am_source("teacher")
    robot.world.load_literal("A(A@1")
    robot.init_step(utter="0", write=B)
    row = robot.macro_step(MotorCommand(utter="9", move="L", write="F"))
    assert row.command_output == ("9", "L", "F")


def test_memory_mode_empty_am_starves_at_step_one():
    robot = make_robot(0)
    robot.world.load_literal("A()A@1")
    robot.set_am_source("teacher")
    robot.init_step(utter="0", write=B)
    robot.set_am_source("memory")
    outcome = run_until_halt(robot, 10)
    assert outcome.kind == "starved"
    assert outcome.steps == 0
    assert "step 1" in outcome.diagnostic


def test_time_advances_once_per_step(checker_base):
    robot = checker_base.clone()
    robot.world.load_literal("A()A@1")
    robot.set_am_source("teacher")
    robot.init_step(utter="0", write=B)
    robot.set_am_source("memory")
    assert robot.v == 0
    robot.macro_step()
    assert robot.v == 1


# -- init ---------------------------------------------------------------------------

def test_init_sets_uttered_without_time_or_tape_change():
    robot = make_robot(0)
    robot.world.load_literal("A()A@1")
    robot.set_am_source("teacher")
    before_tape = robot.world.literal()
    robot.init_step(utter="0")
    assert robot.world.symbol_uttered == "0"
    assert robot.v == 0
    assert robot.world.literal() == before_tape


def test_init_idempotent():
    robot = make_robot(0)
    robot.set_am_source("teacher")
    robot.init_step(utter="3", write="X")
    robot.init_step(utter="3", write="X")
    assert robot.world.symbol_uttered == "3"
    assert robot.world.symbol_written == "X"


def test_init_blank_entries_blank_registers():
    robot = make_robot(0)
    robot.set_am_source("teacher")
    robot.init_step(utter="8", write="X")
    robot.init_step(utter=B, write=B)
    assert robot.world.symbol_uttered == B
    assert robot.world.symbol_written == B


def test_init_requires_teacher_mode():
    robot = make_robot(0)
    robot.set_am_source("memory")
    with pytest.raises(ValueError):
        robot.init_step(utter="0")


def test_init_does_not_touch_excitations():
    robot = make_robot(0)
    robot.as_field.set_slot(0, ("1", "A"), ("A",), e=0.5)
    robot.set_am_source("teacher")
    robot.init_step(utter="0")
    assert robot.as_field.slot(0).e == 0.5


# -- mode switches ---------------------------------------------------------------

def test_as_memory_source_is_the_closed_eye():
    robot = make_robot(0)
    robot.set_as_source("memory")
    assert not robot.eye_open
    robot.set_as_source("tape")
    assert robot.eye_open


def test_learn_none_freezes_ltm(checker_base):
    robot = checker_base.clone()
    before = robot.am.occupied_count()
    Scenario(0, robot, "", "0", "A()A@1").run()
    assert robot.am.occupied_count() == before


def test_eye_toggle_mid_run_continues(mental_base):
    robot = mental_base.clone()
    scenario = Scenario(0, robot, "", "3", "A()A@1")
    scenario.initialize()
    # run through the scan phase (which loads working memory), two checker
    # steps with the eye open, then continue mentally
    while robot.world.symbol_uttered != "0":
        robot.macro_step()
    robot.macro_step()
    robot.macro_step()
    robot.set_eye(False)
    outcome = run_until_halt(robot, 500)
    assert outcome.kind == "halted" and outcome.verdict == "T"


# -- architecture invariants --------------------------------------------------------

def test_proprioceptive_delay_on_full_run(checker_base):
    robot = checker_base.clone()
    scenario = Scenario(0, robot, "", "0", "A(())A@1")
    scenario.initialize()
    uttered_before = robot.world.symbol_uttered
    while not robot.halted:
        row = robot.macro_step()
        assert row.command_input[1] == uttered_before
        uttered_before = row.command_output[0]


def test_tape_updates_identically_with_eye_closed(mental_base):
    """The physical tape is written the same way whether or not the robot
    sees it."""
    open_robot = mental_base.clone()
    open_out = Scenario(0, open_robot, "", "3", "A(())A@1").run()
    mental_robot = mental_base.clone()
    mental_out = Scenario(0, mental_robot, "", "3", "A(())A@1",
                          close_eye_on_handoff=True).run()
    assert open_out.final_tape == mental_out.final_tape
    assert open_out.verdict == mental_out.verdict


def test_working_memory_read_returns_last_write(mental_base):
    """After the write echo for (square, symbol), probes at that square
    keep returning the symbol until another slot there is excited."""
    robot = mental_base.clone()
    robot.set_am_source("teacher")
    robot.set_learn_modes(as_="none")
    robot.world.load_literal("AAAAAA@3")
    robot.init_step(utter="0", write=B)
    robot.macro_step(MotorCommand(utter="0", move="S", write="X"))
    robot.macro_step(MotorCommand(utter="0", move="S", write="X"))  # echo lands
    robot.set_eye(False)  # probe the mental image, not the tape
    f = robot.as_field
    for _ in range(10):
        y = f.cycle((position_token(3), B), rng=robot.rng, allow_learning=False)
        assert y == ("X",)


def test_learn_all_matches_learn_none_on_trained_memory(mental_base):
    """With a fully trained AS, recording duplicates changes nothing about
    the emitted read symbols."""
    def run(learn_mode: str) -> list:
        robot = mental_base.clone()
        robot.set_learn_modes(as_=learn_mode)
        reads = []
        scenario = Scenario(0, robot, "", "3", "A(()())A@1",
                            close_eye_on_handoff=True)
        scenario.initialize()
        hook_state = {"closed": False}
        while not robot.halted:
            if not hook_state["closed"] and robot.world.symbol_uttered == "0":
                robot.set_eye(False)
                hook_state["closed"] = True
            row = robot.macro_step()
            reads.append(row.command_input[0])
        return reads

    assert run("none") == run("all")
