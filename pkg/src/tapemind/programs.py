"""Turing-machine command tables, the teaching and training curricula,
the examination harness, and the independent oracles they are checked
against.

The parentheses checker here is a three-state crossing machine arranged
so that the three canonical teaching tapes "A(A", "A)A" and "A()A"
exercise every one of its twelve commands: a found ')' is crossed out in
place (the left scan then re-reads the X it wrote), and verdicts are
committed by writing T or F and re-reading it in a dedicated halting
command. Its verdicts equal the stack-counter oracle on every
delimiter-wrapped expression.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

from tapemind.field import AssociativeField
from tapemind.robot import (
    DEFAULT_EXTERNAL_ALPHABET,
    HALT_SYMBOL,
    Robot,
    RobotConfig,
    StarvationHalt,
    position_token,
)
from tapemind.session import SessionRng, TraceLog
from tapemind.symbols import BLANK, Symbol, is_null, unrender
from tapemind.world import MOVES, MotorCommand


class TeachingError(RuntimeError):
    """The teacher program has no command for an encountered situation."""


@dataclass(frozen=True)
class TmCommand:
    in_read: Symbol
    in_state: Symbol
    out_state: Symbol
    out_move: Symbol
    out_write: Symbol
    out_eye: Symbol = BLANK

    def motor(self, width: int) -> MotorCommand:
        eye = self.out_eye if width == 4 else None
        return MotorCommand(utter=self.out_state, move=self.out_move,
                            write=self.out_write, eye=eye)


class TmProgram:
    """A deterministic command table keyed by (read symbol, state)."""

    def __init__(self, commands: Iterable[TmCommand], start_state: Symbol, name: str = ""):
        self.commands = list(commands)
        self.start_state = start_state
        self.name = name
        self.table: dict[tuple[Symbol, Symbol], TmCommand] = {}
        for cmd in self.commands:
            key = (cmd.in_read, cmd.in_state)
            if key in self.table:
                raise ValueError(f"duplicate command for {key}")
            if cmd.in_state == HALT_SYMBOL:
                raise ValueError("the halt state has no outgoing commands")
            if cmd.out_move not in MOVES:
                raise ValueError(f"bad move {cmd.out_move!r}")
            self.table[key] = cmd

    def lookup(self, read: Symbol, state: Symbol) -> TmCommand:
        try:
            return self.table[(read, state)]
        except KeyError:
            raise TeachingError(
                f"{self.name or 'program'}: no command for "
                f"(read={read!r}, state={state!r})") from None

    def __len__(self) -> int:
        return len(self.commands)


# -- oracles ------------------------------------------------------------------

def balance_oracle(expr: str) -> Symbol:
    """'T' iff the parentheses string balances: the running count never
    goes negative and ends at zero."""
    depth = 0
    for ch in expr:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                return "F"
        else:
            raise ValueError(f"oracle expression may contain only parentheses, got {ch!r}")
    return "T" if depth == 0 else "F"


def all_expressions(max_len: int) -> list[str]:
    """Every string over {'(',')'} of length 0..max_len (511 for max_len=8)."""
    out = [""]
    frontier = [""]
    for _ in range(max_len):
        frontier = [e + c for e in frontier for c in "()"]
        out.extend(frontier)
    return out


# -- program builders ---------------------------------------------------------

def build_checker(eye_overrides: Optional[dict[tuple[Symbol, Symbol], Symbol]] = None) -> TmProgram:
    """The 12-command parentheses checker: state '0' scans right for ')',
    crossing it in place; state '1' scans left for the matching '(' and
    commits verdicts; state '2' is the final full-tape check. Optional
    eye-channel overrides attach a fourth output to chosen commands."""
    rows = [
        ("(", "0", "0", "R", "("),
        (")", "0", "1", "S", "X"),
        ("X", "0", "0", "R", "X"),
        ("A", "0", "2", "L", "A"),
        ("(", "1", "0", "R", "X"),
        ("X", "1", "1", "L", "X"),
        ("A", "1", "1", "S", "F"),
        ("F", "1", HALT_SYMBOL, "S", "F"),
        ("X", "2", "2", "L", "X"),
        ("(", "2", "1", "S", "F"),
        ("A", "2", "2", "S", "T"),
        ("T", "2", HALT_SYMBOL, "S", "T"),
    ]
    overrides = eye_overrides or {}
    cmds = [TmCommand(r, s, ns, mv, wr, overrides.get((r, s), BLANK))
            for r, s, ns, mv, wr in rows]
    return TmProgram(cmds, start_state="0", name="checker")


def build_rewriting_scanner(alphabet: Sequence[Symbol] = DEFAULT_EXTERNAL_ALPHABET) -> TmProgram:
    """Two-state scanner: state '8' rewrites the read symbol and stays,
    state '9' rewrites it and moves right. One command pair per symbol."""
    cmds = []
    for c in alphabet:
        cmds.append(TmCommand(c, "8", "9", "S", c))
        cmds.append(TmCommand(c, "9", "8", "R", c))
    return TmProgram(cmds, start_state="8", name="rewriting-scanner")


def build_scan_then_check(
    alphabet: Sequence[Symbol] = DEFAULT_EXTERNAL_ALPHABET,
    handoff_eye: Symbol = BLANK,
) -> TmProgram:
    """Scanner that sweeps right to the 'A' boundary rewriting every
    square, sweeps back to the left boundary, then positions on square 1
    and utters '0', handing control to the checker (which must be loaded
    alongside). ``handoff_eye='1'`` makes the handoff command close the eye."""
    cmds = []
    for c in alphabet:
        if c == "A":
            cmds.append(TmCommand("A", "3", "4", "L", "A"))
            cmds.append(TmCommand("A", "4", "0", "R", "A", handoff_eye))
        else:
            cmds.append(TmCommand(c, "3", "3", "R", c))
            cmds.append(TmCommand(c, "4", "4", "L", c))
    return TmProgram(cmds, start_state="3", name="scan-then-check")


def build_example5_checker() -> TmProgram:
    """Checker variant whose eye channel toggles between world and mental
    imagery several times per run: opening when a ')' is spotted, closing
    again once its '(' is crossed."""
    return build_checker(eye_overrides={
        (")", "0"): "0",   # open while handling the pair
        ("(", "1"): "1",   # close again on the return scan
    })


# -- loading and driving -------------------------------------------------------

def load_program(am: AssociativeField, program: TmProgram, base_slot: int = 0) -> None:
    """Store each command as slot gx=(read, state), gy=(state', move,
    write[, eye]) starting at base_slot."""
    width = am.ny
    for offset, cmd in enumerate(program.commands):
        gy = cmd.motor(width).channels()
        am.set_slot(base_slot + offset, (cmd.in_read, cmd.in_state), gy)


@dataclass
class RunOutcome:
    kind: str                      # halted | starved | step-limit | boundary
    steps: int
    verdict: Symbol                # write symbol of the halting command, else blank
    final_tape: str
    trace: TraceLog
    diagnostic: str = ""

    @property
    def ok(self) -> bool:
        return self.kind == "halted"


def run_until_halt(
    robot: Robot,
    max_steps: int,
    teacher: Optional[TmProgram] = None,
    on_step: Optional[Callable[[Robot, "object"], None]] = None,
) -> RunOutcome:
    """Repeat macro-steps until the robot halts, a diagnostic fires, or the
    step budget runs out. With a teacher program, each step's motor command
    is looked up from the (visible read symbol, uttered symbol) pair."""
    trace = TraceLog()

    def outcome(kind: str, diagnostic: str = "") -> RunOutcome:
        verdict = BLANK
        if kind == "halted" and trace.rows:
            verdict = trace.rows[-1].command_output[2]
        if diagnostic:
            trace.diagnostics.append(diagnostic)
        return RunOutcome(kind, len(trace.rows), verdict, robot.world.literal(),
                          trace, diagnostic)

    for _ in range(max_steps):
        if robot.halted:
            break
        teacher_motor = None
        if robot.am.cfg.select_source == "teacher":
            if teacher is None:
                raise ValueError("AM is in teacher mode but no teacher program given")
            out = robot.world.read_outputs()
            cmd = teacher.lookup(out.symbol_read_eye, out.symbol_uttered)
            teacher_motor = cmd.motor(robot.cfg.motor_width)
        try:
            row = robot.macro_step(teacher_motor)
        except StarvationHalt as exc:
            return outcome("starved", str(exc))
        trace.append(row)
        if "boundary" in row.flags:
            return outcome("boundary", f"boundary clamp at step {row.step}")
        if on_step is not None:
            on_step(robot, row)
        if robot.halted:
            return outcome("halted")
    if robot.halted:
        return outcome("halted")
    return outcome("step-limit", f"no halt within {max_steps} steps")


# -- curricula ------------------------------------------------------------------

@dataclass(frozen=True)
class CurriculumItem:
    tape_literal: str
    start_state: Symbol
    max_steps: int = 200
    modes: tuple[tuple[str, str], ...] = ()


@dataclass
class Curriculum:
    items: list[CurriculumItem]

    def __post_init__(self) -> None:
        if not self.items:
            raise ValueError("a curriculum cannot be empty")


#: The three demonstrations that teach all twelve checker commands.
CHECKER_CURRICULUM = Curriculum([
    CurriculumItem("A(A@1", "0"),
    CurriculumItem("A)A@1", "0"),
    CurriculumItem("A()A@1", "0"),
])


def parse_curriculum_line(line: str) -> CurriculumItem:
    """One run per line: tape-literal | start-state | max-steps | modes."""
    parts = [p.strip() for p in line.split("|")]
    if len(parts) != 4:
        raise ValueError(f"curriculum line needs 4 fields, got {len(parts)}: {line!r}")
    tape, state, steps, modes = parts
    mode_pairs: list[tuple[str, str]] = []
    if modes and modes != "-":
        for token in modes.split(","):
            key, sep, value = token.partition("=")
            if not sep:
                raise ValueError(f"bad mode token {token!r}")
            mode_pairs.append((key.strip(), value.strip()))
    return CurriculumItem(tape, unrender(state), int(steps), tuple(mode_pairs))


def format_curriculum_line(item: CurriculumItem) -> str:
    modes = ",".join(f"{k}={v}" for k, v in item.modes) or "-"
    return f"{item.tape_literal} | {item.start_state} | {item.max_steps} | {modes}"


def parse_program_line(line: str) -> TmCommand:
    """One command per line: read,state -> state,move,write[,eye]."""
    left, sep, right = line.partition("->")
    if not sep:
        raise ValueError(f"program line needs '->': {line!r}")
    ins = [unrender(t.strip()) for t in left.strip().split(",")]
    outs = [unrender(t.strip()) for t in right.strip().split(",")]
    if len(ins) != 2 or len(outs) not in (3, 4):
        raise ValueError(f"program line shape wrong: {line!r}")
    eye = outs[3] if len(outs) == 4 else BLANK
    return TmCommand(ins[0], ins[1], outs[0], outs[1], outs[2], eye)


def format_program_line(cmd: TmCommand) -> str:
    from tapemind.symbols import render
    outs = [cmd.out_state, cmd.out_move, cmd.out_write]
    if cmd.out_eye != BLANK:
        outs.append(cmd.out_eye)
    return (f"{render(cmd.in_read)},{render(cmd.in_state)} -> "
            + ",".join(render(c) for c in outs))


# -- teaching and training -------------------------------------------------------

def _init_via_teacher(robot: Robot, utter: Symbol, write: Optional[Symbol] = None) -> None:
    """The init dance: flip AM to teacher, latch the registers, flip back."""
    previous = robot.am.cfg.select_source
    robot.set_am_source("teacher")
    robot.init_step(utter=utter, write=write)
    robot.set_am_source(previous)


def teach_am(robot: Robot, teacher: TmProgram, curriculum: Curriculum) -> int:
    """Drive the robot through each demonstration with the teacher forcing
    the motor outputs; returns how many commands AM recorded."""
    robot.set_am_source("teacher")
    robot.set_learn_modes(am="new")
    before = robot.am.occupied_count()
    for item in curriculum.items:
        robot.world.load_literal(item.tape_literal)
        robot.init_step(utter=item.start_state)
        outcome = run_until_halt(robot, item.max_steps, teacher=teacher)
        if outcome.kind != "halted":
            raise TeachingError(
                f"teaching run {item.tape_literal!r} ended {outcome.kind}: "
                f"{outcome.diagnostic}")
    return robot.am.occupied_count() - before


def train_as(robot: Robot, squares: int = 10,
             alphabet: Sequence[Symbol] = DEFAULT_EXTERNAL_ALPHABET,
             learn_mode: str = "new") -> int:
    """Teach AS to simulate the tape: for each external symbol, fill the
    first ``squares`` squares with it and drive the rewriting scanner
    across them with the teacher. Returns how many slots AS recorded.

    Each pass runs one extra settling step (a stay-in-place no-op command)
    because the final square's write echo arrives one step delayed.
    """
    scanner = build_rewriting_scanner(alphabet)
    flush = MotorCommand(utter="8", move="S", write=BLANK)
    if robot.cfg.motor_width == 4:
        flush = MotorCommand(utter="8", move="S", write=BLANK, eye=BLANK)
    robot.set_eye(True)
    robot.set_am_source("teacher")
    robot.set_learn_modes(am="none", as_=learn_mode)
    before = robot.as_field.occupied_count()
    for symbol in alphabet:
        robot.world.clear()
        for q in range(squares):
            robot.world.edit_square(q, symbol)
        robot.world.set_scan(0)
        robot.init_step(utter=scanner.start_state, write=BLANK)
        for _ in range(2 * squares):
            out = robot.world.read_outputs()
            cmd = scanner.lookup(out.symbol_read_eye, out.symbol_uttered)
            robot.macro_step(cmd.motor(robot.cfg.motor_width))
        robot.macro_step(flush)
    return robot.as_field.occupied_count() - before


# -- prepared scenarios -----------------------------------------------------------

def make_robot(seed: int = 0, motor_width: int = 3) -> Robot:
    cfg = RobotConfig(motor_width=motor_width)
    return Robot(cfg, SessionRng(seed))


def trained_robot(seed: int = 0, motor_width: int = 3) -> Robot:
    """A robot whose AS has the full working-memory training (squares 0-9,
    full external alphabet)."""
    robot = make_robot(seed, motor_width)
    train_as(robot)
    robot.set_learn_modes(as_="none")
    return robot


@dataclass
class Scenario:
    """A prepared example: a robot plus the run plan that drives it."""

    number: int
    robot: Robot
    description: str
    start_state: Symbol
    tape_literal: str
    max_steps: int = 2000
    close_eye_on_handoff: bool = False
    training_passes: int = 0           # example 3 runs the full training first

    def initialize(self) -> None:
        """Fresh run: load the tape, latch the start state, zero the clock."""
        self.robot.world.load_literal(self.tape_literal)
        self.robot.world.boundary_clamped = False
        self.robot.v = 0
        self.robot.history.clear()
        _init_via_teacher(self.robot, self.start_state, write=BLANK)
        self.robot.set_am_source("memory")

    def run(self) -> RunOutcome:
        self.initialize()
        hook = None
        if self.close_eye_on_handoff:
            def hook(robot: Robot, row) -> None:
                if robot.eye_open and robot.world.symbol_uttered == "0":
                    robot.set_eye(False)
        return run_until_halt(self.robot, self.max_steps, on_step=hook)


DEFAULT_EXPRESSION = "(()())"


def example_scenario(number: int, seed: int = 0,
                     expr: str = DEFAULT_EXPRESSION) -> Scenario:
    """The five canonical demonstrations.

    1 -- checker on the real tape, eye open throughout;
    2 -- scan phase with the eye open, then mental checking (the eye is
         closed by hand at the control handoff);
    3 -- working-memory training with the rewriting scanner, then a mental
         exam over the freshly trained AS;
    4 -- the program itself closes the eye at the handoff via the fourth
         motor channel;
    5 -- the program toggles between world and imagery several times.
    """
    tape = f"A{expr}A@1"
    if number == 1:
        robot = trained_robot(seed)
        load_program(robot.am, build_checker(), base_slot=0)
        robot.set_learn_modes(am="none")
        return Scenario(1, robot, "checker on the external tape", "0", tape)
    if number == 2:
        robot = trained_robot(seed)
        load_program(robot.am, build_checker(), base_slot=0)
        load_program(robot.am, build_scan_then_check(), base_slot=14)
        robot.set_learn_modes(am="none")
        return Scenario(2, robot, "scan, then mental checking (eye closed by hand)",
                        "3", tape, close_eye_on_handoff=True)
    if number == 3:
        robot = make_robot(seed)
        load_program(robot.am, build_rewriting_scanner(), base_slot=0)
        load_program(robot.am, build_checker(), base_slot=14)
        robot.set_learn_modes(am="none")
        return Scenario(3, robot, "train working memory, then repeat the mental exam",
                        "3", tape, close_eye_on_handoff=True, training_passes=6)
    if number in (4, 5):
        robot = trained_robot(seed, motor_width=4)
        checker = build_checker() if number == 4 else build_example5_checker()
        load_program(robot.am, checker, base_slot=0)
        load_program(robot.am, build_scan_then_check(handoff_eye="1"), base_slot=14)
        robot.set_learn_modes(am="none")
        what = ("program closes its own eye at the handoff" if number == 4
                else "program switches worlds several times")
        return Scenario(number, robot, what, "3", tape)
    raise ValueError(f"example number must be 1..5, got {number}")


def run_example(number: int, seed: int = 0, expr: str = DEFAULT_EXPRESSION,
                ) -> tuple[Scenario, RunOutcome, dict[str, int]]:
    """Set up and run one example; returns extra counters for reporting."""
    scenario = example_scenario(number, seed, expr)
    extras: dict[str, int] = {}
    if scenario.training_passes:
        recorded = train_as(scenario.robot)
        scenario.robot.set_learn_modes(as_="none")
        extras["as_slots_recorded"] = recorded
        # Example 3 then re-runs the mental exam through locations 14-25.
        scenario.robot.am.clear_all()
        load_program(scenario.robot.am, build_checker(), base_slot=0)
        load_program(scenario.robot.am, build_scan_then_check(), base_slot=14)
    outcome = scenario.run()
    return scenario, outcome, extras


def exam_run(expr: str, mental: bool = False, seed: int = 0,
             base_robot: Optional[Robot] = None) -> tuple[RunOutcome, Symbol]:
    """Examination: run the checker over a fresh expression and return the
    outcome plus the oracle verdict. ``base_robot`` (cloned, not touched)
    lets callers reuse a prepared robot across many exams."""
    oracle = balance_oracle(expr)
    if base_robot is not None:
        robot = base_robot.clone()
    elif mental:
        robot = trained_robot(seed)
        load_program(robot.am, build_checker(), base_slot=0)
        load_program(robot.am, build_scan_then_check(), base_slot=14)
        robot.set_learn_modes(am="none")
    else:
        robot = make_robot(seed)
        load_program(robot.am, build_checker(), base_slot=0)
        robot.set_learn_modes(am="none")
    scenario = Scenario(0, robot, "exam", "3" if mental else "0",
                        f"A{expr}A@1", close_eye_on_handoff=mental)
    outcome = scenario.run()
    return outcome, oracle


def step_budget(expr: str) -> int:
    """4 * len^2 with len the delimiter-wrapped tape length."""
    wrapped = len(expr) + 2
    return 4 * wrapped * wrapped


# -- finite-state machines over the field -----------------------------------------

@dataclass(frozen=True)
class MealyMachine:
    """Reference machine: output and next-state as explicit tables."""

    states: tuple[Symbol, ...]
    inputs: tuple[Symbol, ...]
    outputs: tuple[Symbol, ...]
    next_state: dict[tuple[Symbol, Symbol], Symbol]   # (input, state) -> state
    output: dict[tuple[Symbol, Symbol], Symbol]       # (input, state) -> output
    start: Symbol

    def run(self, string: Sequence[Symbol]) -> list[Symbol]:
        state = self.start
        out = []
        for a in string:
            out.append(self.output[(a, state)])
            state = self.next_state[(a, state)]
        return out


def random_mealy(rng: SessionRng, n_states: int = 3, n_symbols: int = 2) -> MealyMachine:
    states = tuple(f"s{i}" for i in range(n_states))
    inputs = tuple(f"i{i}" for i in range(n_symbols))
    outputs = tuple(f"o{i}" for i in range(n_symbols))
    nxt = {}
    out = {}
    for a in inputs:
        for s in states:
            nxt[(a, s)] = states[int(rng.draw() * n_states) % n_states]
            out[(a, s)] = outputs[int(rng.draw() * n_symbols) % n_symbols]
    return MealyMachine(states, inputs, outputs, nxt, out, states[0])


def fsm_field(capacity: int = 1000) -> AssociativeField:
    """Field wired for state-machine work: input (external symbol, fed-back
    state), output (next state, external output). The retrieval threshold
    blocks partial matches so untrained transitions starve instead of
    generalizing."""
    from tapemind.field import FieldConfig
    cfg = FieldConfig(capacity=capacity, bm=0.0, ba=0.0, x_inh=0.75,
                      learn_mode="new", select_source="teacher")
    return AssociativeField(2, 2, cfg, name="fsm")


def fsm_train(field: AssociativeField, machine: MealyMachine, rng: SessionRng) -> int:
    """Record every transition of the reference machine."""
    before = field.occupied_count()
    field.cfg.select_source = "teacher"
    field.cfg.learn_mode = "new"
    for a in machine.inputs:
        for s in machine.states:
            x = (a, s)
            yt = (machine.next_state[(a, s)], machine.output[(a, s)])
            field.cycle(x, yt, rng=rng)
    return field.occupied_count() - before


def fsm_simulate(field: AssociativeField, string: Sequence[Symbol],
                 start: Symbol, rng: SessionRng) -> list[Symbol]:
    """Run the wrapped field with the one-step delayed state feedback.
    Raises StarvationHalt on an untrained transition."""
    field.cfg.select_source = "memory"
    state = start
    out = []
    for a in string:
        y = field.cycle((a, state), rng=rng, allow_learning=False)
        if is_null(y):
            raise StarvationHalt(f"untrained transition (input={a!r}, state={state!r})")
        state, emitted = y[0], y[1]
        out.append(emitted)
    return out
