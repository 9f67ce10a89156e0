"""Determinism and persistence: the counting generator, project files,
replay, and trace comparison."""

import pytest

from tapemind.programs import Scenario, example_scenario
from tapemind.robot import trace_row_text
from tapemind.session import (
    ProjectError,
    SessionRng,
    TraceLog,
    load_project,
    replay,
    save_project,
    trace_diff,
)


# -- generator -------------------------------------------------------------------

def test_rng_seed_determines_stream():
    a = SessionRng(42)
    b = SessionRng(42)
    assert [a.draw() for _ in range(20)] == [b.draw() for _ in range(20)]


def test_rng_fast_forward_matches_draws():
    a = SessionRng(42)
    for _ in range(13):
        a.draw()
    b = SessionRng(42, draws=13)
    assert a.draw() == b.draw()
    assert a.draws == b.draws == 14


def test_rng_clone_is_independent():
    a = SessionRng(7)
    a.draw()
    b = a.clone()
    assert a.draw() == b.draw()
    a.draw()
    assert a.draws == b.draws + 1


# -- project round trip -------------------------------------------------------------

def mid_run_robot(steps: int = 9, seed: int = 3):
    scenario = example_scenario(2, seed=seed)
    scenario.initialize()
    for _ in range(steps):
        scenario.robot.macro_step()
    return scenario.robot


def test_round_trip_byte_identical():
    robot = mid_run_robot()
    text = save_project(robot)
    assert save_project(load_project(text)) == text


def test_round_trip_preserves_engine_state():
    robot = mid_run_robot()
    twin = load_project(save_project(robot))
    assert twin.v == robot.v
    assert twin.world.literal() == robot.world.literal()
    assert twin.world.symbol_uttered == robot.world.symbol_uttered
    assert twin.am.occupied_indices() == robot.am.occupied_indices()
    assert twin.as_field.occupied_count() == robot.as_field.occupied_count()
    assert twin.rng.draws == robot.rng.draws


def test_truncated_project_rejected():
    robot = mid_run_robot(3)
    text = save_project(robot)
    truncated = "\n".join(text.splitlines()[:8])
    with pytest.raises(ProjectError):
        load_project(truncated)


def test_malformed_line_reports_position():
    robot = mid_run_robot(3)
    lines = save_project(robot).splitlines()
    lines.insert(3, "not a key value line")
    with pytest.raises(ProjectError) as err:
        load_project("\n".join(lines))
    assert "line 4" in str(err.value)


def test_version_mismatch_rejected():
    robot = mid_run_robot(3)
    text = save_project(robot).replace("version=1", "version=9")
    with pytest.raises(ProjectError):
        load_project(text)


# -- replay ---------------------------------------------------------------------------

def test_replay_continues_exactly():
    robot = mid_run_robot(9)
    snapshot = save_project(robot)
    original = TraceLog()
    while not robot.halted:
        original.append(robot.macro_step())
    replayed = replay(snapshot, 1000)
    assert trace_diff(original, replayed) is None


def test_replay_twice_is_identical():
    snapshot = save_project(mid_run_robot(5))
    a = replay(snapshot, 200)
    b = replay(snapshot, 200)
    assert trace_diff(a, b) is None


def test_seed_does_not_matter_on_tie_free_run():
    """The prepared checker demonstration never produces a choice tie, so
    different generator seeds give the same trace."""
    outcomes = []
    for seed in (0, 1, 99):
        scenario = example_scenario(1, seed=seed)
        outcome = scenario.run()
        outcomes.append(outcome.trace.lines())
    assert outcomes[0] == outcomes[1] == outcomes[2]


def test_trace_diff_reports_first_divergence():
    robot_a = mid_run_robot(4, seed=1)
    robot_b = mid_run_robot(4, seed=1)
    a = TraceLog()
    b = TraceLog()
    for _ in range(3):
        a.append(robot_a.macro_step())
        b.append(robot_b.macro_step())
    # inject a tape edit into one run and continue
    robot_b.world.edit_square(2, "X")
    a.append(robot_a.macro_step())
    b.append(robot_b.macro_step())
    diff = trace_diff(a, b)
    assert diff is not None and diff[0] == 3


def test_trace_rows_strictly_increasing():
    log = TraceLog()
    robot = mid_run_robot(2)
    row = robot.macro_step()
    log.append(row)
    with pytest.raises(ValueError):
        log.append(row)
