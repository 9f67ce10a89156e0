"""Shared prepared robots. The bases are built once and cloned per test;
clones share nothing with their base."""

import pytest

from tapemind.programs import (
    build_checker,
    build_scan_then_check,
    load_program,
    make_robot,
    trained_robot,
)


@pytest.fixture(scope="session")
def checker_base():
    """Checker loaded, empty AS, ready for eyes-open exams."""
    robot = make_robot(seed=0)
    load_program(robot.am, build_checker(), base_slot=0)
    robot.set_learn_modes(am="none")
    return robot


@pytest.fixture(scope="session")
def mental_base():
    """Trained working memory plus checker and scan-then-check scanner."""
    robot = trained_robot(seed=0)
    load_program(robot.am, build_checker(), base_slot=0)
    load_program(robot.am, build_scan_then_check(), base_slot=14)
    robot.set_learn_modes(am="none")
    return robot
