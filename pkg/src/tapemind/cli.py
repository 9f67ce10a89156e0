"""Headless command-line driver.

Every experiment is runnable without the UI; identical flags and seed
produce byte-identical stdout. Exit codes encode the outcome class:
0 ok, 1 oracle mismatch or usage error, 2 starved, 3 step limit,
4 boundary clamp, 5 capacity exhausted.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from tapemind import neuro
from tapemind.field import CapacityError
from tapemind.programs import (
    CHECKER_CURRICULUM,
    build_checker,
    exam_run,
    make_robot,
    run_example,
    run_until_halt,
    teach_am,
    train_as,
)
from tapemind.session import SessionRng, load_project, save_project

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_STARVED = 2
EXIT_STEP_LIMIT = 3
EXIT_BOUNDARY = 4
EXIT_CAPACITY = 5

_OUTCOME_CODES = {
    "halted": EXIT_OK,
    "starved": EXIT_STARVED,
    "step-limit": EXIT_STEP_LIMIT,
    "boundary": EXIT_BOUNDARY,
}


def _print_outcome(outcome, out) -> int:
    for line in outcome.trace.lines():
        print(line, file=out)
    for diag in outcome.trace.diagnostics:
        print(f"! {diag}", file=out)
    print(f"outcome: {outcome.kind} steps={outcome.steps} "
          f"verdict={outcome.verdict or '-'} tape={outcome.final_tape}", file=out)
    return _OUTCOME_CODES[outcome.kind]


def cmd_example(args, out) -> int:
    scenario, outcome, extras = run_example(args.number, seed=args.seed)
    print(f"example {args.number}: {scenario.description}", file=out)
    if "as_slots_recorded" in extras:
        print(f"{extras['as_slots_recorded']} working-memory slots recorded", file=out)
    code = _print_outcome(outcome, out)
    if args.save_project:
        with open(args.save_project, "w", encoding="utf-8") as fh:
            fh.write(save_project(scenario.robot))
        print(f"project saved to {args.save_project}", file=out)
    return code


def cmd_run(args, out) -> int:
    with open(args.project, encoding="utf-8") as fh:
        robot = load_project(fh.read())
    if args.seed is not None:
        robot.rng = SessionRng(args.seed)
    outcome = run_until_halt(robot, args.steps)
    return _print_outcome(outcome, out)


def cmd_teach_checker(args, out) -> int:
    robot = make_robot(args.seed)
    recorded = teach_am(robot, build_checker(), CHECKER_CURRICULUM)
    print(f"{recorded} commands recorded", file=out)
    return EXIT_OK


def cmd_train_as(args, out) -> int:
    robot = make_robot(args.seed)
    recorded = train_as(robot)
    print(f"{recorded} slots recorded", file=out)
    return EXIT_OK


def cmd_exam(args, out) -> int:
    expr = args.expr
    if any(c not in "()" for c in expr):
        print("error: the expression may contain only parentheses", file=out)
        return EXIT_FAIL
    outcome, oracle = exam_run(expr, mental=args.mental, seed=args.seed)
    if not outcome.ok:
        print(f"! run ended {outcome.kind}: {outcome.diagnostic}", file=out)
        return _OUTCOME_CODES[outcome.kind]
    print(outcome.verdict, file=out)
    return EXIT_OK if outcome.verdict == oracle else EXIT_FAIL


def cmd_dump_ltm(args, out) -> int:
    if args.project:
        with open(args.project, encoding="utf-8") as fh:
            robot = load_project(fh.read())
    else:
        scenario, _, _ = run_example(args.example, seed=args.seed)
        robot = scenario.robot
    fld = robot.am if args.field == "am" else robot.as_field
    for line in fld.dump_lines():
        print(line, file=out)
    return EXIT_OK


def cmd_trace(args, out) -> int:
    scenario, outcome, _ = run_example(args.example, seed=args.seed)
    text = "\n".join(outcome.trace.lines()) + "\n"
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(text)
    print(f"{len(outcome.trace.rows)} rows written to {args.out}", file=out)
    return _OUTCOME_CODES[outcome.kind]


def cmd_ann0(args, out) -> int:
    if args.experiment == "wta":
        rng = np.random.default_rng(args.seed)
        params = neuro.Ann0Params(n1=args.n2, n2=args.n2, n3=1,
                                  beta=args.beta, tau=1.0,
                                  dt=neuro.stable_dt(args.n2, args.beta, 1.0))
        state = neuro.Ann0State.zeros(params)
        state.gx = np.eye(args.n2)
        state.gy = np.ones((1, args.n2))
        s = rng.uniform(0.2, 1.0, size=args.n2)
        winner = neuro.run_wta_cycle(state, s, params, reset=False)
        print(f"inputs: {' '.join(f'{v:.4f}' for v in s)}", file=out)
        print(f"winner: {winner} argmax: {int(np.argmax(s))}", file=out)
        if args.csv_out:
            times, us, rs = [], [], []
            state.reset_activity()
            t = 0.0
            for _ in range(200):
                neuro.ann0_step(state, s, params)
                t += params.dt
                times.append(t)
                us.append(state.u.copy())
                rs.append(state.r.copy())
            with open(args.csv_out, "w", encoding="utf-8") as fh:
                fh.write(neuro.trajectory_csv(times, us, rs))
            print(f"trajectory written to {args.csv_out}", file=out)
        return EXIT_OK if winner == int(np.argmax(s)) else EXIT_FAIL
    if args.experiment == "pla":
        rng = np.random.default_rng(args.seed)
        m = args.inputs
        table = {}
        for k in range(2 ** m):
            bits = tuple((k >> j) & 1 for j in range(m))
            table[bits] = (int(rng.integers(0, 2)),)
        ok = neuro.pla_mode_check(table)
        print(f"pla table ({m} inputs, {2 ** m} rows): "
              f"{'reproduced' if ok else 'MISMATCH'}", file=out)
        return EXIT_OK if ok else EXIT_FAIL
    if args.experiment == "equiv":
        pairs = [(("a", "0"), ("x",)), (("a", "0"), ("y",)), (("b", "1"), ("z",))]
        probes = [("a", "0"), ("b", "1")]
        reports = neuro.ann0_vs_af0_equivalence(
            pairs, probes, alphabet=("a", "b", "x", "y", "z", "0", "1"),
            trials=args.trials, seed=args.seed)
        ok = True
        for rep in reports:
            ok = ok and rep.agree
            net = " ".join(f"{k}:{v:.3f}" for k, v in sorted(rep.network_freq.items()))
            fld = " ".join(f"{k}:{v:.3f}" for k, v in sorted(rep.field_freq.items()))
            print(f"probe {rep.probe}: network[{net}] field[{fld}] "
                  f"{'agree' if rep.agree else 'DISAGREE'}", file=out)
        return EXIT_OK if ok else EXIT_FAIL
    raise AssertionError(args.experiment)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tapemind",
        description="Associative-memory robot: teaching, examination and "
                    "network experiments, headless.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("example", help="set up and run one of the five demonstrations")
    p.add_argument("number", type=int, choices=range(1, 6))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--save-project", metavar="FILE")
    p.set_defaults(func=cmd_example)

    p = sub.add_parser("run", help="load a project and step it")
    p.add_argument("--project", required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("teach-checker", help="teach the checker by demonstration")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_teach_checker)

    p = sub.add_parser("train-as", help="train the working-memory field on the tape")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train_as)

    p = sub.add_parser("exam", help="check one expression; exit 0 iff the "
                                    "verdict matches the oracle")
    p.add_argument("--expr", required=True)
    p.add_argument("--mental", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_exam)

    p = sub.add_parser("dump-ltm", help="print one field's stored associations")
    p.add_argument("--field", choices=("am", "as"), required=True)
    p.add_argument("--project")
    p.add_argument("--example", type=int, choices=range(1, 6), default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_dump_ltm)

    p = sub.add_parser("trace", help="run an example and write its trace to a file")
    p.add_argument("--example", type=int, choices=range(1, 6), default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("ann0", help="continuous-network experiments")
    p.add_argument("experiment", choices=("wta", "pla", "equiv"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n2", type=int, default=8)
    p.add_argument("--beta", type=float, default=1.5)
    p.add_argument("--inputs", type=int, default=2)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--csv-out", metavar="FILE")
    p.set_defaults(func=cmd_ann0)

    return parser


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except CapacityError as exc:
        print(f"error: {exc}", file=out)
        return EXIT_CAPACITY
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=out)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
