"""Associative-memory robot that learns tape algorithms by demonstration.

The engine couples two content-addressable associative fields -- a motor
field that learns (sensory, state) -> command associations and a sensory
field whose residual-excitation dynamics produce a read/write working
memory -- to a finite tape world. Taught a Turing-machine algorithm by
demonstration, the robot performs it on the real tape, and, once the
sensory field has learned to simulate the tape, performs it "mentally"
with its eye closed.

Subpackages:

- ``symbols``   -- blank-aware symbol vectors
- ``field``     -- the associative field (decode / bias / choose / encode)
- ``world``     -- tape, eye/hand position, delayed proprioceptive registers
- ``robot``     -- the full architecture and its macro-step protocol
- ``programs``  -- command tables, teaching curricula, examination harness
- ``neuro``     -- the continuous-time winner-take-all network the field abstracts
- ``session``   -- seeded determinism, project persistence, replay
- ``cli``       -- headless driver for every experiment
- ``service``   -- line-JSON session server for the companion UI
"""

from tapemind.field import AssociativeField, FieldConfig, CapacityError
from tapemind.world import Tape, MotorCommand
from tapemind.robot import Robot, RobotConfig, StarvationHalt

__all__ = [
    "AssociativeField",
    "FieldConfig",
    "CapacityError",
    "Tape",
    "MotorCommand",
    "Robot",
    "RobotConfig",
    "StarvationHalt",
]

__version__ = "0.1.0"
