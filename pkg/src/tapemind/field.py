"""The primitive associative field: a content-addressable look-up table
whose retrieval is biased by decaying per-slot residual excitation.

One cycle runs decode -> bias -> choose -> encode -> output-select ->
novelty -> excitation update -> learn, in exactly that order. With the
bias coefficients at zero the excitation values never influence the
output and the field degenerates to a plain associative look-up table;
with multiplicative bias on, the most recently used association wins
blank-component probes, which is what produces the working-memory effect
at the robot level.

Slots are recorded into the first unoccupied location, so erased slots
are reused. A slot is occupied exactly when any component of its input
or output part is non-blank.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from tapemind.symbols import (
    BLANK,
    Symbol,
    is_null,
    null_vector,
    render,
    render_vector,
)

LEARN_MODES = ("all", "new", "none")
SELECT_SOURCES = ("teacher", "memory")


class CapacityError(RuntimeError):
    """No unoccupied slot is left to record into."""


def similarity(x: Sequence[Symbol], g: Sequence[Symbol]) -> float:
    """Fraction of x's non-blank components that g matches.

    Blank components of x are excluded from both numerator and
    denominator; an all-blank x scores 0 against everything.
    """
    if len(x) != len(g):
        raise ValueError(f"width mismatch: {len(x)} vs {len(g)}")
    nonblank = 0
    matches = 0
    for xc, gc in zip(x, g):
        if xc != BLANK:
            nonblank += 1
            if xc == gc:
                matches += 1
    if nonblank == 0:
        return 0.0
    return matches / nonblank


def check_correct_decoding(
    inputs: Sequence[Sequence[Symbol]],
) -> tuple[bool, Optional[tuple[tuple[Symbol, ...], tuple[Symbol, ...]]]]:
    """Verify f(a,a) > f(a,b) for every ordered pair of distinct inputs.

    Returns (True, None) when the input set decodes correctly, else
    (False, (a, b)) with the first violating pair found.
    """
    vecs = [tuple(v) for v in inputs]
    for a in vecs:
        saa = similarity(a, a)
        for b in vecs:
            if a != b and not saa > similarity(a, b):
                return False, (a, b)
    return True, None


class LtmSlot:
    """One long-term-memory location: input part, output part, excitation."""

    __slots__ = ("gx", "gy", "e")

    def __init__(self, gx: tuple[Symbol, ...], gy: tuple[Symbol, ...], e: float = 0.0):
        self.gx = gx
        self.gy = gy
        self.e = e

    @property
    def occupied(self) -> bool:
        return not (is_null(self.gx) and is_null(self.gy))

    def clone(self) -> "LtmSlot":
        return LtmSlot(self.gx, self.gy, self.e)


@dataclass
class FieldConfig:
    capacity: int = 1000
    bm: float = 0.0            # multiplicative excitation bias
    ba: float = 0.0            # additive excitation bias
    tau: float = 50.0          # excitation decay time constant, > 1
    x_inh: float = 0.0         # retrieval threshold: fire only when se > x_inh
    novelty_threshold: float = 1.0
    learn_mode: str = "none"
    select_source: str = "memory"

    def validate(self) -> None:
        if self.capacity <= 0:
            raise ValueError("capacity must be positive")
        if self.tau <= 1:
            raise ValueError("tau must exceed 1")
        if self.bm < 0 or self.ba < 0 or self.x_inh < 0:
            raise ValueError("bias coefficients and x_inh must be non-negative")
        if not 0 < self.novelty_threshold <= 1:
            raise ValueError("novelty_threshold must lie in (0, 1]")
        if self.learn_mode not in LEARN_MODES:
            raise ValueError(f"learn_mode must be one of {LEARN_MODES}")
        if self.select_source not in SELECT_SOURCES:
            raise ValueError(f"select_source must be one of {SELECT_SOURCES}")


class AssociativeField:
    """Long-term memory plus the cycle machinery operating on it.

    Slots materialize lazily up to ``cfg.capacity``; indices beyond the
    materialized prefix are logically unoccupied with zero similarity and
    zero excitation. The similarity and biased fronts of the most recent
    cycle are kept for display (``last_s``/``last_se`` map materialized
    slot index to value; absent indices are zero).
    """

    def __init__(self, nx: int, ny: int, cfg: Optional[FieldConfig] = None, name: str = "field"):
        if nx <= 0 or ny <= 0:
            raise ValueError("vector widths must be positive")
        self.nx = nx
        self.ny = ny
        self.cfg = cfg if cfg is not None else FieldConfig()
        self.cfg.validate()
        self.name = name
        self._slots: list[LtmSlot] = []
        self.last_s: dict[int, float] = {}
        self.last_se: dict[int, float] = {}
        self.last_i_read: Optional[int] = None
        self.last_maxset: Optional[Sequence[int]] = None
        self.last_fired: bool = False

    # -- construction helpers -------------------------------------------

    def clone(self) -> "AssociativeField":
        dup = AssociativeField(self.nx, self.ny, FieldConfig(**vars(self.cfg)), self.name)
        dup._slots = [s.clone() for s in self._slots]
        return dup

    def _slot_at(self, index: int) -> LtmSlot:
        """Materialize slots up to index and return the one there."""
        if not 0 <= index < self.cfg.capacity:
            raise IndexError(f"slot index {index} out of range 0..{self.cfg.capacity - 1}")
        while len(self._slots) <= index:
            self._slots.append(LtmSlot(null_vector(self.nx), null_vector(self.ny)))
        return self._slots[index]

    def _check_x(self, x: Sequence[Symbol]) -> tuple[Symbol, ...]:
        x = tuple(x)
        if len(x) != self.nx:
            raise ValueError(f"{self.name}: input width {len(x)}, expected {self.nx}")
        return x

    # -- cycle stages ----------------------------------------------------

    def decode(self, x: Sequence[Symbol]) -> dict[int, float]:
        """Similarity front over materialized slots (unoccupied score 0)."""
        x = self._check_x(x)
        front: dict[int, float] = {}
        for i, slot in enumerate(self._slots):
            front[i] = similarity(x, slot.gx) if slot.occupied else 0.0
        return front

    def bias(self, s: dict[int, float]) -> dict[int, float]:
        """se[i] = s[i]*(1 + bm*e[i]) + ba*e[i]. Identity when bm=ba=0."""
        bm = self.cfg.bm
        ba = self.cfg.ba
        if bm == 0.0 and ba == 0.0:
            return dict(s)
        se: dict[int, float] = {}
        for i, v in s.items():
            e = self._slots[i].e
            se[i] = v * (1.0 + bm * e) + ba * e
        return se

    def choose(self, se: dict[int, float], rng) -> tuple[int, Sequence[int]]:
        """Uniform random winner among the maxima of the biased front.

        When the whole front is zero the maxset is every slot index up to
        capacity (materialized or not). Exactly one generator draw is
        consumed per call.
        """
        best = max(se.values(), default=0.0)
        if best > 0.0:
            maxset: Sequence[int] = [i for i, v in se.items() if v == best]
        else:
            maxset = range(self.cfg.capacity)
        i_read = maxset[int(rng.draw() * len(maxset)) % len(maxset)]
        return i_read, maxset

    def encode(self, i_read: int, se_value: float) -> tuple[Symbol, ...]:
        """Gated retrieval: the stored output part, or NULL below threshold."""
        if se_value > self.cfg.x_inh and i_read < len(self._slots):
            return self._slots[i_read].gy
        return null_vector(self.ny)

    def detect_novelty(self, x: Sequence[Symbol]) -> bool:
        """True when no occupied slot matches x above the novelty threshold."""
        x = self._check_x(x)
        best = 0.0
        for slot in self._slots:
            if slot.occupied:
                s = similarity(x, slot.gx)
                if s > best:
                    best = s
        return best < self.cfg.novelty_threshold

    def update_e(self, i_read: int, x_is_new: bool, fired: bool) -> None:
        """Decay every excitation, then excite the winner of a successful
        retrieval of a non-novel input."""
        factor = 1.0 - 1.0 / self.cfg.tau
        for slot in self._slots:
            slot.e *= factor
        if not x_is_new and fired and i_read < len(self._slots):
            self._slots[i_read].e = 1.0

    def learn(self, x: Sequence[Symbol], y: Sequence[Symbol], x_is_new: bool) -> bool:
        """Record (x, y) into the first unoccupied slot when the learning
        mode admits it. Returns whether a record was made."""
        mode = self.cfg.learn_mode
        if mode == "none" or (mode == "new" and not x_is_new):
            return False
        x = self._check_x(x)
        y = tuple(y)
        if len(y) != self.ny:
            raise ValueError(f"{self.name}: output width {len(y)}, expected {self.ny}")
        index = None
        for i, slot in enumerate(self._slots):
            if not slot.occupied:
                index = i
                break
        if index is None:
            if len(self._slots) >= self.cfg.capacity:
                raise CapacityError(f"{self.name}: all {self.cfg.capacity} slots occupied")
            index = len(self._slots)
        slot = self._slot_at(index)
        slot.gx = x
        slot.gy = y
        slot.e = 1.0 if slot.occupied else 0.0
        return True

    def cycle(self, x: Sequence[Symbol], yt: Optional[Sequence[Symbol]] = None, *,
              rng, allow_learning: bool = True) -> tuple[Symbol, ...]:
        """One full field cycle; returns the output vector.

        In teacher mode the output is yt (required); in memory mode it is
        the gated retrieval. ``allow_learning=False`` suppresses the
        learning stage only -- excitation dynamics still run (used for
        probe cycles that must not record).
        """
        x = self._check_x(x)
        if self.cfg.select_source == "teacher":
            if yt is None:
                raise ValueError(f"{self.name}: teacher mode requires yt")
            yt = tuple(yt)
            if len(yt) != self.ny:
                raise ValueError(f"{self.name}: teacher output width {len(yt)}, expected {self.ny}")
        s = self.decode(x)
        se = self.bias(s)
        i_read, maxset = self.choose(se, rng)
        se_value = se.get(i_read, 0.0)
        fired = se_value > self.cfg.x_inh
        ym = self.encode(i_read, se_value)
        y = yt if self.cfg.select_source == "teacher" else ym
        x_is_new = self.detect_novelty(x)
        self.update_e(i_read, x_is_new, fired)
        if allow_learning:
            self.learn(x, y, x_is_new)
        self.last_s = s
        self.last_se = se
        self.last_i_read = i_read
        self.last_maxset = maxset
        self.last_fired = fired
        return tuple(y)

    # -- editing ----------------------------------------------------------

    def edit_slot(self, index: int, part: str, position: int, symbol: Symbol) -> None:
        """Replace one symbol of a slot (blank allowed). A slot whose every
        component becomes blank turns unoccupied and loses its excitation."""
        slot = self._slot_at(index)
        if part == "input":
            if not 0 <= position < self.nx:
                raise IndexError(f"input position {position} out of range")
            slot.gx = slot.gx[:position] + (symbol,) + slot.gx[position + 1:]
        elif part == "output":
            if not 0 <= position < self.ny:
                raise IndexError(f"output position {position} out of range")
            slot.gy = slot.gy[:position] + (symbol,) + slot.gy[position + 1:]
        else:
            raise ValueError("part must be 'input' or 'output'")
        if not slot.occupied:
            slot.e = 0.0

    def set_slot(self, index: int, gx: Sequence[Symbol], gy: Sequence[Symbol],
                 e: float = 0.0) -> None:
        """Write a whole slot (program loading and project restore)."""
        gx = tuple(gx)
        gy = tuple(gy)
        if len(gx) != self.nx or len(gy) != self.ny:
            raise ValueError(f"{self.name}: slot widths ({len(gx)},{len(gy)}), "
                             f"expected ({self.nx},{self.ny})")
        slot = self._slot_at(index)
        slot.gx = gx
        slot.gy = gy
        slot.e = e if slot.occupied else 0.0

    def erase_slot(self, index: int) -> None:
        if index < len(self._slots):
            slot = self._slots[index]
            slot.gx = null_vector(self.nx)
            slot.gy = null_vector(self.ny)
            slot.e = 0.0

    def clear_all(self) -> None:
        self._slots.clear()
        self.clear_fronts()

    def clear_fronts(self) -> None:
        """Zero the displayed fronts and every excitation value."""
        self.last_s = {}
        self.last_se = {}
        self.last_i_read = None
        self.last_maxset = None
        self.last_fired = False
        for slot in self._slots:
            slot.e = 0.0

    # -- inspection -------------------------------------------------------

    def occupied_indices(self) -> list[int]:
        return [i for i, slot in enumerate(self._slots) if slot.occupied]

    def occupied_count(self) -> int:
        return sum(1 for slot in self._slots if slot.occupied)

    def slot(self, index: int) -> LtmSlot:
        return self._slot_at(index)

    def dump_lines(self) -> list[str]:
        """One line per occupied slot: index, input part, '→', output part,
        excitation at 6 decimal places. Blanks render as '·'."""
        lines = []
        for i, slot in enumerate(self._slots):
            if slot.occupied:
                lines.append(
                    f"{i:4d}  {render_vector(slot.gx)} "
                    f"→ {render_vector(slot.gy)}  {slot.e:.6f}"
                )
        return lines

    def __repr__(self) -> str:
        return (f"AssociativeField({self.name!r}, nx={self.nx}, ny={self.ny}, "
                f"occupied={self.occupied_count()}/{self.cfg.capacity})")
