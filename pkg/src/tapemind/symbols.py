"""Atomic symbols and fixed-width symbol vectors.

A symbol is an opaque token compared only for equality. The distinguished
blank token means "no signal"; a vector whose components are all blank is
the NULL vector. Blanks render as the middle dot in every text format so
they survive whitespace-sensitive parsing.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Symbol = str

#: "No signal". Equal only to itself.
BLANK: Symbol = ""

#: Rendering of BLANK in dumps, tape literals and trace rows.
BLANK_GLYPH = "·"  # '·'


def null_vector(width: int) -> tuple[Symbol, ...]:
    return (BLANK,) * width


def is_null(vec: Sequence[Symbol]) -> bool:
    return all(c == BLANK for c in vec)


def render(sym: Symbol) -> str:
    return BLANK_GLYPH if sym == BLANK else sym


def unrender(text: str) -> Symbol:
    return BLANK if text == BLANK_GLYPH else text


def render_vector(vec: Iterable[Symbol]) -> str:
    return " ".join(render(c) for c in vec)


def parse_vector(text: str) -> tuple[Symbol, ...]:
    if not text.strip():
        return ()
    return tuple(unrender(tok) for tok in text.split())
