"""Subjective-time frames: attention cycles sampling a clock pulse train.

An observer partitions incoming tick indices into consecutive half-open
windows of fixed width (its tick-tock cycle) and counts detections per
window.  Comparing the count against a remembered normal rate classifies
each frame: detecting more than normal makes the external world appear
fast, fewer makes it appear slow.  Frames are indexed, not timed -- every
cycle feels like the same interval from the inside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import UnsortedStream, ZeroReference

FAST = "Fast"
NORMAL = "Normal"
SLOW = "Slow"


@dataclass(frozen=True, slots=True)
class AttentionFrame:
    cycle_index: int
    detected: int
    regime: str


def subjective_rate(detected: int, normal_reference: int) -> Fraction:
    """Perceived external rate: >1 looks faster, <1 slower, 1 normal."""
    if normal_reference <= 0:
        raise ZeroReference("normal reference must be a positive count")
    return Fraction(detected, normal_reference)


def _regime(detected: int, normal_reference: int) -> str:
    if detected > normal_reference:
        return FAST
    if detected < normal_reference:
        return SLOW
    return NORMAL


def perceive(
    tick_stream: Sequence[int],
    cycle_width_ticks: Fraction | int,
    normal_reference: int,
) -> list[AttentionFrame]:
    """Partition a sorted tick stream into attention frames.

    Window k covers ticks in [k*width, (k+1)*width); every tick lands in
    exactly one frame, and frames run from zero through the window of the
    last tick, including empty ones in between.
    """
    width = Fraction(cycle_width_ticks)
    if width <= 0:
        raise ValueError("cycle width must be positive")
    if normal_reference <= 0:
        raise ZeroReference("normal reference must be a positive count")
    ticks = list(tick_stream)
    if ticks and ticks[0] < 0:
        raise ValueError("tick indices are nonnegative")
    for a, b in zip(ticks, ticks[1:]):
        if b < a:
            raise UnsortedStream(f"tick {b} follows {a}")
    if not ticks:
        return []
    counts = [0] * (int(ticks[-1] // width) + 1)
    for tick in ticks:
        counts[int(tick // width)] += 1
    return [
        AttentionFrame(i, n, _regime(n, normal_reference))
        for i, n in enumerate(counts)
    ]
