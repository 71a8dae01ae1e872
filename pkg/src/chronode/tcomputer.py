"""The labeling pipeline: decay, detection, hold-and-pair, memory, comparison.

Flow of one observed event through a detector:

1. an unstable node decays and emits its payload over its outgoing links;
2. the detector appends the arriving signal to its hold buffer;
3. the next clock tick at or after the arrival pairs every held signal:
   each one becomes an addressable memory record whose tick label names
   the *source* event -- the detector compensates for the known transit
   of the incoming link, so the label is the first tick at or after the
   emission (an emission exactly on a tick boundary gets that tick);
4. any two records can later be fetched as a comparison pair, subtracted
   to a signed tick difference, and converted to classical elapsed
   seconds by multiplying the magnitude with the clock period.

Labels are plain integer tick counts end to end; seconds only appear in
`time_operator`, which keeps the comparator purely ordinal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    AddressOutOfRange,
    ChannelMismatch,
    ForeignClock,
    MalformedPair,
    NotExcited,
)
from .infostate import (
    TICK_LABEL,
    Infostate,
    Provenance,
    Qubit,
    Qword,
    concat,
    make_qword,
)

FORWARD = "Forward"
BACKWARD = "Backward"
SIMULTANEOUS = "Simultaneous"

# slot tags of the two tick values inside a comparison qword
PAIR_FROM = "t-from"
PAIR_TO = "t-to"


@dataclass(frozen=True, slots=True)
class TimeLabel:
    """An integer tick index drawn from one standard clock."""

    tick: int
    sc_id: str


@dataclass(frozen=True, slots=True)
class MemoryRecord:
    """A time-labeled event stored at a consecutive address."""

    addr: int
    label: TimeLabel
    event: Qword
    origin: str

    @property
    def emission(self) -> int:
        """Which decay of `origin` produced this record."""
        return self.event.provenance[0].emission


@dataclass(frozen=True, slots=True)
class DeltaRecord:
    """Output of the comparator: a signed and an absolute tick difference."""

    from_addr: int
    to_addr: int
    signed_ticks: int
    magnitude_ticks: int
    orientation: str


@dataclass(frozen=True, slots=True)
class Held:
    """One buffered arrival awaiting the next clock tick.

    `source_coord` is the arrival coordinate minus the incoming link's
    transit, i.e. the coordinate of the emission itself.
    """

    signal: Infostate
    source_coord: Fraction
    link_index: int


# -- source-side transitions --------------------------------------------------

def decay_fc(fc) -> Infostate:
    """Reconfigure an excited node to ground and return its outgoing signal.

    The caller schedules the signal on every outgoing link; nodes with
    several links share one emission index per decay.
    """
    if fc.phase != "excited":
        raise NotExcited(f"{fc.id} is not excited")
    emission = fc.emission_count
    fc.emission_count = emission + 1
    fc.phase = "ground"
    template = fc.emission_template
    payload = Qword(template.slots, (Provenance(fc.id, emission, len(template.slots)),))
    return Infostate(payload, fc.id, emission, 0)


def tick_sc(sc) -> tuple[int, Infostate]:
    """Advance the clock by one tick and return (index, tick signal)."""
    index = sc.next_tick
    sc.next_tick = index + 1
    payload = make_qword(
        [Qubit(TICK_LABEL, Fraction(index), TICK_LABEL)], sc.id, index
    )
    return index, Infostate(payload, sc.id, index, 0)


# -- detector front-end --------------------------------------------------------

def detect(det, signal: Infostate, source_coord: Fraction = Fraction(0),
           link_index: int = 0) -> None:
    """Append an arriving signal to the detector's hold buffer (FIFO)."""
    if any(s.tag == TICK_LABEL for s in signal.payload.slots):
        raise ChannelMismatch(
            f"tick-bearing qword arrived on the signal channel of {det.id}"
        )
    det.hold_buffer.append(Held(signal, Fraction(source_coord), link_index))


def label_for(source_coord: Fraction, period: Fraction) -> int:
    """First tick index at or after the source coordinate."""
    return math.ceil(Fraction(source_coord) / period)


def pair_on_tick(det, tick_signal: Infostate,
                 period: Fraction) -> list[tuple[MemoryRecord, Held]]:
    """Pair every held signal with the clock train and store the records.

    One tick labels all currently held signals (a tick is shared
    information, not a consumable token).  Records are appended at
    consecutive addresses in the order of their derived labels, with
    (origin, emission, link) breaking exact ties, so bank content does
    not depend on internal scheduling order.  The buffer is left empty.
    Returns each new record alongside the arrival it captured.
    """
    sc_id = tick_signal.origin
    if sc_id != det.sc_source:
        raise ForeignClock(f"{det.id} is paired with {det.sc_source}, not {sc_id}")
    batch = sorted(
        det.hold_buffer,
        key=lambda h: (
            label_for(h.source_coord, period),
            h.signal.origin,
            h.signal.emission_index,
            h.link_index,
        ),
    )
    det.hold_buffer.clear()
    out = []
    for held in batch:
        tick = label_for(held.source_coord, period)
        tick_payload = make_qword(
            [Qubit(TICK_LABEL, Fraction(tick), TICK_LABEL)], sc_id, tick
        )
        event = concat(held.signal.payload, tick_payload)
        record = MemoryRecord(
            addr=len(det.memory_bank),
            label=TimeLabel(tick, sc_id),
            event=event,
            origin=held.signal.origin,
        )
        det.memory_bank.append(record)
        out.append((record, held))
    return out


# -- comparator ----------------------------------------------------------------

def fetch_pair(bank, k: int, k_plus_m: int) -> Qword:
    """Couple the tick labels of two records into a comparison qword."""
    size = len(bank)
    for addr in (k, k_plus_m):
        if not 0 <= addr < size:
            raise AddressOutOfRange(f"address {addr} outside bank of {size}")
    older, newer = bank[k], bank[k_plus_m]
    return Qword(
        (
            Qubit(PAIR_FROM, Fraction(older.label.tick), TICK_LABEL),
            Qubit(PAIR_TO, Fraction(newer.label.tick), TICK_LABEL),
        ),
        (Provenance("mem", k, 1), Provenance("mem", k_plus_m, 1)),
    )


def subtract_labels(paired: Qword, k: int, k_plus_m: int) -> DeltaRecord:
    """Subtract the two tick values of a comparison qword."""
    slots = paired.slots
    if len(slots) != 2 or any(
        s.unit != TICK_LABEL or s.value.denominator != 1 for s in slots
    ):
        raise MalformedPair("comparison qword must hold exactly two tick values")
    signed = int(slots[1].value) - int(slots[0].value)
    if signed > 0:
        orientation = FORWARD
    elif signed < 0:
        orientation = BACKWARD
    else:
        orientation = SIMULTANEOUS
    return DeltaRecord(k, k_plus_m, signed, abs(signed), orientation)


def time_operator(delta: DeltaRecord, period: Fraction) -> Fraction:
    """Map a tick difference to classical elapsed seconds."""
    period = Fraction(period)
    if period <= 0:
        raise ValueError("period must be positive")
    return delta.magnitude_ticks * period


def make_pair(t_from: int, t_to: int) -> Qword:
    """Comparison qword from two bare tick values (no bank needed)."""
    return Qword(
        (
            Qubit(PAIR_FROM, Fraction(t_from), TICK_LABEL),
            Qubit(PAIR_TO, Fraction(t_to), TICK_LABEL),
        ),
        (Provenance("mem", 0, 1), Provenance("mem", 1, 1)),
    )


def consecutive_deltas(bank) -> list[DeltaRecord]:
    """Comparator sweep over neighbouring addresses of one bank."""
    out = []
    for k in range(1, len(bank)):
        out.append(subtract_labels(fetch_pair(bank, k - 1, k), k - 1, k))
    return out
