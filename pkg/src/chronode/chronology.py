"""Timelines, arrows of time, and the happens-before oracle.

Timelines order one detector's memory records by tick label; equal labels
stay in address order and are flagged simultaneous.  Arrows come in two
kinds: a quantum arrow from each decay origin to the record it produced,
and a classical arrow between consecutive timeline records whose labels
strictly increase.  Simultaneous records yield no arrow, since direction
comes from label differences and those vanish.

The happens-before relation is rebuilt from the raw event log by matching
identities (which emission a delivery carries, which delivery filled a
record, ...), never by consulting scheduling coordinates, and is stored
as its transitive closure.  It is the independent oracle that derived
timelines must linearly extend.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import UnknownEvent
from .tcomputer import MemoryRecord

QAT = "QAT"
CAT = "CAT"

# event-id tuples used by the oracle
#   ("excite",  node, ordinal)
#   ("decay",   node, emission)
#   ("deliver", origin, emission, link_index)
#   ("tick",    clock, index)
#   ("label",   detector, addr)
EventId = tuple


@dataclass(frozen=True, slots=True)
class TimelinePoint:
    addr: int
    tick: int
    simultaneous: bool = False


@dataclass(frozen=True, slots=True)
class ArrowOfTime:
    kind: str
    detector: str
    to_addr: int
    origin: str | None = None      # QAT: the decayed node
    from_addr: int | None = None   # CAT: the earlier record


@dataclass(frozen=True, slots=True)
class HappensBefore:
    events: frozenset
    pairs: frozenset

    def precedes(self, a: EventId, b: EventId) -> bool:
        return (a, b) in self.pairs


def build_timeline(bank: Sequence[MemoryRecord]) -> list[TimelinePoint]:
    """Records ordered by (tick, addr); tick ties flagged simultaneous."""
    ordered = sorted(bank, key=lambda r: (r.label.tick, r.addr))
    ticks = [r.label.tick for r in ordered]
    points = []
    for i, record in enumerate(ordered):
        tie = (i > 0 and ticks[i - 1] == ticks[i]) or (
            i + 1 < len(ticks) and ticks[i + 1] == ticks[i]
        )
        points.append(TimelinePoint(record.addr, record.label.tick, tie))
    return points


def build_arrows(banks: Mapping[str, Sequence[MemoryRecord]]) -> list[ArrowOfTime]:
    """One QAT per record, one CAT per strict ascent in each timeline."""
    arrows = []
    for detector in sorted(banks):
        bank = banks[detector]
        for record in bank:
            arrows.append(ArrowOfTime(QAT, detector, record.addr, origin=record.origin))
        timeline = build_timeline(bank)
        for earlier, later in zip(timeline, timeline[1:]):
            if later.tick > earlier.tick:
                arrows.append(
                    ArrowOfTime(CAT, detector, later.addr, from_addr=earlier.addr)
                )
    arrows.sort(key=lambda a: (a.kind != QAT, a.detector, a.to_addr,
                               a.from_addr or 0, a.origin or ""))
    return arrows


def _event_id(rec) -> EventId | None:
    if rec.kind == "excite":
        return ("excite", rec.node, rec.seq)
    if rec.kind == "decay":
        return ("decay", rec.node, rec.emission)
    if rec.kind == "deliver":
        return ("deliver", rec.origin, rec.emission, rec.link_index)
    if rec.kind == "tick":
        return ("tick", rec.node, rec.tick)
    if rec.kind == "label":
        return ("label", rec.node, rec.addr)
    return None


def happens_before(raw_events: Iterable) -> HappensBefore:
    """Brute-force causal order over a run's raw event log.

    Direct edges: emission to each delivery of the same signal; the
    scheduling chains a node generates itself (excitation to decay, tick
    to next tick); delivery to the record it became; triggering tick to
    the records it paired; delivery to the re-excitation it caused.
    The result is the transitive closure.
    """
    records = list(raw_events)
    ids = [_event_id(r) for r in records]
    present = {i for i in ids if i is not None}
    edges: dict[EventId, set[EventId]] = {i: set() for i in present}

    def add(a: EventId, b: EventId) -> None:
        if a in present and b in present:
            edges[a].add(b)

    for rec, eid in zip(records, ids):
        if eid is None:
            continue
        kind = eid[0]
        if kind == "excite":
            add(eid, ("decay", rec.node, rec.seq))
            if rec.cause is not None and rec.cause[0] == "deliver":
                add(("deliver",) + tuple(rec.cause[1:]), eid)
        elif kind == "deliver":
            # the signal's source is a decay (unstable origin) or a tick
            # (clock origin); only the id that actually exists matches
            add(("decay", rec.origin, rec.emission), eid)
            add(("tick", rec.origin, rec.emission), eid)
        elif kind == "tick":
            add(eid, ("tick", rec.node, rec.tick + 1))
        elif kind == "label":
            add(("deliver", rec.origin, rec.emission, rec.link_index), eid)
            add(("tick", rec.clock, rec.tick), eid)

    pairs = set()
    for start in edges:
        seen = set()
        queue = deque(edges[start])
        while queue:
            node = queue.popleft()
            if node in seen:
                continue
            seen.add(node)
            queue.extend(edges[node])
        pairs.update((start, other) for other in seen)
    return HappensBefore(frozenset(present), frozenset(pairs))


def is_linear_extension(
    timeline: Sequence[TimelinePoint],
    hb: HappensBefore,
    event_ids: Sequence[EventId],
) -> tuple[bool, tuple[EventId, EventId] | None]:
    """Check that tick order never inverts the causal order.

    `event_ids` names, entry by entry, the happens-before event each
    timeline record stands for.  A pair (a, b) with a preceding b in the
    relation is violated only when b's tick is strictly smaller than a's;
    equal ticks are simultaneous, not ordered.  Returns the first
    counterexample found, scanning in timeline order.
    """
    if len(timeline) != len(event_ids):
        raise ValueError("timeline and event ids must align")
    for eid in event_ids:
        if eid not in hb.events:
            raise UnknownEvent(f"{eid} not part of the happens-before relation")
    for i, (point_a, a) in enumerate(zip(timeline, event_ids)):
        for point_b, b in zip(timeline[i + 1:], event_ids[i + 1:]):
            if point_b.tick == point_a.tick:
                continue
            # timeline is tick-sorted, so point_b.tick > point_a.tick here;
            # a violation is b preceding a causally yet carrying the later tick
            if hb.precedes(b, a):
                return False, (b, a)
    return True, None
