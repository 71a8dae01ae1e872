"""The causal substrate: nodes, links, and a deterministic event engine.

Scheduling needs a total order, so the queue is keyed by a rational
coordinate on a hidden axis -- but that axis is structurally quarantined:
no derived output (labels, deltas, arrows, timelines) ever contains a
coordinate or a step index, and reordering causally independent events
must leave those outputs byte-identical.  Three mechanisms enforce this:

* equal-coordinate events process in two phases, deliveries and
  reconfigurations first, clock ticks last, so the coincidence window of
  the pairing rule never depends on queue order;
* an arrival can re-excite a node only if the node was already in its
  ground phase when the coordinate was entered, so rearm outcomes do not
  depend on the order of same-coordinate events;
* every node draws randomness from its own counter-based stream, so
  sampled lifetimes do not depend on global processing order.

The remaining freedom -- the order of same-coordinate, same-phase events
-- is resolved by a documented tiebreak over (kind, node, source) tuples.
The test harness can flip it to its mirror image; derived outputs must
not move.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction

from . import chronology, tcomputer
from .errors import (
    DanglingLink,
    DetectorWithoutClock,
    NoStandardClock,
    QueueEmpty,
    UnknownNode,
)
from .infostate import Infostate, Qword, make_qword
from .rng import SplitMix64, node_stream
from .scenario import (
    REARM_ON_ARRIVAL,
    Deterministic,
    Exponential,
    ScenarioSpec,
    canonical_digest,
)
from .tcomputer import Held, MemoryRecord
from .trace import (
    BUDGET_EXHAUSTED,
    QUIESCENT,
    DeltaLine,
    LabelRecord,
    RawEvent,
    TimelineLine,
    Trace,
)

VERSION = "0.1.0"

EXCITED = "excited"
GROUND = "ground"

TIEBREAK_DEFAULT = "default"
TIEBREAK_ALTERNATE = "alternate"


@dataclass
class FcNode:
    """An unstable node: excitable, decays after its sampled lifetime."""

    id: str
    lifetime_model: Deterministic | Exponential
    decay_energy: Fraction
    emission_template: Qword
    phase: str = GROUND
    emission_count: int = 0
    excite_count: int = 0
    phase_since: Fraction | None = None  # coordinate of the last phase flip


@dataclass
class StandardClock:
    id: str
    period: Fraction
    next_tick: int = 0


@dataclass
class DetectorNode:
    id: str
    sc_source: str
    hold_buffer: list[Held] = field(default_factory=list)
    memory_bank: list[MemoryRecord] = field(default_factory=list)


@dataclass(frozen=True, slots=True)
class Link:
    src: str
    dst: str
    length: Fraction
    speed: Fraction
    index: int

    @property
    def transit(self) -> Fraction:
        return self.length / self.speed


@dataclass(frozen=True, slots=True)
class QueuedEvent:
    kind: str  # excite | decay | deliver | tick
    node: str
    signal: Infostate | None = None
    link_index: int | None = None
    tick: int | None = None
    cause: tuple | None = None


class _ReverseOrder:
    """Mirror-image comparison wrapper for the alternate tiebreak."""

    __slots__ = ("key",)

    def __init__(self, key):
        self.key = key

    def __lt__(self, other):
        return other.key < self.key


_KIND_RANK = {"excite": 0, "decay": 1, "deliver": 2, "tick": 3}


def _event_key(ev: QueuedEvent) -> tuple:
    rank = _KIND_RANK[ev.kind]
    if ev.kind == "excite":
        if ev.cause and ev.cause[0] == "deliver":
            return (rank, ev.node, ev.cause[1], ev.cause[2], ev.cause[3])
        return (rank, ev.node, "", ev.cause[1] if ev.cause else 0, -1)
    if ev.kind == "decay":
        return (rank, ev.node, "", 0, 0)
    if ev.kind == "deliver":
        return (rank, ev.node, ev.signal.origin, ev.signal.emission_index,
                ev.link_index)
    return (rank, ev.node, "", ev.tick, 0)


def sample_lifetime(model: Deterministic | Exponential, rng: SplitMix64) -> Fraction:
    """Draw one lifetime; deterministic models return their duration exactly.

    Exponential draws use a 53-bit uniform u in (0, 1] and compute
    -mean*ln(u) in binary floating point, converted exactly to a
    rational afterwards; u == 1 yields exactly zero.
    """
    if isinstance(model, Deterministic):
        return model.duration
    u = rng.next_unit()
    return Fraction(-float(model.mean) * math.log(u))


class Engine:
    """Mutable run state; one instance is strictly single-threaded."""

    def __init__(self, spec: ScenarioSpec, seed: int, tiebreak: str):
        if tiebreak not in (TIEBREAK_DEFAULT, TIEBREAK_ALTERNATE):
            raise ValueError(f"unknown tiebreak {tiebreak!r}")
        self.spec = spec
        self.seed = seed
        self.tiebreak = tiebreak
        self.scenario_digest = canonical_digest(spec)
        self.nodes: dict[str, FcNode | StandardClock | DetectorNode] = {}
        self.links: list[Link] = []
        self.out_links: dict[str, list[Link]] = {}
        self.dets_of_clock: dict[str, list[str]] = {}
        self.pending: list = []
        self.step_index = 0
        self.raw_events: list[RawEvent] = []
        self.labels: list[LabelRecord] = []
        self._streams: dict[str, SplitMix64] = {}
        self._push_seq = 0
        self._now = Fraction(0)

    # -- scheduling -----------------------------------------------------------

    def push(self, coord: Fraction, ev: QueuedEvent) -> None:
        phase = 1 if ev.kind == "tick" else 0
        key = _event_key(ev)
        if self.tiebreak == TIEBREAK_ALTERNATE:
            key = _ReverseOrder(key)
        heapq.heappush(self.pending, (coord, phase, key, self._push_seq, ev))
        self._push_seq += 1

    def _log(self, kind: str, node: str, **fields) -> None:
        self.raw_events.append(
            RawEvent(self.step_index, self._now, kind, node, **fields)
        )

    # -- dispatch -------------------------------------------------------------

    def step(self) -> tuple[RawEvent, ...]:
        """Process exactly one pending event; returns its log records."""
        if not self.pending:
            raise QueueEmpty("no pending events")
        before = len(self.raw_events)
        coord, _, _, _, ev = heapq.heappop(self.pending)
        self._now = coord
        handler = getattr(self, f"_on_{ev.kind}")
        handler(coord, ev)
        self.step_index += 1
        return tuple(self.raw_events[before:])

    def _try_excite(self, fc: FcNode, coord: Fraction, cause: tuple) -> None:
        # effective only if the node entered this coordinate already in
        # ground phase; same-coordinate order must not change the outcome
        if fc.phase != GROUND:
            return
        if fc.phase_since is not None and fc.phase_since >= coord:
            return
        lifetime = sample_lifetime(fc.lifetime_model, self._streams[fc.id])
        fc.phase = EXCITED
        fc.phase_since = coord
        self._log("excite", fc.id, seq=fc.excite_count, cause=cause)
        fc.excite_count += 1
        self.push(coord + lifetime, QueuedEvent("decay", fc.id))

    def _on_excite(self, coord: Fraction, ev: QueuedEvent) -> None:
        node = self.nodes[ev.node]
        if isinstance(node, FcNode):
            self._try_excite(node, coord, ev.cause)

    def _on_decay(self, coord: Fraction, ev: QueuedEvent) -> None:
        fc = self.nodes[ev.node]
        signal = tcomputer.decay_fc(fc)
        fc.phase_since = coord
        self._log("decay", fc.id, emission=signal.emission_index)
        self._emit(coord, fc.id, signal)

    def _emit(self, coord: Fraction, origin: str, signal: Infostate) -> None:
        for link in self.out_links.get(origin, []):
            self.push(
                coord + link.transit,
                QueuedEvent("deliver", link.dst, signal=signal,
                            link_index=link.index),
            )

    def _on_deliver(self, coord: Fraction, ev: QueuedEvent) -> None:
        link = self.links[ev.link_index]
        delivered = replace(ev.signal, hops=ev.signal.hops + 1)
        self._log(
            "deliver", ev.node, origin=delivered.origin,
            emission=delivered.emission_index, link_index=ev.link_index,
        )
        node = self.nodes[ev.node]
        if isinstance(node, DetectorNode):
            tcomputer.detect(
                node, delivered,
                source_coord=coord - link.transit, link_index=ev.link_index,
            )
        elif isinstance(node, FcNode):
            if self.spec.rearm == REARM_ON_ARRIVAL:
                self._try_excite(
                    node, coord,
                    ("deliver", delivered.origin, delivered.emission_index,
                     ev.link_index),
                )
        # standard clocks absorb incoming signals

    def _on_tick(self, coord: Fraction, ev: QueuedEvent) -> None:
        sc = self.nodes[ev.node]
        index, signal = tcomputer.tick_sc(sc)
        self._log("tick", sc.id, tick=index)
        for det_id in self.dets_of_clock.get(sc.id, []):
            det = self.nodes[det_id]
            for record, held in tcomputer.pair_on_tick(det, signal, sc.period):
                self.labels.append(LabelRecord(
                    det.id, record.addr, record.label.tick,
                    record.origin, record.emission, record.event,
                ))
                self._log(
                    "label", det.id, origin=record.origin,
                    emission=record.emission, link_index=held.link_index,
                    tick=index, addr=record.addr,
                    label_tick=record.label.tick, clock=sc.id,
                )
        self._emit(coord, sc.id, signal)
        self.push(coord + sc.period, QueuedEvent("tick", sc.id, tick=index + 1))

    # -- run state ------------------------------------------------------------

    def is_quiescent(self) -> bool:
        """Only future clock ticks pending and nothing held anywhere."""
        for node in self.nodes.values():
            if isinstance(node, DetectorNode) and node.hold_buffer:
                return False
        return all(entry[4].kind == "tick" for entry in self.pending)

    def inactive_nodes(self) -> frozenset[str]:
        """Nodes with no pending activity (the network's idle remainder)."""
        active = {entry[4].node for entry in self.pending}
        for node in self.nodes.values():
            if isinstance(node, FcNode) and node.phase == EXCITED:
                active.add(node.id)
            if isinstance(node, DetectorNode) and node.hold_buffer:
                active.add(node.id)
        return frozenset(self.nodes) - active

    def banks(self) -> dict[str, list[MemoryRecord]]:
        return {
            node.id: node.memory_bank
            for node in self.nodes.values()
            if isinstance(node, DetectorNode)
        }


def build_network(spec: ScenarioSpec, *, seed: int = 0,
                  tiebreak: str = TIEBREAK_DEFAULT) -> Engine:
    """Validate a scenario and seed the event queue for coordinate zero."""
    ids = (
        {c.id for c in spec.clocks}
        | {f.id for f in spec.fcs}
        | {d.id for d in spec.detectors}
    )
    for link in spec.links:
        if link.src not in ids or link.dst not in ids:
            raise DanglingLink(f"link {link.src} -> {link.dst} names unknown nodes")
    clock_ids = {c.id for c in spec.clocks}
    for det in spec.detectors:
        if det.clock not in clock_ids:
            raise DetectorWithoutClock(f"{det.id} references {det.clock}")
    fc_ids = {f.id for f in spec.fcs}
    for excite in spec.excites:
        if excite.node not in fc_ids:
            raise UnknownNode(f"cannot excite unknown node {excite.node}")
    if not spec.clocks:
        raise NoStandardClock("a scenario needs at least one standard clock")

    engine = Engine(spec, seed, tiebreak)
    for clock in spec.clocks:
        engine.nodes[clock.id] = StandardClock(clock.id, clock.period)
    for fc in spec.fcs:
        engine.nodes[fc.id] = FcNode(
            fc.id, fc.lifetime, fc.energy, make_qword(fc.emit, fc.id),
        )
        engine._streams[fc.id] = node_stream(seed, fc.id)
    for det in spec.detectors:
        engine.nodes[det.id] = DetectorNode(det.id, det.clock)
        engine.dets_of_clock.setdefault(det.clock, []).append(det.id)
    for dets in engine.dets_of_clock.values():
        dets.sort()
    for index, decl in enumerate(spec.links):
        link = Link(decl.src, decl.dst, decl.length, decl.speed, index)
        engine.links.append(link)
        engine.out_links.setdefault(decl.src, []).append(link)

    for clock in spec.clocks:
        engine.push(Fraction(0), QueuedEvent("tick", clock.id, tick=0))
    for i, excite in enumerate(spec.excites):
        engine.push(excite.at, QueuedEvent("excite", excite.node,
                                           cause=("scenario", i)))
    return engine


def finalize(engine: Engine, reason: str) -> Trace:
    """Assemble the canonical trace from a finished or stopped run."""
    banks = engine.banks()
    labels = tuple(sorted(engine.labels, key=lambda r: (r.detector, r.addr)))
    deltas = []
    timeline = []
    for det_id in sorted(banks):
        bank = banks[det_id]
        deltas.extend(
            DeltaLine(det_id, d) for d in tcomputer.consecutive_deltas(bank)
        )
        timeline.extend(
            TimelineLine(det_id, p) for p in chronology.build_timeline(bank)
        )
    arrows = tuple(chronology.build_arrows(banks))
    spec = engine.spec
    return Trace(
        version=VERSION,
        scenario=engine.scenario_digest,
        seed=engine.seed,
        rearm=spec.rearm,
        clocks=tuple((c.id, c.period) for c in spec.clocks),
        detectors=tuple((d.id, d.clock) for d in spec.detectors),
        events=tuple(engine.raw_events),
        labels=labels,
        deltas=tuple(deltas),
        arrows=arrows,
        timeline=tuple(timeline),
        frames=(),
        reason=reason,
        steps=engine.step_index,
    )


def run_until_quiescent(engine: Engine, max_steps: int = 100_000) -> Trace:
    """Drive the engine until only future ticks remain, or the budget ends."""
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    reason = BUDGET_EXHAUSTED
    while True:
        if not engine.pending:
            reason = QUIESCENT
            break
        engine.step()
        if engine.is_quiescent():
            reason = QUIESCENT
            break
        if engine.step_index >= max_steps:
            break
    return finalize(engine, reason)
