"""Trace files: the replayable derived output of a run.

One record per line, first token names the section.  Rationals print as
``p/q`` (or a bare integer) so traces are bit-exact and never touch
floating point.  Sections appear in a fixed order:

    META      tool version, scenario digest, seed, rearm policy, the
              clock periods and detector wiring needed for replay
    EVENT     substrate log (step index, hidden coordinate, kind); only
              written with the debug flag and never part of comparisons
    LABEL     <det> <addr> <tick> <origin> <emission> <event-qword>
    DELTA     <det> <from> <to> <signed> <magnitude> <orientation>
    ARROW     QAT fc:<origin> -> mem:<det>/<addr>
              CAT mem:<det>/<from> -> mem:<det>/<to>
    TIMELINE  <det> <addr> <tick> [simultaneous]
    FRAME     <index> <detected> <regime> <rate>
    FOOTER    <termination-reason> <step-count>

The derived sections (LABEL, DELTA, ARROW, TIMELINE, FRAME) contain tick
counts and addresses only -- never scheduling coordinates or step
indices.  The json-lines form carries one object per text record with
the same field values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .chronology import CAT, QAT, ArrowOfTime, TimelinePoint
from .errors import TraceParseError
from .infostate import Qword, from_text, to_text
from .rationals import format_rational, parse_rational
from .tcomputer import DeltaRecord

DERIVED_SECTIONS = ("LABEL", "DELTA", "ARROW", "TIMELINE", "FRAME")

QUIESCENT = "quiescent"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True, slots=True)
class RawEvent:
    """One substrate-log entry; diagnostic only."""

    step: int
    coord: Fraction
    kind: str
    node: str
    origin: str | None = None
    emission: int | None = None
    link_index: int | None = None
    tick: int | None = None
    addr: int | None = None
    label_tick: int | None = None
    seq: int | None = None
    clock: str | None = None
    cause: tuple | None = None


@dataclass(frozen=True, slots=True)
class LabelRecord:
    detector: str
    addr: int
    tick: int
    origin: str
    emission: int
    event: Qword


@dataclass(frozen=True, slots=True)
class DeltaLine:
    detector: str
    delta: DeltaRecord


@dataclass(frozen=True, slots=True)
class TimelineLine:
    detector: str
    point: TimelinePoint


@dataclass(frozen=True, slots=True)
class FrameLine:
    index: int
    detected: int
    regime: str
    rate: Fraction


@dataclass(frozen=True, slots=True)
class Trace:
    version: str
    scenario: str
    seed: int
    rearm: str
    clocks: tuple[tuple[str, Fraction], ...]
    detectors: tuple[tuple[str, str], ...]
    events: tuple[RawEvent, ...] = ()
    labels: tuple[LabelRecord, ...] = ()
    deltas: tuple[DeltaLine, ...] = ()
    arrows: tuple[ArrowOfTime, ...] = ()
    timeline: tuple[TimelineLine, ...] = ()
    frames: tuple[FrameLine, ...] = ()
    reason: str = QUIESCENT
    steps: int = 0

    def period_of(self, detector: str) -> Fraction:
        clocks = dict(self.clocks)
        for det, clock in self.detectors:
            if det == detector:
                return clocks[clock]
        raise KeyError(detector)

    def bank_labels(self, detector: str) -> list[LabelRecord]:
        return sorted(
            (rec for rec in self.labels if rec.detector == detector),
            key=lambda rec: rec.addr,
        )


# -- text form ----------------------------------------------------------------

def _arrow_line(arrow: ArrowOfTime) -> str:
    if arrow.kind == QAT:
        return (
            f"ARROW QAT fc:{arrow.origin} -> mem:{arrow.detector}/{arrow.to_addr}"
        )
    return (
        f"ARROW CAT mem:{arrow.detector}/{arrow.from_addr}"
        f" -> mem:{arrow.detector}/{arrow.to_addr}"
    )


def _event_line(ev: RawEvent) -> str:
    parts = [
        "EVENT", str(ev.step), format_rational(ev.coord), ev.kind, ev.node,
    ]
    for key in ("origin", "emission", "link_index", "tick", "addr",
                "label_tick", "seq", "clock"):
        value = getattr(ev, key)
        if value is not None:
            parts.append(f"{key}={value}")
    if ev.cause is not None:
        parts.append("cause=" + "/".join(str(c) for c in ev.cause))
    return " ".join(parts)


def render_trace(trace: Trace, include_events: bool = False) -> str:
    lines = [
        f"META version {trace.version}",
        f"META scenario {trace.scenario}",
        f"META seed {trace.seed}",
        f"META rearm {trace.rearm}",
    ]
    for clock, period in trace.clocks:
        lines.append(f"META clock {clock} {format_rational(period)}")
    for det, clock in trace.detectors:
        lines.append(f"META detector {det} {clock}")
    if include_events:
        lines.extend(_event_line(ev) for ev in trace.events)
    for rec in trace.labels:
        lines.append(
            f"LABEL {rec.detector} {rec.addr} {rec.tick} "
            f"{rec.origin} {rec.emission} {to_text(rec.event)}"
        )
    for line in trace.deltas:
        d = line.delta
        lines.append(
            f"DELTA {line.detector} {d.from_addr} {d.to_addr} "
            f"{d.signed_ticks} {d.magnitude_ticks} {d.orientation}"
        )
    lines.extend(_arrow_line(a) for a in trace.arrows)
    for tl in trace.timeline:
        suffix = " simultaneous" if tl.point.simultaneous else ""
        lines.append(f"TIMELINE {tl.detector} {tl.point.addr} {tl.point.tick}{suffix}")
    for fr in trace.frames:
        lines.append(
            f"FRAME {fr.index} {fr.detected} {fr.regime} {format_rational(fr.rate)}"
        )
    lines.append(f"FOOTER {trace.reason} {trace.steps}")
    return "\n".join(lines) + "\n"


def _parse_mem_ref(token: str) -> tuple[str, int]:
    if not token.startswith("mem:") or "/" not in token:
        raise TraceParseError(f"malformed memory reference {token!r}")
    det, _, addr = token[4:].rpartition("/")
    return det, int(addr)


def _parse_event_line(tokens: list[str]) -> RawEvent:
    step, coord, kind, node = tokens[0], tokens[1], tokens[2], tokens[3]
    fields: dict = {}
    for token in tokens[4:]:
        key, _, value = token.partition("=")
        if key == "cause":
            parts = value.split("/")
            fields["cause"] = (parts[0],) + tuple(
                int(p) if p.lstrip("-").isdigit() else p for p in parts[1:]
            )
        elif key in ("origin", "clock"):
            fields[key] = value
        else:
            fields[key] = int(value)
    return RawEvent(int(step), parse_rational(coord), kind, node, **fields)


def parse_trace(text: str) -> Trace:
    meta: dict = {"clocks": [], "detectors": []}
    events, labels, deltas, arrows, timeline, frames = [], [], [], [], [], []
    reason, steps = QUIESCENT, 0
    try:
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            tokens = line.split()
            section, args = tokens[0], tokens[1:]
            if section == "META":
                key = args[0]
                if key == "clock":
                    meta["clocks"].append((args[1], parse_rational(args[2])))
                elif key == "detector":
                    meta["detectors"].append((args[1], args[2]))
                elif key in ("version", "scenario", "rearm"):
                    meta[key] = args[1]
                elif key == "seed":
                    meta["seed"] = int(args[1])
                else:
                    raise TraceParseError(f"unknown META key {key!r}")
            elif section == "EVENT":
                events.append(_parse_event_line(args))
            elif section == "LABEL":
                labels.append(LabelRecord(
                    args[0], int(args[1]), int(args[2]), args[3], int(args[4]),
                    from_text(args[5]),
                ))
            elif section == "DELTA":
                deltas.append(DeltaLine(args[0], DeltaRecord(
                    int(args[1]), int(args[2]), int(args[3]), int(args[4]), args[5],
                )))
            elif section == "ARROW":
                kind = args[0]
                if kind == QAT:
                    if not args[1].startswith("fc:") or args[2] != "->":
                        raise TraceParseError(f"malformed arrow: {line!r}")
                    det, addr = _parse_mem_ref(args[3])
                    arrows.append(ArrowOfTime(QAT, det, addr, origin=args[1][3:]))
                elif kind == CAT:
                    src_det, src_addr = _parse_mem_ref(args[1])
                    det, addr = _parse_mem_ref(args[3])
                    if args[2] != "->" or src_det != det:
                        raise TraceParseError(f"malformed arrow: {line!r}")
                    arrows.append(ArrowOfTime(CAT, det, addr, from_addr=src_addr))
                else:
                    raise TraceParseError(f"unknown arrow kind {kind!r}")
            elif section == "TIMELINE":
                simultaneous = len(args) > 3 and args[3] == "simultaneous"
                timeline.append(TimelineLine(
                    args[0], TimelinePoint(int(args[1]), int(args[2]), simultaneous),
                ))
            elif section == "FRAME":
                frames.append(FrameLine(
                    int(args[0]), int(args[1]), args[2], parse_rational(args[3]),
                ))
            elif section == "FOOTER":
                reason, steps = args[0], int(args[1])
            else:
                raise TraceParseError(f"unknown section {section!r}")
        return Trace(
            version=meta["version"], scenario=meta["scenario"],
            seed=meta["seed"], rearm=meta["rearm"],
            clocks=tuple(meta["clocks"]), detectors=tuple(meta["detectors"]),
            events=tuple(events), labels=tuple(labels), deltas=tuple(deltas),
            arrows=tuple(arrows), timeline=tuple(timeline), frames=tuple(frames),
            reason=reason, steps=steps,
        )
    except TraceParseError:
        raise
    except (KeyError, IndexError, ValueError, ZeroDivisionError) as exc:
        raise TraceParseError(f"malformed trace: {exc}") from exc


# -- json-lines form ------------------------------------------------------------

def _json_records(trace: Trace, include_events: bool) -> list[dict]:
    records: list[dict] = [
        {"type": "meta", "key": "version", "value": trace.version},
        {"type": "meta", "key": "scenario", "value": trace.scenario},
        {"type": "meta", "key": "seed", "value": trace.seed},
        {"type": "meta", "key": "rearm", "value": trace.rearm},
    ]
    for clock, period in trace.clocks:
        records.append({"type": "meta", "key": "clock", "id": clock,
                        "period": format_rational(period)})
    for det, clock in trace.detectors:
        records.append({"type": "meta", "key": "detector", "id": det, "clock": clock})
    if include_events:
        for ev in trace.events:
            rec = {"type": "event", "step": ev.step,
                   "coord": format_rational(ev.coord), "kind": ev.kind,
                   "node": ev.node}
            for key in ("origin", "emission", "link_index", "tick", "addr",
                        "label_tick", "seq", "clock"):
                value = getattr(ev, key)
                if value is not None:
                    rec[key] = value
            if ev.cause is not None:
                rec["cause"] = list(ev.cause)
            records.append(rec)
    for rec in trace.labels:
        records.append({
            "type": "label", "detector": rec.detector, "addr": rec.addr,
            "tick": rec.tick, "origin": rec.origin, "emission": rec.emission,
            "event": to_text(rec.event),
        })
    for line in trace.deltas:
        d = line.delta
        records.append({
            "type": "delta", "detector": line.detector, "from": d.from_addr,
            "to": d.to_addr, "signed": d.signed_ticks,
            "magnitude": d.magnitude_ticks, "orientation": d.orientation,
        })
    for a in trace.arrows:
        rec = {"type": "arrow", "kind": a.kind, "detector": a.detector,
               "to": a.to_addr}
        if a.kind == QAT:
            rec["origin"] = a.origin
        else:
            rec["from"] = a.from_addr
        records.append(rec)
    for tl in trace.timeline:
        records.append({
            "type": "timeline", "detector": tl.detector, "addr": tl.point.addr,
            "tick": tl.point.tick, "simultaneous": tl.point.simultaneous,
        })
    for fr in trace.frames:
        records.append({
            "type": "frame", "index": fr.index, "detected": fr.detected,
            "regime": fr.regime, "rate": format_rational(fr.rate),
        })
    records.append({"type": "footer", "reason": trace.reason, "steps": trace.steps})
    return records


def render_json_lines(trace: Trace, include_events: bool = False) -> str:
    return "\n".join(
        json.dumps(rec, sort_keys=True, separators=(",", ":"))
        for rec in _json_records(trace, include_events)
    ) + "\n"


def parse_json_lines(text: str) -> Trace:
    meta: dict = {"clocks": [], "detectors": []}
    events, labels, deltas, arrows, timeline, frames = [], [], [], [], [], []
    reason, steps = QUIESCENT, 0
    try:
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            rec = json.loads(line)
            kind = rec["type"]
            if kind == "meta":
                key = rec["key"]
                if key == "clock":
                    meta["clocks"].append((rec["id"], parse_rational(rec["period"])))
                elif key == "detector":
                    meta["detectors"].append((rec["id"], rec["clock"]))
                else:
                    meta[key] = rec["value"]
            elif kind == "event":
                cause = tuple(rec["cause"]) if "cause" in rec else None
                events.append(RawEvent(
                    rec["step"], parse_rational(rec["coord"]), rec["kind"],
                    rec["node"], origin=rec.get("origin"),
                    emission=rec.get("emission"), link_index=rec.get("link_index"),
                    tick=rec.get("tick"), addr=rec.get("addr"),
                    label_tick=rec.get("label_tick"), seq=rec.get("seq"),
                    clock=rec.get("clock"), cause=cause,
                ))
            elif kind == "label":
                labels.append(LabelRecord(
                    rec["detector"], rec["addr"], rec["tick"], rec["origin"],
                    rec["emission"], from_text(rec["event"]),
                ))
            elif kind == "delta":
                deltas.append(DeltaLine(rec["detector"], DeltaRecord(
                    rec["from"], rec["to"], rec["signed"], rec["magnitude"],
                    rec["orientation"],
                )))
            elif kind == "arrow":
                if rec["kind"] == QAT:
                    arrows.append(ArrowOfTime(
                        QAT, rec["detector"], rec["to"], origin=rec["origin"],
                    ))
                else:
                    arrows.append(ArrowOfTime(
                        CAT, rec["detector"], rec["to"], from_addr=rec["from"],
                    ))
            elif kind == "timeline":
                timeline.append(TimelineLine(rec["detector"], TimelinePoint(
                    rec["addr"], rec["tick"], rec["simultaneous"],
                )))
            elif kind == "frame":
                frames.append(FrameLine(
                    rec["index"], rec["detected"], rec["regime"],
                    parse_rational(rec["rate"]),
                ))
            elif kind == "footer":
                reason, steps = rec["reason"], rec["steps"]
            else:
                raise TraceParseError(f"unknown record type {kind!r}")
        return Trace(
            version=meta["version"], scenario=meta["scenario"],
            seed=meta["seed"], rearm=meta["rearm"],
            clocks=tuple(meta["clocks"]), detectors=tuple(meta["detectors"]),
            events=tuple(events), labels=tuple(labels), deltas=tuple(deltas),
            arrows=tuple(arrows), timeline=tuple(timeline), frames=tuple(frames),
            reason=reason, steps=steps,
        )
    except TraceParseError:
        raise
    except (KeyError, IndexError, ValueError, ZeroDivisionError,
            json.JSONDecodeError) as exc:
        raise TraceParseError(f"malformed trace: {exc}") from exc


def derived_sections(text: str) -> str:
    """The golden-comparable part of a text trace."""
    keep = []
    for line in text.splitlines():
        if line.split(" ", 1)[0] in DERIVED_SECTIONS:
            keep.append(line)
    return "\n".join(keep) + "\n"
