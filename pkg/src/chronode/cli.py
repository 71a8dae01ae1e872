"""Command-line interface: run scenarios, query traces.

Exit codes: 0 on a quiescent run (and successful queries), 2 when the
step budget ran out, 1 on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import chronology, network, observer, tcomputer
from .errors import ChronodeError, UnknownDetector
from .rationals import format_rational, parse_rational
from .scenario import parse_scenario
from .tcomputer import MemoryRecord, TimeLabel
from .trace import (
    BUDGET_EXHAUSTED,
    Trace,
    parse_json_lines,
    parse_trace,
    render_json_lines,
    render_trace,
)


def _load_trace(path: str) -> Trace:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return parse_json_lines(text)
    return parse_trace(text)


def _bank_from_trace(trace: Trace, detector: str) -> list[MemoryRecord]:
    detectors = dict(trace.detectors)
    if detector not in detectors:
        raise UnknownDetector(f"no detector {detector!r} in trace")
    clock = detectors[detector]
    return [
        MemoryRecord(rec.addr, TimeLabel(rec.tick, clock), rec.event, rec.origin)
        for rec in trace.bank_labels(detector)
    ]


def cmd_run(args) -> int:
    spec = parse_scenario(Path(args.scenario).read_text(encoding="utf-8"))
    engine = network.build_network(spec, seed=args.seed, tiebreak=args.tiebreak)
    max_steps = args.max_steps
    if max_steps is None:
        max_steps = spec.budget if spec.budget is not None else 100_000
    trace = network.run_until_quiescent(engine, max_steps)
    if args.format == "json-lines":
        text = render_json_lines(trace, include_events=args.debug_substrate)
    else:
        text = render_trace(trace, include_events=args.debug_substrate)
    if args.trace:
        Path(args.trace).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 2 if trace.reason == BUDGET_EXHAUSTED else 0


def cmd_delta(args) -> int:
    trace = _load_trace(args.trace)
    bank = _bank_from_trace(trace, args.detector)
    paired = tcomputer.fetch_pair(bank, args.from_addr, args.to_addr)
    delta = tcomputer.subtract_labels(paired, args.from_addr, args.to_addr)
    seconds = tcomputer.time_operator(delta, trace.period_of(args.detector))
    print(
        f"DELTA {args.detector} {delta.from_addr} {delta.to_addr} "
        f"{delta.signed_ticks:+d} {delta.magnitude_ticks} {delta.orientation}"
    )
    print(f"t_classical {format_rational(seconds)} s")
    return 0


def cmd_arrows(args) -> int:
    trace = _load_trace(args.trace)
    banks = {det: _bank_from_trace(trace, det) for det, _ in trace.detectors}
    for arrow in chronology.build_arrows(banks):
        if arrow.kind == chronology.QAT:
            print(f"ARROW QAT fc:{arrow.origin} -> mem:{arrow.detector}/{arrow.to_addr}")
        else:
            print(
                f"ARROW CAT mem:{arrow.detector}/{arrow.from_addr}"
                f" -> mem:{arrow.detector}/{arrow.to_addr}"
            )
    for det in sorted(banks):
        for point in chronology.build_timeline(banks[det]):
            suffix = " simultaneous" if point.simultaneous else ""
            print(f"TIMELINE {det} {point.addr} {point.tick}{suffix}")
    return 0


def _parse_stream(text: str) -> list[int]:
    text = text.strip()
    if ".." in text:
        lo, _, hi = text.partition("..")
        return list(range(int(lo), int(hi) + 1))
    if not text:
        return []
    return [int(tok) for tok in text.split(",")]


def cmd_subjective(args) -> int:
    if args.stream is not None:
        ticks = _parse_stream(args.stream)
    else:
        if not args.trace or not args.detector:
            raise ChronodeError("need either --stream or a trace with --detector")
        trace = _load_trace(args.trace)
        if args.detector not in dict(trace.detectors):
            raise UnknownDetector(f"no detector {args.detector!r} in trace")
        ticks = sorted(rec.tick for rec in trace.bank_labels(args.detector))
    frames = observer.perceive(ticks, parse_rational(args.width), args.reference)
    for frame in frames:
        rate = observer.subjective_rate(frame.detected, args.reference)
        print(
            f"FRAME {frame.cycle_index} {frame.detected} {frame.regime} "
            f"{format_rational(rate)}"
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronode",
        description="causal-network simulator that derives time instead of consuming it",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario to quiescence")
    run.add_argument("scenario")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--max-steps", type=int, default=None)
    run.add_argument("--trace", default=None, help="output path (default stdout)")
    run.add_argument("--format", choices=["text", "json-lines"], default="text")
    run.add_argument("--debug-substrate", action="store_true",
                     help="include the EVENT section (diagnostic only)")
    run.add_argument("--tiebreak", choices=["default", "alternate"],
                     default="default", help=argparse.SUPPRESS)
    run.set_defaults(func=cmd_run)

    delta = sub.add_parser("delta", help="elapsed time between two records")
    delta.add_argument("trace")
    delta.add_argument("--detector", required=True)
    delta.add_argument("--from", dest="from_addr", type=int, required=True)
    delta.add_argument("--to", dest="to_addr", type=int, required=True)
    delta.set_defaults(func=cmd_delta)

    arrows = sub.add_parser("arrows", help="arrows of time and timelines")
    arrows.add_argument("trace")
    arrows.set_defaults(func=cmd_arrows)

    subj = sub.add_parser("subjective", help="attention frames over a tick stream")
    subj.add_argument("trace", nargs="?", default=None)
    subj.add_argument("--detector", default=None)
    subj.add_argument("--stream", default=None,
                      help="explicit ticks: '0..15' or '1,4,9'")
    subj.add_argument("--width", required=True, help="cycle width in ticks")
    subj.add_argument("--reference", type=int, required=True,
                      help="detections per cycle that feel normal")
    subj.set_defaults(func=cmd_subjective)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ChronodeError as exc:
        print(f"chronode: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"chronode: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
