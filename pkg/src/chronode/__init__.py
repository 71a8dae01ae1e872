"""chronode: a causal-network simulator in which time is an output.

Unstable nodes decay and emit signals; detectors hold arrivals until the
next standard-clock tick and store tick-labeled records; elapsed times,
timelines and arrows of time are computed from the stored labels.  No
time coordinate is ever an input, and the engine's internal scheduling
order is quarantined from every derived result.
"""

from .chronology import (
    ArrowOfTime,
    HappensBefore,
    TimelinePoint,
    build_arrows,
    build_timeline,
    happens_before,
    is_linear_extension,
)
from .infostate import (
    Infostate,
    Qubit,
    Qword,
    concat,
    make_qword,
    qword_len,
    read_slot,
)
from .network import (
    Engine,
    build_network,
    finalize,
    run_until_quiescent,
    sample_lifetime,
)
from .observer import AttentionFrame, perceive, subjective_rate
from .scenario import (
    Deterministic,
    Exponential,
    ScenarioSpec,
    canonical_digest,
    emit_scenario,
    mirror_scenario,
    parse_scenario,
)
from .tcomputer import (
    DeltaRecord,
    MemoryRecord,
    TimeLabel,
    detect,
    decay_fc,
    fetch_pair,
    pair_on_tick,
    subtract_labels,
    tick_sc,
    time_operator,
)
from .trace import Trace, parse_trace, render_trace

__version__ = "0.1.0"

__all__ = [
    "ArrowOfTime", "AttentionFrame", "DeltaRecord", "Deterministic",
    "Engine", "Exponential", "HappensBefore", "Infostate", "MemoryRecord",
    "Qubit", "Qword", "ScenarioSpec", "TimeLabel", "TimelinePoint", "Trace",
    "build_arrows", "build_network", "build_timeline", "canonical_digest",
    "concat", "decay_fc", "detect", "emit_scenario", "fetch_pair",
    "finalize", "happens_before", "is_linear_extension", "make_qword",
    "mirror_scenario", "pair_on_tick", "parse_scenario", "parse_trace",
    "perceive", "qword_len", "read_slot", "render_trace",
    "run_until_quiescent", "sample_lifetime", "subjective_rate",
    "subtract_labels", "tick_sc", "time_operator",
]
