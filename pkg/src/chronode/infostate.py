"""Qubits, qwords and qsentences: the information payloads of the network.

A *qubit* here is one tagged observable slot (an exact rational value plus
a unit string), not a two-level quantum state.  A *qword* is a nonempty
ordered sequence of slots together with provenance markers recording which
node emitted each contiguous segment.  Concatenating qwords yields longer
qwords ("qsentences") whose provenance keeps the original segment
boundaries, so downstream consumers can always name the emitting node.

Tags are plain strings.  The built-in vocabulary covers a configuration
index, the standard kinematic observables and the tick label; any other
well-formed name is a custom tag.  At most one slot per qword may carry
the tick tag, and that slot always holds a nonnegative integer number of
ticks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import AmbiguousSlot, DuplicateTickSlot, EmptyQword, MissingSlot
from .rationals import format_rational, parse_rational

CONFIG_INDEX = "n"
ENERGY = "energy"
MASS = "mass"
MOMENTUM = "momentum"
POSITION = "position"
DIRECTION = "direction"
TICK_LABEL = "tick"

BUILTIN_TAGS = frozenset(
    {CONFIG_INDEX, ENERGY, MASS, MOMENTUM, POSITION, DIRECTION, TICK_LABEL}
)

# characters with structural meaning in the textual forms
_RESERVED = set(";|[]=#: \t")


def _check_name(name: str, what: str) -> None:
    if not name or any(c in _RESERVED for c in name):
        raise ValueError(f"invalid {what}: {name!r}")


@dataclass(frozen=True, slots=True)
class Qubit:
    """One tagged observable slot."""

    tag: str
    value: Fraction
    unit: str = ""

    def __post_init__(self):
        _check_name(self.tag, "tag")
        if self.unit:
            _check_name(self.unit, "unit")
        object.__setattr__(self, "value", Fraction(self.value))
        if self.tag == TICK_LABEL:
            if self.unit != TICK_LABEL:
                raise ValueError("tick-label slots carry unit 'tick'")
            if self.value.denominator != 1 or self.value < 0:
                raise ValueError("tick-label value must be a nonnegative integer")


@dataclass(frozen=True, slots=True)
class Provenance:
    """Origin marker for one contiguous segment of a qword."""

    origin: str
    emission: int
    length: int


@dataclass(frozen=True, slots=True)
class Qword:
    slots: tuple[Qubit, ...]
    provenance: tuple[Provenance, ...]

    def __post_init__(self):
        if not self.slots:
            raise EmptyQword("qword needs at least one slot")
        if sum(p.length for p in self.provenance) != len(self.slots):
            raise ValueError("provenance segment lengths must cover the slots")
        ticks = [s for s in self.slots if s.tag == TICK_LABEL]
        if len(ticks) > 1:
            raise DuplicateTickSlot("qword already holds a tick-label slot")


@dataclass(frozen=True, slots=True)
class Infostate:
    """A traveling or resident information packet.

    `emission_index` counts the emissions of the origin node; `hops`
    increments by exactly one per link traversal.
    """

    payload: Qword
    origin: str
    emission_index: int
    hops: int = 0


def make_qword(entries: Sequence[Qubit] | Iterable[Qubit], origin: str,
               emission: int = 0) -> Qword:
    """Build a single-segment qword emitted by `origin`."""
    slots = tuple(entries)
    if not slots:
        raise EmptyQword("qword needs at least one slot")
    return Qword(slots, (Provenance(origin, emission, len(slots)),))


def concat(a: Qword, b: Qword) -> Qword:
    """Concatenate two qwords, keeping both provenance trails."""
    return Qword(a.slots + b.slots, a.provenance + b.provenance)


def read_slot(q: Qword, tag: str) -> Qubit:
    """Return the unique slot carrying `tag`."""
    found = [s for s in q.slots if s.tag == tag]
    if not found:
        raise MissingSlot(f"no slot tagged {tag!r}")
    if len(found) > 1:
        raise AmbiguousSlot(f"{len(found)} slots tagged {tag!r}")
    return found[0]


def qword_len(q: Qword) -> int:
    return len(q.slots)


# -- textual forms -----------------------------------------------------------
#
# slot        :=  tag=value  |  tag=value[unit]
# segment     :=  slot (';' slot)*
# plain form  :=  segment ('|' segment)*          (used in trace lines)
# full form   :=  origin '#' emission ':' segment, '|'-joined
#
# The plain form drops provenance (trace lines carry origin fields of
# their own); the full form round-trips exactly.

def render_qubit(slot: Qubit) -> str:
    text = f"{slot.tag}={format_rational(slot.value)}"
    if slot.unit:
        text += f"[{slot.unit}]"
    return text


def parse_qubit(text: str) -> Qubit:
    tag, eq, rest = text.partition("=")
    if not eq:
        raise ValueError(f"malformed slot: {text!r}")
    unit = ""
    if rest.endswith("]"):
        rest, bracket, unit = rest[:-1].partition("[")
        if not bracket:
            raise ValueError(f"malformed slot: {text!r}")
    return Qubit(tag, parse_rational(rest), unit)


def render_slots(q: Qword) -> str:
    """Plain form: slots joined by ';', segments joined by '|'."""
    parts = []
    start = 0
    for seg in q.provenance:
        parts.append(";".join(render_qubit(s) for s in q.slots[start:start + seg.length]))
        start += seg.length
    return "|".join(parts)


def to_text(q: Qword) -> str:
    """Full form including provenance markers; see `from_text`."""
    parts = []
    start = 0
    for seg in q.provenance:
        body = ";".join(render_qubit(s) for s in q.slots[start:start + seg.length])
        parts.append(f"{seg.origin}#{seg.emission}:{body}")
        start += seg.length
    return "|".join(parts)


def from_text(text: str) -> Qword:
    slots: list[Qubit] = []
    provenance: list[Provenance] = []
    for part in text.split("|"):
        marker, colon, body = part.partition(":")
        origin, hash_, emission = marker.partition("#")
        if not colon or not hash_:
            raise ValueError(f"malformed qword segment: {part!r}")
        seg_slots = [parse_qubit(s) for s in body.split(";")]
        slots.extend(seg_slots)
        provenance.append(Provenance(origin, int(emission), len(seg_slots)))
    return Qword(tuple(slots), tuple(provenance))
