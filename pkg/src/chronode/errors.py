"""Exception hierarchy for the chronode package."""

from __future__ import annotations


class ChronodeError(Exception):
    """Base class for every error raised by this package."""


# -- qword algebra ----------------------------------------------------------

class EmptyQword(ChronodeError):
    """A qword must hold at least one slot."""


class DuplicateTickSlot(ChronodeError):
    """A qword may carry at most one tick-label slot."""


class MissingSlot(ChronodeError):
    """No slot with the requested tag."""


class AmbiguousSlot(ChronodeError):
    """More than one slot matches the requested tag."""


# -- network / engine -------------------------------------------------------

class DanglingLink(ChronodeError):
    """A link references a node id that was never declared."""


class DetectorWithoutClock(ChronodeError):
    """A detector's clock reference does not name a standard clock."""


class NoStandardClock(ChronodeError):
    """A scenario needs at least one standard clock."""


class UnknownNode(ChronodeError):
    """A directive references a node id that was never declared."""


class QueueEmpty(ChronodeError):
    """step() called with no pending events."""


class NotExcited(ChronodeError):
    """Decay dispatched on a ground-phase clock node."""


# -- detector pipeline ------------------------------------------------------

class ChannelMismatch(ChronodeError):
    """A tick-bearing qword arrived on a detector's signal channel."""


class ForeignClock(ChronodeError):
    """A tick from a clock other than the detector's paired one."""


class AddressOutOfRange(ChronodeError):
    """Memory address not present in the bank."""


class MalformedPair(ChronodeError):
    """Comparison qword does not hold exactly two tick values."""


# -- chronology -------------------------------------------------------------

class UnknownEvent(ChronodeError):
    """Timeline entry has no counterpart in the happens-before relation."""


# -- observer ---------------------------------------------------------------

class UnsortedStream(ChronodeError):
    """Tick stream must be sorted ascending."""


class ZeroReference(ChronodeError):
    """The normal-reference count must be positive."""


# -- scenario / trace I/O ---------------------------------------------------

class ScenarioSyntaxError(ChronodeError):
    """Malformed scenario text; carries line and column."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownDirective(ScenarioSyntaxError):
    """Directive word not part of the scenario grammar."""


class DuplicateId(ScenarioSyntaxError):
    """Node id declared more than once."""


class UnknownDetector(ChronodeError):
    """Query names a detector absent from the trace."""


class TraceParseError(ChronodeError):
    """Malformed trace file."""
