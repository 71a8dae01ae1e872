"""Deterministic, platform-independent pseudo-random streams.

The generator is SplitMix64 (Steele, Lea & Flood's mixing constants): a
64-bit counter scrambled through two xor-shift-multiply rounds.  It is
implemented directly so that every platform and Python build produces the
same stream for the same seed.

Each node that needs randomness owns a private stream derived from the
run seed and its node id (FNV-1a hash), so the values a node draws do not
depend on the order in which unrelated events happen to be processed.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h = (h ^ byte) * _FNV_PRIME & _MASK64
    return h


class SplitMix64:
    """The documented 64-bit generator used everywhere in the engine."""

    def __init__(self, seed: int):
        self._state = seed & _MASK64

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix(self._state)

    def next_unit(self) -> float:
        """A 53-bit uniform in (0, 1] -- never zero, can be exactly one."""
        return ((self.next_u64() >> 11) + 1) / (1 << 53)


def node_stream(seed: int, node_id: str) -> SplitMix64:
    """Private stream for one node, independent of processing order."""
    return SplitMix64(_mix(seed & _MASK64 ^ fnv1a64(node_id)))
