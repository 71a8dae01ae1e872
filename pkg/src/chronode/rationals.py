"""Exact rational parsing and rendering.

Every quantity in this package is a :class:`fractions.Fraction`; floats
appear only transiently inside the documented RNG.  Text forms accepted:
decimal (``1.5``), scientific (``5e-24``), integer (``3``) and explicit
ratio (``p/q``).  Rendering is canonical: an integer prints bare, anything
else prints ``p/q`` so traces never contain floating point.
"""

from __future__ import annotations

from fractions import Fraction


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
