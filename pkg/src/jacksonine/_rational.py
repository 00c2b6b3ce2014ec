"""Coercions between exact rationals and floats."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

Number = Fraction | float


def as_param(value) -> Number:
    """Return ``value`` as a Fraction when it is exactly rational, else a float.

    Floats are kept exact when they round-trip through a small-denominator
    Fraction, so ``0.5`` becomes ``1/2`` and ``1/3`` (a float) becomes ``1/3``.
    Strings accept ``"p/q"`` and decimal notation.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not parameters")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    x = float(value)
    fr = Fraction(x).limit_denominator(10**6)
    if float(fr) == x:
        return fr
    return x


def parse_number(text: str) -> Number:
    """Parse ``"3/2"``, ``"0.75"`` or ``"1e-3"``; rationals stay exact."""
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    try:
        return Fraction(text)
    except ValueError:
        return float(text)


def is_exact(*values) -> bool:
    return all(isinstance(v, (Fraction, int)) for v in values)


def to_float(value) -> float:
    return float(value)


def rational_str(value) -> str:
    fr = Fraction(value)
    return f"{fr.numerator}/{fr.denominator}"
