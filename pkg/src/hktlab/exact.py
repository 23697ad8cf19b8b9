"""Exact rational scalars and their wire format.

Every scalar in the engine is a plain int or a fractions.Fraction. The two
mix freely under Python's numeric tower and compare equal when they should,
so callers never need to normalize. The one trap is true division of two
bare ints (it produces a float); divide through Fraction instead.

Wire format: a rational is a JSON integer or a string "p" / "p/q" with an
optional leading minus sign and a positive denominator.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt

Scalar = int | Fraction

_WIRE_RE = re.compile(r"^-?\d+(?:/\d+)?$")


def parse_scalar(raw: object) -> Fraction:
    """Parse a wire-format rational. Rejects floats and malformed strings."""
    if isinstance(raw, bool):
        raise ValueError(f"not a rational: {raw!r}")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str) and _WIRE_RE.match(raw):
        try:
            return Fraction(raw)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator: {raw!r}") from None
    raise ValueError(f"not a rational: {raw!r}")


def format_scalar(value: Scalar) -> str:
    """Render a scalar in wire format ("p" or "p/q", lowest terms)."""
    return str(Fraction(value))


def exact_sqrt(value: Scalar) -> Fraction:
    """Square root of a nonnegative rational, exact or bust.

    Raises ValueError when the root is irrational; the engine never
    approximates.
    """
    q = Fraction(value)
    if q < 0:
        raise ValueError(f"square root of negative value {q}")
    num_root = isqrt(q.numerator)
    den_root = isqrt(q.denominator)
    if num_root * num_root != q.numerator or den_root * den_root != q.denominator:
        raise ValueError(f"no exact rational square root of {q}")
    return Fraction(num_root, den_root)
