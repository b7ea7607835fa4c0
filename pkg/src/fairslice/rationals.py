"""Parsing and formatting of exact rationals.

All quantities in this package are fractions.Fraction. Floats are rejected
at every entry point: binary floating point cannot represent most of the
values we care about, and silently accepting one would poison every exact
comparison downstream.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError

# "p/q", an optionally-signed integer, or a plain decimal. Nothing else:
# Fraction() itself also takes scientific notation, which is not part of
# the file format and stays rejected.
_RATIONAL_TEXT = re.compile(
    r"[+-]?\d+\s*/\s*\d+$|[+-]?\d+$|[+-]?\d*\.\d+$|[+-]?\d+\.\d*$"
)


def parse_rational(value: object) -> Fraction:
    """Turn JSON-ish input into an exact Fraction.

    Accepts strings ("1/3", "0.25", "2") and ints. Rejects floats and
    anything unparseable.
    """
    if isinstance(value, bool):
        raise ParseError(f"expected a rational, got boolean {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ParseError(
            f"floats are not accepted (got {value!r}); write the value as a "
            f'string like "1/3" or "0.25"'
        )
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL_TEXT.match(text):
            raise ParseError(
                f"cannot parse {value!r} as a rational: expected \"p/q\" or a "
                f"decimal string"
            )
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"cannot parse {value!r} as a rational: {exc}") from exc
    raise ParseError(f"cannot parse {type(value).__name__} as a rational")


def format_rational(value: Fraction) -> str:
    """Serialize a Fraction as "p/q", always with an explicit denominator.

    Integers come out as "2/1" and zero as "0/1" so that every emitted
    rational has one canonical shape.
    """
    return f"{value.numerator}/{value.denominator}"
