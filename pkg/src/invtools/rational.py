"""Exact rational helpers shared by every module: parsing, printing, bit size."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"num/den"``, ``"num"`` or an int into a Fraction.

    Decimal strings and floats are refused so that nothing inexact ever
    enters a circuit or tensor.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not an exact rational literal: {value!r}")
        q = Fraction(value.replace(" ", ""))
        return q
    raise TypeError(f"cannot interpret {type(value).__name__} as an exact rational")


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _bits(k: int) -> int:
    return max(1, abs(k).bit_length())


def bit_complexity(q: Fraction | int) -> int:
    """Bits of the numerator plus bits of the denominator.

    Integers carry no denominator, so ``bit_complexity(3) == 2`` while
    ``bit_complexity(Fraction(1, 2)) == 3``.
    """
    q = Fraction(q)
    b = _bits(q.numerator)
    if q.denominator != 1:
        b += _bits(q.denominator)
    return b
