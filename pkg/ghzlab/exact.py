# ghzlab/exact.py
"""Helpers that keep every comparison in exact rationals."""
from decimal import Decimal
from fractions import Fraction


def as_fraction(value) -> Fraction:
    """Exact rational from int, Fraction, Decimal, "num/den" or decimal text.

    Floats go through their shortest repr, so 0.1 means 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    return Fraction(str(value).strip())


def fraction_text(value) -> str:
    """'num/den' form used in every report."""
    value = as_fraction(value)
    return f"{value.numerator}/{value.denominator}"


def le_sqrt(lhs: Fraction, radicand: Fraction) -> bool:
    """lhs <= sqrt(radicand), decided without irrationals."""
    if radicand < 0:
        return False
    if lhs <= 0:
        return True
    return lhs * lhs <= radicand


def ceil_fraction(value: Fraction) -> int:
    return -((-value.numerator) // value.denominator)
