"""Exact arithmetic in the circle group written additively as R/Z.

Every element is a reduced rational in [0, 1).  The distinguished closed
quarter-arc around 0 (the image of [-1/4, 1/4]) is the membership test that
the whole certification story rests on, so it is decided with integer
comparisons only, never floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from .errors import KindMismatch, ValidationError

RationalLike = "Fraction | int | str | tuple[int, int] | UnitRational"


class UnitRational:
    """A point of R/Z stored as a reduced fraction num/den with 0 <= num < den.

    Instances are immutable and hashable; construction canonicalizes.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int):
        if den == 0:
            raise ValidationError("denominator must be nonzero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name: str, value: object):
        raise AttributeError("UnitRational is immutable")

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, UnitRational)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"UnitRational({self.num}, {self.den})"

    def to_string(self) -> str:
        return f"{self.num}/{self.den}"

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def is_zero(self) -> bool:
        return self.num == 0


ZERO = UnitRational(0, 1)


def phi(r: object) -> UnitRational:
    """Reduce a rational number mod 1 onto the canonical fundamental domain."""
    if isinstance(r, UnitRational):
        return r
    if isinstance(r, int):
        return ZERO
    if isinstance(r, Fraction):
        return UnitRational(r.numerator, r.denominator)
    if isinstance(r, str):
        f = Fraction(r)
        return UnitRational(f.numerator, f.denominator)
    if isinstance(r, tuple) and len(r) == 2:
        return UnitRational(r[0], r[1])
    raise KindMismatch(f"cannot interpret {r!r} as a rational mod 1")


def circle_add(x: UnitRational, y: UnitRational) -> UnitRational:
    return UnitRational(x.num * y.den + y.num * x.den, x.den * y.den)


def circle_neg(x: UnitRational) -> UnitRational:
    return UnitRational(-x.num, x.den)


def circle_scale(k: int, x: UnitRational) -> UnitRational:
    return UnitRational(k * x.num, x.den)


def in_tplus(x: UnitRational) -> bool:
    """Membership in the closed arc phi([-1/4, 1/4]).

    The signed representative of num/den in (-1/2, 1/2] lies in [-1/4, 1/4]
    exactly when num/den <= 1/4 or num/den >= 3/4; both bounds are inclusive
    and checked by cross-multiplication.
    """
    return 4 * x.num <= x.den or 4 * x.num >= 3 * x.den


def element_order(x: UnitRational) -> int:
    """Order of x in R/Z; the canonical denominator, 1 for the identity."""
    return x.den
