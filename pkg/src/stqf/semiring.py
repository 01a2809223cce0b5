"""Exact supertropical scalars over an ordered abelian value group.

The value group is written additively: the multiplicative unit of the
classical presentation corresponds to the value 0, products of group
elements become sums of values, and quotients become differences.  An
element of the semiring is either zero, or a tangible or ghost copy of a
group value.  All arithmetic is exact (ints and fractions, no floats).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import ParseError, PreconditionError

Rational = Union[int, Fraction]

ZERO_SORT = 0
TANGIBLE = 1
GHOST = 2

_SORT_NAMES = {ZERO_SORT: "zero", TANGIBLE: "tangible", GHOST: "ghost"}


def _norm(v: Rational) -> Rational:
    """Keep integral values as plain ints so hot paths stay on int arithmetic."""
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return int(v)
        return v
    return v


@dataclass(frozen=True, slots=True)
class ValueGroup:
    """The ordered abelian group of values: integers (discrete) or rationals (dense).

    In the discrete group the smallest element strictly above the identity
    has value 1 (written c0); its inverse, value -1, plays the role of the
    prime element of the semiring.  The dense group has no such element.
    """

    kind: str  # "int" | "rat"

    def __post_init__(self) -> None:
        if self.kind not in ("int", "rat"):
            raise ParseError(f"unknown value group kind: {self.kind!r}")

    @property
    def is_discrete(self) -> bool:
        return self.kind == "int"

    @property
    def c0_value(self) -> int | None:
        """Value of the smallest ghost strictly above the unit ghost, if any."""
        return 1 if self.kind == "int" else None

    def contains(self, v: Rational) -> bool:
        if self.kind == "rat":
            return True
        return Fraction(v).denominator == 1

    def is_nu_square(self, v: Rational) -> bool:
        """Whether the value is twice a group value (a nu-square, multiplicatively)."""
        return self.contains(Fraction(v) / 2)

    def floor(self, v: Rational) -> Rational:
        if self.kind == "rat":
            return _norm(Fraction(v))
        f = Fraction(v)
        return f.numerator // f.denominator

    def ceil(self, v: Rational) -> Rational:
        if self.kind == "rat":
            return _norm(Fraction(v))
        f = Fraction(v)
        return -((-f.numerator) // f.denominator)


INTEGERS = ValueGroup("int")
RATIONALS = ValueGroup("rat")


def group_from_name(name: str) -> ValueGroup:
    if name in ("int", "integers", "z"):
        return INTEGERS
    if name in ("rat", "rationals", "q"):
        return RATIONALS
    raise ParseError(f"unknown value group: {name!r}")


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1
    # Never produced by this model (the ghost map is injective on tangibles),
    # kept so the minimal-ordering contract is stated in full.
    INCOMPARABLE = 2


@dataclass(frozen=True, slots=True)
class Elem:
    """Zero, or a tangible/ghost copy of a value-group element."""

    sort: int
    value: Rational | None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero() -> "Elem":
        return ZERO

    @staticmethod
    def tangible(v: Rational) -> "Elem":
        return Elem(TANGIBLE, _norm(v))

    @staticmethod
    def ghost(v: Rational) -> "Elem":
        return Elem(GHOST, _norm(v))

    # -- predicates --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.sort == ZERO_SORT

    @property
    def is_tangible(self) -> bool:
        return self.sort == TANGIBLE

    @property
    def is_ghost(self) -> bool:
        return self.sort == GHOST

    @property
    def sort_name(self) -> str:
        return _SORT_NAMES[self.sort]

    # -- semiring structure --------------------------------------------------

    def nu(self) -> "Elem":
        """The ghost map: zero stays zero, everything else turns ghost."""
        if self.sort == ZERO_SORT:
            return self
        return Elem(GHOST, self.value)

    def __add__(self, other: "Elem") -> "Elem":
        if self.sort == ZERO_SORT:
            return other
        if other.sort == ZERO_SORT:
            return self
        a, b = self.value, other.value
        if a < b:
            return other
        if a > b:
            return self
        return Elem(GHOST, a)

    def __mul__(self, other: "Elem") -> "Elem":
        if self.sort == ZERO_SORT or other.sort == ZERO_SORT:
            return ZERO
        sort = TANGIBLE if (self.sort == TANGIBLE and other.sort == TANGIBLE) else GHOST
        return Elem(sort, _norm(self.value + other.value))

    def square(self) -> "Elem":
        if self.sort == ZERO_SORT:
            return ZERO
        return Elem(self.sort, _norm(self.value * 2))

    def __pow__(self, n: int) -> "Elem":
        if n < 0:
            raise PreconditionError("negative powers are not defined for possibly-zero elements")
        if n == 0:
            return Elem(TANGIBLE, 0)
        if self.sort == ZERO_SORT:
            return ZERO
        return Elem(self.sort, _norm(self.value * n))

    # -- text form -----------------------------------------------------------

    def __str__(self) -> str:
        if self.sort == ZERO_SORT:
            return "0"
        prefix = "t" if self.sort == TANGIBLE else "g"
        return f"{prefix}:{self.value}"

    @staticmethod
    def parse(text: str) -> "Elem":
        s = text.strip()
        if s == "0":
            return ZERO
        if len(s) < 3 or s[1] != ":" or s[0] not in "tg":
            raise ParseError(f"malformed element {text!r} (expected '0', 't:<v>' or 'g:<v>')")
        try:
            v = Fraction(s[2:])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed element value {s[2:]!r} in {text!r}") from None
        return Elem.tangible(v) if s[0] == "t" else Elem.ghost(v)


ZERO = Elem(ZERO_SORT, None)
T = Elem.tangible
G = Elem.ghost
E = Elem(GHOST, 0)  # e = 1 + 1, the unit ghost


def add(a: Elem, b: Elem) -> Elem:
    return a + b


def mul(a: Elem, b: Elem) -> Elem:
    return a * b


def esum(items: Iterable[Elem]) -> Elem:
    acc = ZERO
    for x in items:
        acc = acc + x
    return acc


def nu_cmp(a: Elem, b: Elem) -> Cmp:
    """Compare ghost values; zero is the unique minimum."""
    if a.sort == ZERO_SORT:
        return Cmp.EQUAL if b.sort == ZERO_SORT else Cmp.LESS
    if b.sort == ZERO_SORT:
        return Cmp.GREATER
    if a.value < b.value:
        return Cmp.LESS
    if a.value > b.value:
        return Cmp.GREATER
    return Cmp.EQUAL


def nu_lt(a: Elem, b: Elem) -> bool:
    return nu_cmp(a, b) == Cmp.LESS


def nu_le(a: Elem, b: Elem) -> bool:
    return nu_cmp(a, b) != Cmp.GREATER


def nu_eq(a: Elem, b: Elem) -> bool:
    return nu_cmp(a, b) == Cmp.EQUAL


def nu_gt(a: Elem, b: Elem) -> bool:
    return nu_cmp(a, b) == Cmp.GREATER


def nu_ge(a: Elem, b: Elem) -> bool:
    return nu_cmp(a, b) != Cmp.LESS


def min_order_compare(a: Elem, b: Elem) -> Cmp:
    """Compare in the minimal ordering (a <= b iff a + z = b for some z).

    Ghosts compare by their values, a tangible sits strictly below its own
    ghost, and distinct tangibles compare strictly by value.  Because the
    ghost map is injective on tangibles here, two elements are always
    comparable and INCOMPARABLE is never returned.
    """
    if a == b:
        return Cmp.EQUAL
    c = nu_cmp(a, b)
    if c != Cmp.EQUAL:
        return Cmp.LESS if c == Cmp.LESS else Cmp.GREATER
    # same nu-value, different elements: exactly one of them is ghost
    return Cmp.LESS if b.sort == GHOST else Cmp.GREATER


def min_le(a: Elem, b: Elem) -> bool:
    return min_order_compare(a, b) in (Cmp.LESS, Cmp.EQUAL)


def min_lt(a: Elem, b: Elem) -> bool:
    return min_order_compare(a, b) == Cmp.LESS


def sup(a: Elem, b: Elem) -> Elem:
    """Least upper bound in the minimal ordering.

    For distinct nu-equivalent arguments the join is the common ghost; the
    join of an element with itself is the element.
    """
    if a == b:
        return a
    c = nu_cmp(a, b)
    if c == Cmp.LESS:
        return b
    if c == Cmp.GREATER:
        return a
    return Elem(GHOST, a.value)
