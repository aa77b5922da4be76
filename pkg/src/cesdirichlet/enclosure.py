"""Closed real intervals certifying values of infinite sums.

Every infinite series evaluated in this package is returned as an
``Enclosure`` [lo, hi] guaranteed (up to a documented floating-point
slack model) to contain the exact value.  Finite sums are returned as
plain floats; enclosures appear only where a genuine tail had to be
bounded.

The slack model is deliberately simple: endpoints of a summation are
widened by four units in the last place per accumulated term, i.e. by
``4 * eps * sum(|terms|)``, on top of the directed integral brackets
used for the tails.  Chunk subtotals are combined with ``math.fsum``,
so the true rounding error is far below the budget.  This is an
engineering certification, not formally verified arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

EPS = 2.0 ** -52


def ulp_up(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, math.inf)
    return x


def ulp_down(x: float, steps: int = 1) -> float:
    for _ in range(steps):
        x = math.nextafter(x, -math.inf)
    return x


@dataclass(frozen=True)
class Enclosure:
    """A closed interval [lo, hi] with finite endpoints, lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError(f"enclosure endpoints must be finite: [{self.lo}, {self.hi}]")
        if self.lo > self.hi:
            raise ValueError(f"inverted enclosure: [{self.lo}, {self.hi}]")

    @staticmethod
    def exact(x: float) -> "Enclosure":
        return Enclosure(float(x), float(x))

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "Enclosure") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __add__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(ulp_down(self.lo + other.lo), ulp_up(self.hi + other.hi))
        o = float(other)
        return Enclosure(ulp_down(self.lo + o), ulp_up(self.hi + o))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, Enclosure):
            return Enclosure(ulp_down(self.lo - other.hi), ulp_up(self.hi - other.lo))
        o = float(other)
        return Enclosure(ulp_down(self.lo - o), ulp_up(self.hi - o))

    def scale(self, c: float) -> "Enclosure":
        """Multiply by a nonnegative scalar."""
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        if c == 0:
            return Enclosure(0.0, 0.0)
        return Enclosure(ulp_down(self.lo * c), ulp_up(self.hi * c))

    def power(self, t: float) -> "Enclosure":
        """x -> x**t for t > 0, requires lo >= 0 (monotone on [0, inf))."""
        if t <= 0:
            raise ValueError("power exponent must be positive")
        if self.lo < 0:
            raise ValueError("power requires a nonnegative enclosure")
        return Enclosure(ulp_down(self.lo ** t, 2), ulp_up(self.hi ** t, 2))

    def root(self, p: float) -> "Enclosure":
        """p-th root of a nonnegative enclosure."""
        return self.power(1.0 / p)

    def widen(self, slack: float) -> "Enclosure":
        if slack < 0:
            raise ValueError("slack must be nonnegative")
        return Enclosure(self.lo - slack, self.hi + slack)

    def __repr__(self):
        return f"Enclosure({self.lo!r}, {self.hi!r})"


def div_pos(num, den: Enclosure) -> Enclosure:
    """(num / den) for a nonnegative numerator and a strictly positive
    denominator enclosure.  ``num`` may be a float or an Enclosure."""
    if den.lo <= 0:
        raise ZeroDivisionError("denominator enclosure must be strictly positive")
    if isinstance(num, Enclosure):
        nlo, nhi = num.lo, num.hi
    else:
        nlo = nhi = float(num)
    if nlo < 0:
        raise ValueError("numerator must be nonnegative")
    return Enclosure(ulp_down(nlo / den.hi), ulp_up(nhi / den.lo))
