"""Exact interval-set algebra on [0, 1].

An IntervalSet is a finite union of closed subintervals of [0, 1] held in
canonical form: endpoints are Fractions, intervals are nondegenerate,
sorted, and strictly separated (no overlap, no shared endpoint). Because
single points carry no length, canonical equality is exactly "equal up to a
finite set of points", which is the equivalence every guarantee in this
package is stated under.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedIntervalError, OutOfRangeError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class IntervalSet:
    """A canonical finite union of closed intervals within [0, 1]."""

    intervals: tuple[tuple[Fraction, Fraction], ...] = ()

    def __post_init__(self) -> None:
        prev_right: Fraction | None = None
        for left, right in self.intervals:
            if not (ZERO <= left and right <= ONE):
                raise OutOfRangeError(f"interval [{left}, {right}] leaves [0, 1]")
            if not left < right:
                raise MalformedIntervalError(
                    f"canonical intervals must have left < right, got [{left}, {right}]"
                )
            if prev_right is not None and not prev_right < left:
                raise MalformedIntervalError(
                    "canonical intervals must be sorted and strictly separated"
                )
            prev_right = right

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_endpoints(pairs: Iterable[Sequence[Fraction]]) -> "IntervalSet":
        """Build from arbitrary (left, right) pairs.

        Validates each pair (range, orientation), drops degenerate points,
        then sorts and merges overlapping or touching intervals.
        """
        cleaned: list[tuple[Fraction, Fraction]] = []
        for pair in pairs:
            left, right = pair
            if not (ZERO <= left <= ONE and ZERO <= right <= ONE):
                raise OutOfRangeError(f"interval [{left}, {right}] leaves [0, 1]")
            if left > right:
                raise MalformedIntervalError(
                    f"interval [{left}, {right}] has left > right"
                )
            if left < right:
                cleaned.append((left, right))
        cleaned.sort()
        merged: list[tuple[Fraction, Fraction]] = []
        for left, right in cleaned:
            if merged and left <= merged[-1][1]:
                if right > merged[-1][1]:
                    merged[-1] = (merged[-1][0], right)
            else:
                merged.append((left, right))
        return IntervalSet(tuple(merged))

    @staticmethod
    def segment(left: Fraction, right: Fraction) -> "IntervalSet":
        """The single interval [left, right]; empty when left == right."""
        return IntervalSet.from_endpoints([(left, right)])

    @staticmethod
    def prefix(x: Fraction) -> "IntervalSet":
        """The prefix [0, x]."""
        return IntervalSet.segment(ZERO, x)

    # -- queries -----------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.intervals

    def total_length(self) -> Fraction:
        return sum((right - left for left, right in self.intervals), ZERO)

    def contains(self, x: Fraction) -> bool:
        """Closed membership: true when some [l, r] has l <= x <= r."""
        for left, right in self.intervals:
            if left > x:
                return False
            if x <= right:
                return True
        return False

    def measure_intersection(self, other: "IntervalSet") -> Fraction:
        """Length of the overlap, without materializing it."""
        total = ZERO
        a, b = self.intervals, other.intervals
        i = j = 0
        while i < len(a) and j < len(b):
            lo = a[i][0] if a[i][0] > b[j][0] else b[j][0]
            hi = a[i][1] if a[i][1] < b[j][1] else b[j][1]
            if lo < hi:
                total += hi - lo
            if a[i][1] <= b[j][1]:
                i += 1
            else:
                j += 1
        return total

    # -- algebra -----------------------------------------------------------

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda p, q: p or q)

    def intersection(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda p, q: p and q)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return _combine(self, other, lambda p, q: p and not q)

    def complement(self) -> "IntervalSet":
        return FULL.difference(self)


def _flat(s: IntervalSet) -> list[Fraction]:
    out: list[Fraction] = []
    for left, right in s.intervals:
        out.append(left)
        out.append(right)
    return out


def _combine(a: IntervalSet, b: IntervalSet, keep) -> IntervalSet:
    """Boundary-walk set operation.

    Cut [0, 1] at every endpoint of either operand; membership of each atom
    in each operand is constant, read off by endpoint-index parity. Atoms
    the predicate keeps are concatenated, gluing adjacent ones.
    """
    pa = _flat(a)
    pb = _flat(b)
    events = sorted({*pa, *pb})
    out: list[tuple[Fraction, Fraction]] = []
    ia = ib = 0
    for left, right in zip(events, events[1:]):
        while ia < len(pa) and pa[ia] <= left:
            ia += 1
        while ib < len(pb) and pb[ib] <= left:
            ib += 1
        if keep(ia % 2 == 1, ib % 2 == 1):
            if out and out[-1][1] == left:
                out[-1] = (out[-1][0], right)
            else:
                out.append((left, right))
    return IntervalSet(tuple(out))


EMPTY = IntervalSet()
FULL = IntervalSet(((ZERO, ONE),))
