"""Bloom clock timestamps.

A bloom clock is a counting bloom filter used as a logical timestamp. Slot
``i`` has logical value ``counters[i] + offset``; every operation here works
on logical values, so a compacted clock behaves exactly like its expansion.

Receiving is merge-only: the receiver takes the slot-wise max and does not
tick for the receipt itself (unlike a vector clock).
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from bloomclock.hashing import EventId, HashFamily, indices_for


class IncompatibleClockError(ValueError):
    """Raised when two clocks were built with different hash families."""


class PreconditionError(ValueError):
    pass


class CausalVerdict(enum.Enum):
    BEFORE = "before"
    AFTER = "after"
    EQUAL = "equal"
    CONCURRENT = "concurrent"

    def flipped(self) -> "CausalVerdict":
        if self is CausalVerdict.BEFORE:
            return CausalVerdict.AFTER
        if self is CausalVerdict.AFTER:
            return CausalVerdict.BEFORE
        return self


def order(xs: Iterable[int], ys: Iterable[int]) -> CausalVerdict:
    """Slot-wise partial order of two equal-length integer sequences."""
    le = ge = True
    for x, y in zip(xs, ys):
        if x < y:
            ge = False
        elif x > y:
            le = False
        if not (le or ge):
            return CausalVerdict.CONCURRENT
    if le and ge:
        return CausalVerdict.EQUAL
    return CausalVerdict.BEFORE if le else CausalVerdict.AFTER


@dataclass(frozen=True)
class BloomClock:
    counters: tuple[int, ...]
    family: HashFamily
    offset: int = 0

    def __post_init__(self) -> None:
        if len(self.counters) != self.family.m:
            raise ValueError(
                f"expected {self.family.m} counters, got {len(self.counters)}"
            )
        if self.offset < 0 or any(c < 0 for c in self.counters):
            raise ValueError("counters and offset must be non-negative")

    @property
    def m(self) -> int:
        return self.family.m

    @property
    def values(self) -> tuple[int, ...]:
        """Logical slot values (counters plus offset)."""
        if self.offset == 0:
            return self.counters
        return tuple(c + self.offset for c in self.counters)

    @property
    def total(self) -> int:
        """Logical sum over all slots, i.e. the number of increments seen."""
        return sum(self.counters) + self.offset * self.family.m

    @classmethod
    def from_values(
        cls, values: Sequence[int], family: HashFamily, offset: int = 0
    ) -> "BloomClock":
        """Build a clock whose logical values are `values`, stored relative to `offset`."""
        return cls(tuple(int(v) - offset for v in values), family, offset)

    def __str__(self) -> str:
        body = "[" + ",".join(map(str, self.counters)) + "]"
        return f"({self.offset}){body}" if self.offset else body

    @classmethod
    def parse(cls, text: str, family: HashFamily) -> "BloomClock":
        """Inverse of ``str``: accepts ``[1,0,2]`` or ``(3)[1,0,2]``."""
        match = _TEXT_RE.fullmatch(text.strip())
        if match is None:
            raise ValueError(f"not a bloom clock literal: {text!r}")
        offset = int(match.group(1) or 0)
        body = match.group(2).strip()
        counters = tuple(int(c) for c in body.split(",")) if body else ()
        return cls(counters, family, offset)


_TEXT_RE = re.compile(r"(?:\((\d+)\))?\[([\d,\s]*)\]")


@dataclass(frozen=True)
class FpAssessment:
    fp_rate: float
    a_sum: int
    b_sum: int


def _check(a: BloomClock, b: BloomClock) -> None:
    if a.family != b.family:
        raise IncompatibleClockError(f"clock families differ: {a.family} vs {b.family}")


def zero(family: HashFamily) -> BloomClock:
    return BloomClock((0,) * family.m, family)


def tick(clock: BloomClock, event: EventId) -> BloomClock:
    """Hash `event` and increment each of its k slots once (duplicates repeat)."""
    counters = list(clock.counters)
    for i in indices_for(clock.family, event):
        counters[i] += 1
    return BloomClock(tuple(counters), clock.family, clock.offset)


def merge(a: BloomClock, b: BloomClock) -> BloomClock:
    _check(a, b)
    offset = min(a.offset, b.offset)
    values = (max(x, y) for x, y in zip(a.values, b.values))
    return BloomClock(tuple(v - offset for v in values), a.family, offset)


def compare(a: BloomClock, b: BloomClock) -> CausalVerdict:
    """BEFORE means every slot of `a` is <= the matching slot of `b` and a != b."""
    _check(a, b)
    if a.offset == b.offset:
        return order(a.counters, b.counters)
    return order(a.values, b.values)


def delta_sum(a: BloomClock, b: BloomClock) -> int:
    _check(a, b)
    return sum(abs(y - x) for x, y in zip(a.values, b.values))


def overlap_probability(m: int, a_sum: int, b_sum: int) -> float:
    """``(1 - (1 - 1/m) ** b_sum) ** a_sum``; equals 1 when ``a_sum == 0``."""
    if a_sum == 0:
        return 1.0
    return (1.0 - (1.0 - 1.0 / m) ** b_sum) ** a_sum


def fp_rate(a: BloomClock, b: BloomClock) -> FpAssessment:
    """Chance that `b` overlaps `a` by accident, given only their sums.

    The pair must be ordered so that ``b.total >= a.total``; callers holding
    an unordered pair swap it first.
    """
    _check(a, b)
    a_sum, b_sum = a.total, b.total
    if b_sum < a_sum:
        raise PreconditionError(
            f"sum(b)={b_sum} < sum(a)={a_sum}; order the pair by sum first"
        )
    return FpAssessment(overlap_probability(a.m, a_sum, b_sum), a_sum, b_sum)


def bloom_filter_fpr(m: int, k: int, n: int) -> float:
    """Classical false-positive rate of a bit bloom filter after n insertions."""
    if m < 1 or k < 1 or n < 0:
        raise ValueError(f"need m >= 1, k >= 1, n >= 0; got m={m}, k={k}, n={n}")
    return (1.0 - (1.0 - 1.0 / m) ** (k * n)) ** k


def compact(clock: BloomClock) -> BloomClock:
    """Move the minimum counter into the offset; logical values are unchanged."""
    low = min(clock.counters)
    if low == 0:
        return clock
    return BloomClock(
        tuple(c - low for c in clock.counters), clock.family, clock.offset + low
    )
