"""Per-node timestamp history.

Two uses: picking the stored timestamp closest to a remote one (which gives a
tighter false-positive estimate than the latest clock), and checking whether
the step between consecutive timestamps is exactly one event's increments.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from bloomclock.clock import (
    BloomClock,
    CausalVerdict,
    FpAssessment,
    IncompatibleClockError,
    compare,
    fp_rate,
)
from bloomclock.hashing import EventId, indices_for


class InvalidPairError(ValueError):
    """The later clock does not dominate the earlier one."""


@dataclass(frozen=True)
class HistoryEntry:
    seq: int
    clock: BloomClock
    event: Optional[EventId] = None


class ClockHistory:
    """Append-only, slot-wise non-decreasing list of a node's timestamps.

    With ``cap`` set, the oldest entries are evicted first.
    """

    def __init__(self, cap: int | None = None) -> None:
        if cap is not None and cap < 1:
            raise ValueError("history cap must be positive")
        self.cap = cap
        self._entries: deque[HistoryEntry] = deque(maxlen=cap)
        self._matrix: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[HistoryEntry]:
        return iter(self._entries)

    def __getitem__(self, i: int) -> HistoryEntry:
        return self._entries[i]

    @property
    def latest(self) -> HistoryEntry:
        return self._entries[-1]

    def append(self, clock: BloomClock, event: EventId | None = None, seq: int | None = None) -> HistoryEntry:
        if self._entries:
            last = self._entries[-1]
            if seq is None:
                seq = last.seq + 1
            if seq <= last.seq:
                raise ValueError(f"sequence numbers must increase ({seq} <= {last.seq})")
            if compare(last.clock, clock) not in (CausalVerdict.BEFORE, CausalVerdict.EQUAL):
                raise InvalidPairError("history entries must dominate their predecessor")
        elif seq is None:
            seq = 0
        entry = HistoryEntry(seq, clock, event)
        self._entries.append(entry)
        self._matrix = None
        return entry

    def matrix(self) -> np.ndarray:
        """Logical values of every entry, one row per entry."""
        if self._matrix is None:
            self._matrix = np.array([e.clock.values for e in self._entries], dtype=np.int64)
        return self._matrix

    def until(self, seq: int) -> "ClockHistory":
        """Entries with sequence number <= `seq`, as a new history (same cap)."""
        out = ClockHistory(self.cap)
        kept = [e for e in self._entries if e.seq <= seq]
        out._entries.extend(kept)
        if self._matrix is not None:
            out._matrix = self._matrix[: len(kept)]
        return out


def best_predecessor(
    history: ClockHistory, remote: BloomClock
) -> Optional[tuple[BloomClock, FpAssessment]]:
    """Dominating entry closest to `remote` by delta sum, earliest on ties.

    Entries concurrent with `remote` are skipped. Returns None when nothing
    in the history dominates it.
    """
    if len(history) == 0:
        raise ValueError("history is empty")
    if history.latest.clock.family != remote.family:
        raise IncompatibleClockError("remote clock uses a different hash family")
    rows = history.matrix()
    target = np.asarray(remote.values, dtype=np.int64)
    diff = rows - target
    dominating = (diff >= 0).all(axis=1)
    if not dominating.any():
        return None
    deltas = np.where(dominating, diff.sum(axis=1), np.iinfo(np.int64).max)
    best = history[int(np.argmin(deltas))].clock
    return best, fp_rate(remote, best)


def _increments(prev: BloomClock, next: BloomClock) -> list[int]:
    if prev.family != next.family:
        raise IncompatibleClockError("clocks use different hash families")
    diff = [y - x for x, y in zip(prev.values, next.values)]
    if any(d < 0 for d in diff):
        raise InvalidPairError("next does not dominate prev")
    return diff


def provenance_check(prev: BloomClock, next: BloomClock, event: EventId) -> bool:
    """True iff ``next`` is exactly ``prev`` ticked with `event`."""
    diff = _increments(prev, next)
    if sum(diff) != prev.family.k:
        return False
    expected = Counter(indices_for(prev.family, event))
    return all(diff[i] == expected.get(i, 0) for i in range(len(diff)))


def detect_merge(prev: BloomClock, next: BloomClock, event: EventId | None = None) -> bool:
    """True when the step prev -> next cannot be explained by `event` alone.

    A strictly dominating step that is not the supplied event's increments
    (or with no event to attribute) is evidence of a merge with a clock that
    was concurrent to `prev`.
    """
    if compare(prev, next) is not CausalVerdict.BEFORE:
        return False
    return event is None or not provenance_check(prev, next, event)
