"""Index derivation for bloom clock ticks.

Each event id is hashed once with keyed BLAKE2b (16-byte digest, key = the
8-byte little-endian seed). The digest is split into two 64-bit words h1, h2
and the k indices are ``(h1 + i * h2) mod m`` for ``i = 0..k-1``.
Golden fixtures depend on this exact construction; do not change it.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union

EventId = Union[bytes, str]

_MASK64 = (1 << 64) - 1


class InvalidEventError(ValueError):
    """Raised for an empty or non-bytes event identity."""


@dataclass(frozen=True)
class HashFamily:
    m: int
    k: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if not 0 <= self.seed <= _MASK64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed!r}")


def event_bytes(event: EventId) -> bytes:
    if isinstance(event, str):
        event = event.encode("utf-8")
    if not isinstance(event, (bytes, bytearray)):
        raise InvalidEventError(f"event id must be bytes or str, got {type(event).__name__}")
    if not event:
        raise InvalidEventError("event id must be non-empty")
    return bytes(event)


def base_digests(seed: int, event: EventId) -> tuple[int, int]:
    digest = hashlib.blake2b(
        event_bytes(event), digest_size=16, key=seed.to_bytes(8, "little")
    ).digest()
    return int.from_bytes(digest[:8], "little"), int.from_bytes(digest[8:], "little")


def indices_for(family: HashFamily, event: EventId) -> tuple[int, ...]:
    """Return the k counter indices (duplicates kept) that `event` increments."""
    h1, h2 = base_digests(family.seed, event)
    m = family.m
    return tuple((h1 + i * h2) % m for i in range(family.k))
