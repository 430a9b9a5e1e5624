"""Binary wire format for timestamps.

Bloom clock layout: ``0xBC 0x01 varint(m) varint(offset) varint(c_0) ...
varint(c_{m-1})`` with unsigned LEB128 varints. Vector clocks use the same
scheme under magic ``0xBD``: ``varint(N)`` then the N counts in node order
(node ids are implied by the configured node set).
"""

from __future__ import annotations

from bloomclock.clock import BloomClock
from bloomclock.hashing import HashFamily
from bloomclock.vector import VectorClock

BLOOM_MAGIC = 0xBC
VECTOR_MAGIC = 0xBD
FORMAT_VERSION = 0x01


class DecodeError(ValueError):
    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


def write_varint(value: int, out: bytearray) -> None:
    if value < 0:
        raise ValueError("varints are unsigned")
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def read_varint(data: bytes, pos: int) -> tuple[int, int]:
    """Decode one varint starting at `pos`; returns (value, next position)."""
    start = pos
    value = shift = 0
    while True:
        if pos >= len(data):
            raise DecodeError("truncated varint", start)
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7


def _header(data: bytes, magic: int) -> int:
    if len(data) < 1:
        raise DecodeError("missing magic byte", 0)
    if data[0] != magic:
        raise DecodeError(f"bad magic 0x{data[0]:02X}, expected 0x{magic:02X}", 0)
    if len(data) < 2:
        raise DecodeError("missing version byte", 1)
    if data[1] != FORMAT_VERSION:
        raise DecodeError(f"unsupported format version {data[1]}", 1)
    return 2


def encode_clock(clock: BloomClock) -> bytes:
    out = bytearray((BLOOM_MAGIC, FORMAT_VERSION))
    write_varint(clock.m, out)
    write_varint(clock.offset, out)
    for c in clock.counters:
        write_varint(c, out)
    return bytes(out)


def decode_clock(data: bytes, family: HashFamily) -> BloomClock:
    pos = _header(data, BLOOM_MAGIC)
    m_at = pos
    m, pos = read_varint(data, pos)
    if m != family.m:
        raise DecodeError(f"clock has m={m} but family expects m={family.m}", m_at)
    offset, pos = read_varint(data, pos)
    counters = []
    for _ in range(m):
        c, pos = read_varint(data, pos)
        counters.append(c)
    if pos != len(data):
        raise DecodeError("trailing bytes after clock", pos)
    return BloomClock(tuple(counters), family, offset)


def encode_vector(clock: VectorClock) -> bytes:
    out = bytearray((VECTOR_MAGIC, FORMAT_VERSION))
    write_varint(len(clock.counts), out)
    for c in clock.counts:
        write_varint(c, out)
    return bytes(out)


def decode_vector(data: bytes, nodes: tuple[str, ...]) -> VectorClock:
    pos = _header(data, VECTOR_MAGIC)
    n_at = pos
    n, pos = read_varint(data, pos)
    if n != len(nodes):
        raise DecodeError(f"vector has {n} entries but {len(nodes)} nodes are configured", n_at)
    counts = []
    for _ in range(n):
        c, pos = read_varint(data, pos)
        counts.append(c)
    if pos != len(data):
        raise DecodeError("trailing bytes after vector", pos)
    return VectorClock(tuple(nodes), tuple(counts))
