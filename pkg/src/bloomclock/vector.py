"""Reference vector clock, used as causal ground truth in simulations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from bloomclock.clock import CausalVerdict, order


class NodeSetError(ValueError):
    """Unknown node id, or two clocks over different node sets."""


@dataclass(frozen=True)
class VectorClock:
    nodes: tuple[str, ...]
    counts: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.nodes) != len(self.counts):
            raise ValueError("nodes and counts differ in length")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node ids")
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be non-negative")

    @classmethod
    def zero(cls, nodes: Sequence[str]) -> "VectorClock":
        return cls(tuple(nodes), (0,) * len(nodes))

    @classmethod
    def from_mapping(cls, entries: Mapping[str, int], nodes: Sequence[str] | None = None) -> "VectorClock":
        nodes = tuple(nodes) if nodes is not None else tuple(entries)
        unknown = set(entries) - set(nodes)
        if unknown:
            raise NodeSetError(f"unknown nodes: {sorted(unknown)}")
        return cls(nodes, tuple(entries.get(n, 0) for n in nodes))

    def __getitem__(self, node: str) -> int:
        return self.counts[self._index(node)]

    def as_dict(self) -> dict[str, int]:
        return dict(zip(self.nodes, self.counts))

    def _index(self, node: str) -> int:
        try:
            return self.nodes.index(node)
        except ValueError:
            raise NodeSetError(f"unknown node {node!r}") from None

    def __str__(self) -> str:
        return "{" + ",".join(f"{n}:{c}" for n, c in zip(self.nodes, self.counts)) + "}"

    @classmethod
    def parse(cls, text: str) -> "VectorClock":
        body = text.strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"not a vector clock literal: {text!r}")
        pairs = [p for p in re.split(r"\s*,\s*", body[1:-1].strip()) if p]
        entries = {}
        for p in pairs:
            node, _, count = p.partition(":")
            entries[node.strip()] = int(count)
        return cls.from_mapping(entries)


def _same_nodes(a: VectorClock, b: VectorClock) -> None:
    if a.nodes != b.nodes:
        raise NodeSetError(f"node sets differ: {a.nodes} vs {b.nodes}")


def vc_send(clock: VectorClock, node: str) -> VectorClock:
    """Local event / send at `node`: bump its own entry."""
    i = clock._index(node)
    counts = list(clock.counts)
    counts[i] += 1
    return VectorClock(clock.nodes, tuple(counts))


def vc_receive(clock: VectorClock, incoming: VectorClock, node: str) -> VectorClock:
    """Bump own entry, then take the entry-wise max with `incoming`."""
    _same_nodes(clock, incoming)
    bumped = vc_send(clock, node)
    return VectorClock(
        clock.nodes, tuple(max(x, y) for x, y in zip(bumped.counts, incoming.counts))
    )


def vc_compare(a: VectorClock, b: VectorClock) -> CausalVerdict:
    _same_nodes(a, b)
    return order(a.counts, b.counts)
