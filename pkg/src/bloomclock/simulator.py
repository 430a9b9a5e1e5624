"""Deterministic discrete-event simulation of bloom-clock broadcasts.

Every internal event ticks the origin's bloom clock and vector clock and is
broadcast to all other nodes; each copy may be dropped or delayed. A vector
clock runs alongside as ground truth, and after the run every pair of
recorded events is classified both ways.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from bloomclock import _pairs
from bloomclock.clock import (
    BloomClock,
    CausalVerdict,
    compare,
    delta_sum,
    fp_rate,
    merge,
    tick,
    zero,
)
from bloomclock.codec import encode_clock, encode_vector
from bloomclock.hashing import EventId, HashFamily, indices_for
from bloomclock.history import ClockHistory, best_predecessor
from bloomclock.vector import VectorClock, vc_compare, vc_receive, vc_send

_CODES = (
    CausalVerdict.BEFORE,
    CausalVerdict.AFTER,
    CausalVerdict.EQUAL,
    CausalVerdict.CONCURRENT,
)


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DelayModel:
    """Message delay in virtual ticks: ``fixed`` uses `low`, ``uniform`` draws from [low, high]."""

    kind: str = "uniform"
    low: float = 1.0
    high: float = 5.0

    @classmethod
    def parse(cls, text: str) -> "DelayModel":
        """``fixed:2`` or ``uniform:1,5``."""
        kind, _, args = text.partition(":")
        try:
            values = [float(v) for v in args.split(",")] if args else []
        except ValueError:
            raise ConfigError(f"bad delay spec {text!r}") from None
        if kind == "fixed" and len(values) == 1:
            return cls("fixed", values[0], values[0])
        if kind == "uniform" and len(values) == 2:
            return cls("uniform", values[0], values[1])
        raise ConfigError(f"bad delay spec {text!r}; use fixed:D or uniform:LO,HI")

    def __str__(self) -> str:
        if self.kind == "fixed":
            return f"fixed:{self.low:g}"
        return f"uniform:{self.low:g},{self.high:g}"


@dataclass(frozen=True)
class SimConfig:
    n_nodes: int = 4
    m: int = 128
    k: int = 4
    n_events: int = 1000
    drop_rate: float = 0.0
    delay: DelayModel = field(default_factory=DelayModel)
    seed: int = 0
    fp_threshold: float = 0.05
    history_cap: Optional[int] = None
    hash_seed: Optional[int] = None
    jitter: float = 1.0
    pair_sample_cap: int = 10_000
    refine_samples: int = 200

    def __post_init__(self) -> None:
        if self.n_nodes < 1:
            raise ConfigError("n_nodes must be positive")
        if self.m < 1 or self.k < 1:
            raise ConfigError("m and k must be positive")
        if self.n_events < 0:
            raise ConfigError("n_events must be non-negative")
        if self.n_events * self.k >= 1 << 62:
            raise ConfigError("n_events * k would overflow 64-bit counters")
        for name in ("drop_rate", "fp_threshold"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.delay.kind not in ("fixed", "uniform"):
            raise ConfigError(f"unknown delay model {self.delay.kind!r}")
        if self.delay.low < 0 or self.delay.high < self.delay.low:
            raise ConfigError(f"invalid delay range {self.delay}")
        if self.history_cap is not None and self.history_cap < 1:
            raise ConfigError("history_cap must be positive")
        if self.jitter < 0:
            raise ConfigError("jitter must be non-negative")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError("seed must fit in 64 bits")
        if self.pair_sample_cap < 0 or self.refine_samples < 0:
            raise ConfigError("sample caps must be non-negative")

    @property
    def family(self) -> HashFamily:
        seed = self.seed if self.hash_seed is None else self.hash_seed
        return HashFamily(self.m, self.k, seed)

    @property
    def nodes(self) -> tuple[str, ...]:
        return node_names(self.n_nodes)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["delay"] = str(self.delay)
        return d


def node_names(n: int) -> tuple[str, ...]:
    width = len(str(n - 1))
    return tuple(f"n{i:0{width}d}" for i in range(n))


@dataclass(frozen=True)
class EventRecord:
    event_id: bytes
    origin: str
    t: int
    bloom: BloomClock
    vector: VectorClock
    indices: tuple[int, ...]


@dataclass(frozen=True)
class TraceStep:
    """One local step at a node: its own emission of event `t`, or receipt of `t`."""

    node: str
    kind: str  # "emit" | "recv"
    t: int


@dataclass
class SimMetrics:
    n_events: int
    n_pairs: int
    crosstab: dict[str, dict[str, int]]
    false_negative_count: int
    comparable_pairs: int
    false_positive_count: int
    empirical_fp_rate: Optional[float]
    concurrent_overlap_rate: Optional[float]
    mean_predicted_fp: Optional[float]
    accepted_pairs: int
    accepted_false_positives: int
    buckets: list[dict]
    bloom_bytes_mean: Optional[float]
    bloom_bytes_max: Optional[int]
    vector_bytes_mean: Optional[float]
    vector_bytes_max: Optional[int]
    history_refinement: dict

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ConfidentVerdict:
    verdict: CausalVerdict
    fp_rate: Optional[float] = None
    accepted: Optional[bool] = None


def compare_with_confidence(a: BloomClock, b: BloomClock, threshold: float) -> ConfidentVerdict:
    """Structural verdict plus the overlap probability for comparable pairs.

    Concurrent verdicts are definitive and carry no rate.
    """
    verdict = compare(a, b)
    if verdict is CausalVerdict.CONCURRENT:
        return ConfidentVerdict(verdict)
    if verdict is CausalVerdict.AFTER:
        rate = fp_rate(b, a).fp_rate
    else:
        rate = fp_rate(a, b).fp_rate
    return ConfidentVerdict(verdict, rate, rate <= threshold)


class Simulation:
    """Single run over a global virtual-time queue.

    Internal event ``j`` (1-based) fires at ``j + U(0, jitter)`` on node
    ``(j - 1) mod n_nodes``. Deliveries due at the same instant as an
    internal event are processed first.
    """

    def __init__(self, config: SimConfig, trace: bool = False) -> None:
        self.config = config
        self.family = config.family
        self.nodes = config.nodes
        self.records: list[EventRecord] = []
        self.trace: Optional[list[TraceStep]] = [] if trace else None
        self._ran = False

    def _delays(self, rng: np.random.Generator, n: int) -> np.ndarray:
        d = self.config.delay
        if d.kind == "fixed":
            return np.full(n, d.low)
        return rng.uniform(d.low, d.high, n)

    def run(self) -> list[EventRecord]:
        if self._ran:
            return self.records
        cfg = self.config
        n, m = cfg.n_nodes, cfg.m
        rng = np.random.default_rng(cfg.seed)
        bloom = np.zeros((n, m), dtype=np.int64)
        vec = np.zeros((n, n), dtype=np.int64)

        queue: list[tuple] = []
        seq = 0
        times = np.arange(1, cfg.n_events + 1) + rng.uniform(0.0, cfg.jitter, cfg.n_events)
        for j in range(cfg.n_events):
            # (time, priority, seq, payload); deliveries use priority 0
            queue.append((float(times[j]), 1, seq, (j % n,)))
            seq += 1
        heapq.heapify(queue)

        t = 0
        while queue:
            when, prio, _, payload = heapq.heappop(queue)
            if prio == 0:
                dest, msg_t, msg_bloom, msg_vec = payload
                np.maximum(bloom[dest], msg_bloom, out=bloom[dest])
                vec[dest, dest] += 1
                np.maximum(vec[dest], msg_vec, out=vec[dest])
                if self.trace is not None:
                    self.trace.append(TraceStep(self.nodes[dest], "recv", msg_t))
                continue
            (p,) = payload
            t += 1
            event_id = f"e{t}@{self.nodes[p]}".encode()
            idx = indices_for(self.family, event_id)
            for i in idx:
                bloom[p, i] += 1
            vec[p, p] += 1
            stamp_bloom = bloom[p].copy()
            stamp_vec = vec[p].copy()
            self.records.append(
                EventRecord(
                    event_id,
                    self.nodes[p],
                    t,
                    BloomClock(tuple(stamp_bloom.tolist()), self.family),
                    VectorClock(self.nodes, tuple(stamp_vec.tolist())),
                    idx,
                )
            )
            if self.trace is not None:
                self.trace.append(TraceStep(self.nodes[p], "emit", t))
            if n == 1:
                continue
            dropped = rng.random(n - 1) < cfg.drop_rate
            delays = self._delays(rng, n - 1)
            r = 0
            for q in range(n):
                if q == p:
                    continue
                if not dropped[r]:
                    heapq.heappush(
                        queue, (when + float(delays[r]), 0, seq, (q, t, stamp_bloom, stamp_vec))
                    )
                    seq += 1
                r += 1
        self._ran = True
        self._final = bloom
        return self.records

    def clock_of(self, node: str) -> BloomClock:
        """A node's bloom clock at the end of the run."""
        self.run()
        row = self._final[self.nodes.index(node)]
        return BloomClock(tuple(row.tolist()), self.family)

    def metrics(self) -> SimMetrics:
        return compute_metrics(self.run(), self.config)


def run_simulation(config: SimConfig) -> tuple[list[EventRecord], SimMetrics]:
    sim = Simulation(config)
    records = sim.run()
    return records, sim.metrics()


def _as_arrays(records: Sequence[EventRecord], config: SimConfig):
    n = len(records)
    bloom = np.array([r.bloom.values for r in records], dtype=np.int64).reshape(n, config.m)
    vec = np.array([r.vector.counts for r in records], dtype=np.int64).reshape(n, config.n_nodes)
    index = {name: i for i, name in enumerate(config.nodes)}
    origin = np.array([index[r.origin] for r in records], dtype=np.int64)
    own = vec[np.arange(n), origin] if n else np.zeros(0, dtype=np.int64)
    return bloom, bloom.sum(axis=1), vec, origin, own


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


def compute_metrics(records: Sequence[EventRecord], config: SimConfig) -> SimMetrics:
    bloom, sums, vec, origin, own = _as_arrays(records, config)
    crosstab, comparable, false_pos, pred, accepted, accepted_fp = _pairs.scan_pairs(
        bloom, sums, vec, origin, own, config.m, config.fp_threshold
    )
    names = [v.value for v in _CODES]
    table = {g: {b: int(crosstab[gi, bi]) for bi, b in enumerate(names)} for gi, g in enumerate(names)}
    fn = int(
        crosstab[_pairs.BEFORE, _pairs.AFTER]
        + crosstab[_pairs.BEFORE, _pairs.CONCURRENT]
        + crosstab[_pairs.AFTER, _pairs.BEFORE]
        + crosstab[_pairs.AFTER, _pairs.CONCURRENT]
    )
    n_comparable = int(comparable.sum())
    n_fp = int(false_pos.sum())
    n_concurrent = int(crosstab[_pairs.CONCURRENT].sum())
    buckets = []
    for b in range(_pairs.N_BUCKETS):
        if comparable[b] == 0:
            continue
        lo = 0 if b == 0 else 1 << (b - 1)
        hi = 0 if b == 0 else (1 << b) - 1
        buckets.append(
            {
                "delta_lo": lo,
                "delta_hi": hi,
                "comparable": int(comparable[b]),
                "false_positives": int(false_pos[b]),
                "empirical_fp_rate": float(false_pos[b] / comparable[b]),
                "mean_predicted_fp": float(pred[b] / comparable[b]),
            }
        )
    bloom_sizes = [len(encode_clock(r.bloom)) for r in records]
    vector_sizes = [len(encode_vector(r.vector)) for r in records]
    return SimMetrics(
        n_events=len(records),
        n_pairs=len(records) * (len(records) - 1) // 2,
        crosstab=table,
        false_negative_count=fn,
        comparable_pairs=n_comparable,
        false_positive_count=n_fp,
        empirical_fp_rate=_ratio(n_fp, n_comparable),
        concurrent_overlap_rate=_ratio(n_fp, n_concurrent),
        mean_predicted_fp=float(pred.sum() / n_comparable) if n_comparable else None,
        accepted_pairs=int(accepted),
        accepted_false_positives=int(accepted_fp),
        buckets=buckets,
        bloom_bytes_mean=float(np.mean(bloom_sizes)) if records else None,
        bloom_bytes_max=max(bloom_sizes) if records else None,
        vector_bytes_mean=float(np.mean(vector_sizes)) if records else None,
        vector_bytes_max=max(vector_sizes) if records else None,
        history_refinement=history_refinement(records, config),
    )


def _unrank_pair(k: int, n: int) -> tuple[int, int]:
    """Map k in [0, n(n-1)/2) to the k-th pair (i, j), i < j, in row-major order."""
    total = n * (n - 1) // 2
    r = total - 1 - k  # rank from the end
    q = (math.isqrt(8 * r + 1) - 1) // 2
    while (q + 1) * (q + 2) // 2 <= r:
        q += 1
    while q * (q + 1) // 2 > r:
        q -= 1
    i = n - 2 - q
    j = n - 1 - (r - q * (q + 1) // 2)
    return i, j


def sample_pair_indices(n: int, cap: int, seed: int) -> list[tuple[int, int]]:
    """All pairs when there are at most `cap`, else a seeded sample, sorted."""
    total = n * (n - 1) // 2
    if total <= cap:
        return [(i, j) for i in range(n) for j in range(i + 1, n)]
    rng = np.random.default_rng([seed, 1])
    picks = np.sort(rng.choice(total, size=cap, replace=False))
    return [_unrank_pair(int(k), n) for k in picks]


@dataclass(frozen=True)
class PairRow:
    t_a: int
    t_b: int
    ground_truth: CausalVerdict
    bloom_verdict: CausalVerdict
    delta_sum: int
    fp_predicted: Optional[float]
    accepted: Optional[bool]


def sample_pairs(records: Sequence[EventRecord], config: SimConfig) -> list[PairRow]:
    rows = []
    for i, j in sample_pair_indices(len(records), config.pair_sample_cap, config.seed):
        a, b = records[i], records[j]
        verdict = compare_with_confidence(a.bloom, b.bloom, config.fp_threshold)
        rows.append(
            PairRow(
                a.t,
                b.t,
                vc_compare(a.vector, b.vector),
                verdict.verdict,
                delta_sum(a.bloom, b.bloom),
                verdict.fp_rate,
                verdict.accepted,
            )
        )
    return rows


def node_histories(records: Sequence[EventRecord], config: SimConfig) -> dict[str, ClockHistory]:
    """Each node's emitted timestamps, keyed by t (uncapped)."""
    histories = {name: ClockHistory() for name in config.nodes}
    for r in records:
        histories[r.origin].append(r.bloom, r.event_id, seq=r.t)
    return histories


def history_refinement(records: Sequence[EventRecord], config: SimConfig) -> dict:
    """Compare fp rates from the latest timestamp vs the closest stored one.

    Samples bloom-comparable pairs (earlier event dominated by later one). The
    later event's node looks through its own emitted timestamps up to that
    event, limited to the last `history_cap` of them.
    """
    out = {"pairs": 0, "mean_fp_latest": None, "mean_fp_best": None, "tightened": 0}
    n = len(records)
    if config.refine_samples == 0 or n < 2:
        return out
    rng = np.random.default_rng([config.seed, 2])
    histories = node_histories(records, config)
    latest_sum = best_sum = 0.0
    tightened = found = 0
    for _ in range(config.refine_samples * 20):
        if found == config.refine_samples:
            break
        i, j = sorted(int(x) for x in rng.choice(n, size=2, replace=False))
        a, b = records[i], records[j]
        if compare(a.bloom, b.bloom) not in (CausalVerdict.BEFORE, CausalVerdict.EQUAL):
            continue
        window = histories[b.origin].until(b.t)
        if config.history_cap is not None and len(window) > config.history_cap:
            capped = ClockHistory(config.history_cap)
            for e in window:
                capped.append(e.clock, e.event, e.seq)
            window = capped
        result = best_predecessor(window, a.bloom)
        latest = fp_rate(a.bloom, b.bloom).fp_rate
        best = result[1].fp_rate if result is not None else latest
        latest_sum += latest
        best_sum += best
        tightened += best < latest
        found += 1
    if found:
        out.update(
            pairs=found,
            mean_fp_latest=latest_sum / found,
            mean_fp_best=best_sum / found,
            tightened=tightened,
        )
    return out


@dataclass(frozen=True)
class ScriptStep:
    """`origin` ticks `event` and its clock is delivered to `recipients` only."""

    origin: str
    event: EventId
    recipients: tuple[str, ...]


@dataclass
class ReplayResult:
    bloom: dict[str, ClockHistory]
    vector: dict[str, VectorClock]
    emitted: list[BloomClock]

    def table(self, node: str) -> list[tuple[int, BloomClock]]:
        return [(e.seq, e.clock) for e in self.bloom[node]]

    def clock_at(self, node: str, t: int) -> BloomClock:
        """The node's clock as of step `t` (last entry with seq <= t)."""
        entry = None
        for e in self.bloom[node]:
            if e.seq > t:
                break
            entry = e
        return entry.clock


def replay(family: HashFamily, nodes: Sequence[str], steps: Sequence[ScriptStep]) -> ReplayResult:
    """Run a hand-scripted scenario with instantaneous delivery.

    Step ``t`` (1-based) is recorded with sequence number ``t`` in each
    affected node's history; every history starts with the zero clock at 0.
    """
    nodes = tuple(nodes)
    clocks = {nd: zero(family) for nd in nodes}
    vectors = {nd: VectorClock.zero(nodes) for nd in nodes}
    histories = {nd: ClockHistory() for nd in nodes}
    for nd in nodes:
        histories[nd].append(clocks[nd], seq=0)
    emitted = []
    for t, step in enumerate(steps, start=1):
        clocks[step.origin] = tick(clocks[step.origin], step.event)
        vectors[step.origin] = vc_send(vectors[step.origin], step.origin)
        histories[step.origin].append(clocks[step.origin], step.event, seq=t)
        sent, sent_vec = clocks[step.origin], vectors[step.origin]
        emitted.append(sent)
        for r in step.recipients:
            clocks[r] = merge(clocks[r], sent)
            vectors[r] = vc_receive(vectors[r], sent_vec, r)
            histories[r].append(clocks[r], seq=t)
    return ReplayResult(histories, vectors, emitted)
