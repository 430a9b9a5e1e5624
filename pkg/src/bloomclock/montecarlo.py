"""Monte Carlo estimate of the accidental-overlap probability.

Two clocks are grown from zero by `a_sum` and `b_sum` uniformly random slot
increments; we estimate how often the second dominates the first. Trials are
drawn in fixed-size batches from spawned seed sequences, and B's increments
are drawn after A's within a batch, so for a fixed seed the B draws for
``b_sum`` are a prefix of those for ``b_sum + 1``. The estimate is therefore
exactly non-decreasing in `b_sum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from bloomclock.clock import PreconditionError

BATCH = 1 << 16


@dataclass(frozen=True)
class OverlapEstimate:
    mean: float
    stderr: float
    trials: int


def _slot_counts(draws: np.ndarray, m: int) -> np.ndarray:
    # draws: (increments, trials) slot ids -> (trials, m) counts
    n = draws.shape[1]
    flat = draws.T + (np.arange(n, dtype=np.int64) * m)[:, None]
    return np.bincount(flat.ravel(), minlength=n * m).reshape(n, m)


def montecarlo_overlap(m: int, a_sum: int, b_sum: int, trials: int, seed: int = 0) -> OverlapEstimate:
    if m < 1:
        raise ValueError("m must be positive")
    if trials < 1:
        raise ValueError("trials must be positive")
    if a_sum < 0 or b_sum < a_sum:
        raise PreconditionError(f"need 0 <= a_sum <= b_sum, got a_sum={a_sum}, b_sum={b_sum}")
    n_batches = -(-trials // BATCH)
    children = np.random.SeedSequence(seed).spawn(n_batches)
    hits = 0
    for b, child in enumerate(children):
        size = min(BATCH, trials - b * BATCH)
        rng = np.random.default_rng(child)
        a_draws = rng.integers(0, m, size=(a_sum, size))
        b_draws = rng.integers(0, m, size=(b_sum, size))
        dominated = (_slot_counts(b_draws, m) >= _slot_counts(a_draws, m)).all(axis=1)
        hits += int(dominated.sum())
    p = hits / trials
    return OverlapEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials)
