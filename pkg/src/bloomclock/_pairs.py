"""All-pairs scan of a simulation run, compiled with numba."""

from __future__ import annotations

import numba
import numpy as np

# verdict codes, also the crosstab axes
BEFORE, AFTER, EQUAL, CONCURRENT = 0, 1, 2, 3
N_BUCKETS = 64


@numba.njit(cache=True)
def _bucket(delta):
    b = 0
    while delta > 0:
        delta >>= 1
        b += 1
    return b


@numba.njit(cache=True)
def scan_pairs(bloom, sums, vec, origin, own, m, threshold):
    """Classify every pair i < j of recorded events.

    Ground truth: event i (emitted at node p with own count c) precedes j iff
    ``vec[j, p] >= c``. Bloom verdict: slot-wise dominance of logical values.
    """
    n = bloom.shape[0]
    width = bloom.shape[1]
    crosstab = np.zeros((4, 4), dtype=np.int64)
    b_comparable = np.zeros(N_BUCKETS, dtype=np.int64)
    b_false_pos = np.zeros(N_BUCKETS, dtype=np.int64)
    b_pred = np.zeros(N_BUCKETS, dtype=np.float64)
    accepted = 0
    accepted_fp = 0
    miss = 1.0 - 1.0 / m
    for i in range(n):
        for j in range(i + 1, n):
            if vec[j, origin[i]] >= own[i]:
                gt = BEFORE
            elif vec[i, origin[j]] >= own[j]:
                gt = AFTER
            else:
                gt = CONCURRENT
            n_lt = 0
            n_gt = 0
            delta = 0
            for s in range(width):
                x = bloom[i, s]
                y = bloom[j, s]
                n_lt += x < y
                n_gt += x > y
                delta += abs(y - x)
            if n_lt == 0 and n_gt == 0:
                bv = EQUAL
            elif n_gt == 0:
                bv = BEFORE
            elif n_lt == 0:
                bv = AFTER
            else:
                bv = CONCURRENT
            crosstab[gt, bv] += 1
            if bv == CONCURRENT:
                continue
            lo = min(sums[i], sums[j])
            hi = max(sums[i], sums[j])
            if lo == 0:
                fp = 1.0
            else:
                fp = (1.0 - miss ** hi) ** lo
            b = _bucket(delta)
            b_comparable[b] += 1
            b_pred[b] += fp
            if gt == CONCURRENT:
                b_false_pos[b] += 1
            if fp <= threshold:
                accepted += 1
                if gt == CONCURRENT:
                    accepted_fp += 1
    return crosstab, b_comparable, b_false_pos, b_pred, accepted, accepted_fp
