"""Independent reference computations used by the tests.

Nothing here imports the code paths it checks.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from math import factorial


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def _multinomial_pmf(counts, m: int) -> Fraction:
    n = sum(counts)
    ways = factorial(n)
    for c in counts:
        ways //= factorial(c)
    return Fraction(ways, m**n)


def exact_overlap(m: int, a_sum: int, b_sum: int) -> Fraction:
    """P(B dominates A slot-wise) for independent uniform increment clocks."""
    a_side = [(c, _multinomial_pmf(c, m)) for c in compositions(a_sum, m)]
    b_side = [(c, _multinomial_pmf(c, m)) for c in compositions(b_sum, m)]
    return sum(
        (pa * pb for ca, pa in a_side for cb, pb in b_side if all(x <= y for x, y in zip(ca, cb))),
        Fraction(0),
    )


def happened_before_from_trace(trace) -> dict[int, set[int]]:
    """Map each emitted event t to the set of emitted events reachable from it.

    The DAG has one vertex per local step, an edge to the next step on the
    same node, and an edge from each emission to every receipt of it.
    """
    steps = list(trace)
    next_local: dict[int, int] = {}
    last_at: dict[str, int] = {}
    emit_at: dict[int, int] = {}
    receipts: dict[int, list[int]] = {}
    for v, step in enumerate(steps):
        if step.node in last_at:
            next_local[last_at[step.node]] = v
        last_at[step.node] = v
        if step.kind == "emit":
            emit_at[step.t] = v
        else:
            receipts.setdefault(step.t, []).append(v)
    reach: dict[int, set[int]] = {}
    for t, start in emit_at.items():
        seen = {start}
        todo = deque([start])
        while todo:
            v = todo.popleft()
            succ = []
            if v in next_local:
                succ.append(next_local[v])
            if steps[v].kind == "emit":
                succ.extend(receipts.get(steps[v].t, ()))
            for w in succ:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        reach[t] = {steps[v].t for v in seen if steps[v].kind == "emit" and v != start}
    return reach
