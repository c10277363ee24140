"""Breadth-first reference scheduler.

Explores every interleaving of dance moves instead of saturating greedily.
It shares only the data types with :mod:`knotdance.engine`; the move rules
are re-derived here from crossing statuses so the two can check each other.
"""

from __future__ import annotations

import os
from collections import deque

from knotdance.codec import DiagramCode
from knotdance.engine import (
    Advance,
    ClassicalRule,
    Configuration,
    Rendezvous,
    Trace,
    VirtualRule,
    trivial_trace,
)
from knotdance.errors import ResourceLimit

__all__ = ["oracle_try_dance", "state_limit", "DEFAULT_STATE_LIMIT"]

DEFAULT_STATE_LIMIT = 10**7


def state_limit() -> int:
    raw = os.environ.get("KNOTDANCE_STATE_LIMIT")
    return int(raw) if raw else DEFAULT_STATE_LIMIT


def oracle_try_dance(
    code: DiagramCode, config: Configuration, limit: int | None = None
) -> Trace | None:
    """Exhaustive search for a complete schedule.

    A state is the number of passages each dancer has taken.  Returns a
    witness trace reconstructed from the first complete state reached.

    Raises:
        InvalidConfiguration: bad starts.
        ResourceLimit: more than ``limit`` states visited (default from
            ``KNOTDANCE_STATE_LIMIT``, else 10**7).
    """
    L = len(code)
    config.check(L)
    if L == 0:
        return trivial_trace(code, config.rule)
    limit = state_limit() if limit is None else limit
    rule = config.rule
    starts = config.starts
    n = len(starts)
    lengths = [((starts[(k + 1) % n] - starts[k]) % L) or L for k in range(n)]
    passages = code.passages
    sync = rule.virtual is not VirtualRule.UNRESTRICTED
    want_positive = rule.classical is ClassicalRule.OVER_FIRST

    # for each passage: the segment that owns it and its offset along that segment
    owner = [0] * L
    offset = [0] * L
    for k in range(n):
        for j in range(lengths[k]):
            i = (starts[k] + j) % L
            owner[i], offset[i] = k, j
    sign = [1 if p.is_over else -1 if p.is_under else 0 for p in passages]
    partner = [code.partner(i) for i in range(L)]

    def status_ok(state: tuple[int, ...], i: int) -> bool:
        # status of the crossing after also taking passage i
        j = partner[i]
        s = sign[i] + (sign[j] if state[owner[j]] > offset[j] else 0)
        return s >= 0 if want_positive else s <= 0

    def successors(state: tuple[int, ...]):
        heads = {k: (starts[k] + state[k]) % L for k in range(n) if state[k] < lengths[k]}
        for k, i in heads.items():
            if sign[i] == 0:
                if not sync:
                    yield (k,), (i,)
            elif status_ok(state, i):
                yield (k,), (i,)
        if sync:
            for a, ia in heads.items():
                for b, ib in heads.items():
                    if a < b and sign[ia] == 0 and partner[ia] == ib:
                        yield (a, b), (ia, ib)

    start = (0,) * n
    goal = tuple(lengths)
    parent: dict[tuple[int, ...], tuple | None] = {start: None}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            return _reconstruct(code, config, parent, goal)
        for segs_moved, ps in successors(state):
            nxt = list(state)
            for k in segs_moved:
                nxt[k] += 1
            nxt = tuple(nxt)
            if nxt not in parent:
                parent[nxt] = (state, segs_moved, ps)
                if len(parent) > limit:
                    raise ResourceLimit(f"oracle exceeded {limit} states")
                queue.append(nxt)
    return None


def _reconstruct(code, config, parent, goal) -> Trace:
    steps = []
    state = goal
    while parent[state] is not None:
        prev, segs_moved, ps = parent[state]
        steps.append((segs_moved, ps))
        state = prev
    steps.reverse()
    smoothing = config.rule.virtual is VirtualRule.SMOOTHING
    who = list(range(config.n))
    moves = []
    for t, (segs_moved, ps) in enumerate(steps):
        if len(segs_moved) == 1:
            moves.append(Advance(t, who[segs_moved[0]], ps[0]))
        else:
            a, b = segs_moved
            moves.append(Rendezvous(t, (who[a], who[b]), ps, code[ps[0]].crossing))
            if smoothing:
                who[a], who[b] = who[b], who[a]
    return Trace.build(code, config, moves)
