"""Bridge slides and the reduction to a code whose bridge count equals its dance number.

A dancer whose path covers two bridges goes: bridge 1, an under-run
(the crossings it must wait at), an over-run starting bridge 2, then under
again.  Sliding the under-run forward past the over-run merges the two
bridges.  Every strand that passed over the dancer in the under-run now also
passes over every strand that passed under the dancer in the over-run, so
one new crossing is created per such pair.

Gauss codes do not record which way each crossing strand points, so the
position of the new passages is fixed by convention: new passages on an
over-strand go immediately before its existing passage, new passages on an
under-strand immediately after it.  Virtual passages met inside the slid
stretch stay put ahead of the merged bridge.  The result is treated as a
virtual (welded) diagram code; its knot type is not tracked.
"""

from __future__ import annotations

from knotdance.bridges import bridge_count
from knotdance.codec import DiagramCode, Kind, Passage
from knotdance.engine import (
    OVER_FIRST,
    ClassicalRule,
    Configuration,
    Rule,
    Trace,
    VirtualRule,
    segments,
    try_dance,
    validate_trace,
)
from knotdance.errors import PreconditionViolated

__all__ = ["SlidePlan", "plan_slide", "bridge_slide", "reduce_to_bridge_minimal", "bridges_covered"]


class SlidePlan:
    """Passage indices involved in one slide, all relative to the original code.

    ``region`` is the stretch of the dancer's path from the first under
    passage after bridge 1 to the last over passage of bridge 2.  Its
    classical unders form ``under_block``, its classical overs
    ``over_block``; virtual passages inside it are ``virtual_block``.
    """

    def __init__(self, region: list[int], under_block: list[int], over_block: list[int], virtual_block: list[int]):
        self.region = region
        self.under_block = under_block
        self.over_block = over_block
        self.virtual_block = virtual_block

    def __repr__(self) -> str:
        return f"SlidePlan(under={self.under_block}, over={self.over_block}, virtual={self.virtual_block})"


def _check_rule(code: DiagramCode, rule: Rule) -> None:
    if rule.classical is not ClassicalRule.OVER_FIRST:
        raise PreconditionViolated("bridge slides need an over-first dance")
    if code.has_virtual and rule.virtual is not VirtualRule.UNRESTRICTED:
        raise PreconditionViolated("bridge slides on virtual codes need the unrestricted rule")


def plan_slide(code: DiagramCode, starts: tuple[int, ...], dancer: int) -> SlidePlan:
    """Locate the under-run and over-run to swap on ``dancer``'s path.

    Raises:
        PreconditionViolated: the dancer covers fewer than two complete
            bridges, or a crossing appears in both runs.
    """
    segs = segments(len(code), starts)
    if not 0 <= dancer < len(segs):
        raise PreconditionViolated(f"no dancer {dancer}")
    seg = segs[dancer]
    kinds = [code[i].kind for i in seg]

    def first(kind: Kind, after: int) -> int | None:
        for pos in range(after, len(seg)):
            if kinds[pos] is kind:
                return pos
        return None

    i1 = first(Kind.OVER, 0)
    u_start = None if i1 is None else first(Kind.UNDER, i1 + 1)
    o_start = None if u_start is None else first(Kind.OVER, u_start + 1)
    if o_start is None:
        raise PreconditionViolated(f"dancer {dancer} covers fewer than two bridges")
    pos = o_start
    o_end = o_start
    while pos < len(seg) and kinds[pos] is not Kind.UNDER:
        if kinds[pos] is Kind.OVER:
            o_end = pos
        pos += 1
    if pos == len(seg) and not code[(seg[-1] + 1) % len(code)].is_under:
        raise PreconditionViolated(
            f"the second bridge on dancer {dancer}'s path continues past its end"
        )

    region = seg[u_start : o_end + 1]
    under_block = [i for i in region if code[i].is_under]
    over_block = [i for i in region if code[i].is_over]
    virtual_block = [i for i in region if code[i].is_virtual]
    shared = {code[i].crossing for i in under_block} & {code[i].crossing for i in over_block}
    if shared:
        raise PreconditionViolated(
            f"crossings {sorted(shared)} occur in both the under-run and the over-run"
        )
    return SlidePlan(region, under_block, over_block, virtual_block)


def bridge_slide(code: DiagramCode, trace: Trace, dancer: int) -> DiagramCode:
    """Merge the first two bridges on ``dancer``'s path.

    ``trace`` must be a valid over-first dance of ``code`` (unrestricted
    rule if the code has virtual passages).  The returned code has exactly
    one bridge fewer, and the same starting arcs still dance it.
    """
    validate_trace(code, trace)
    _check_rule(code, trace.rule)
    new, start_map = _slide(code, trace.config.starts, dancer)

    before = bridge_count(code).count
    after = bridge_count(new).count
    assert after == before - 1, f"slide changed bridge count {before} -> {after}"
    moved = Configuration(tuple(start_map[s] for s in trace.config.starts), trace.rule)
    assert try_dance(new, moved) is not None, f"slide lost danceability of {new}"
    return new


def _slide(code: DiagramCode, starts: tuple[int, ...], dancer: int):
    plan = plan_slide(code, starts, dancer)
    L = len(code)
    fresh = max(p.crossing for p in code) + 1
    before: dict[int, list[Passage]] = {}
    after: dict[int, list[Passage]] = {}
    for x in plan.under_block:
        for y in plan.over_block:
            before.setdefault(code.partner(x), []).append(Passage(fresh, Kind.OVER))
            after.setdefault(code.partner(y), []).append(Passage(fresh, Kind.UNDER))
            fresh += 1

    # virtual passages stay ahead, then the over-run, then the under-run
    order = list(range(L))
    for slot, i in zip(plan.region, plan.virtual_block + plan.over_block + plan.under_block):
        order[slot] = i

    out: list[Passage] = []
    start_of: dict[int, int] = {}
    for i in order:
        start_of[i] = len(out)
        out.extend(before.get(i, ()))
        out.append(code[i])
        out.extend(after.get(i, ()))
    start_map = {s: start_of[s] for s in starts}
    return DiagramCode(tuple(out)), start_map


def bridges_covered(code: DiagramCode, starts: tuple[int, ...], dancer: int) -> int:
    """Number of bridge starts on the dancer's path, its own start included."""
    L = len(code)
    seg = segments(L, starts)[dancer]
    arcs = set(seg)
    return sum(1 for b in bridge_count(code).starts if b in arcs)


def reduce_to_bridge_minimal(
    code: DiagramCode,
    rule: Rule = OVER_FIRST,
    history: list[DiagramCode] | None = None,
) -> tuple[DiagramCode, Trace]:
    """Slide bridges until every dancer of a minimal dance covers one bridge.

    Each round recomputes a minimal dance with starts on bridge starts and
    slides the lowest-numbered dancer covering two or more bridges.  The
    bridge count drops by one per round, so this terminates.  Returns the
    final code and its minimal dance, whose dancer count equals the final
    bridge count.  If ``history`` is given, every intermediate code
    (original first) is appended to it.
    """
    from knotdance.search import min_dancers

    if not code.classical_crossings:
        raise PreconditionViolated("reduction needs at least one classical crossing")
    _check_rule(code, rule)
    while True:
        if history is not None:
            history.append(code)
        n, config, trace = min_dancers(code, rule, restrict_starts=True)
        target = next(
            (k for k in range(n) if bridges_covered(code, config.starts, k) >= 2), None
        )
        if target is None:
            br = bridge_count(code).count
            assert br == n, f"{br} bridges but {n} dancers on {code}"
            return code, trace
        code = bridge_slide(code, trace, target)
