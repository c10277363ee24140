"""Bridges and over-bridges of a code.

An arc of the diagram is broken only where it passes under a classical
crossing; virtual crossings leave it intact.  A bridge is a maximal unbroken
arc containing at least one classical over passage.  On classical codes this
is the usual bridge; on virtual codes it is the over-bridge.
"""

from __future__ import annotations

from dataclasses import dataclass

from knotdance.codec import DiagramCode

__all__ = ["BridgeReport", "bridge_count", "bridge_starts"]


@dataclass(frozen=True)
class BridgeReport:
    """``bridges[k]`` lists the passage indices of the k-th bridge in traversal order.

    ``starts[k]`` is the arc where that bridge begins: the arc right after
    the under passage preceding it.
    """

    bridges: tuple[tuple[int, ...], ...]
    starts: tuple[int, ...]

    @property
    def count(self) -> int:
        return len(self.bridges)

    def to_record(self) -> dict:
        return {
            "count": self.count,
            "bridges": [list(b) for b in self.bridges],
            "starts": list(self.starts),
        }


def bridge_count(code: DiagramCode) -> BridgeReport:
    L = len(code)
    unders = [i for i, p in enumerate(code) if p.is_under]
    if not unders:
        # valid codes pair every over with an under, so there are no overs either
        return BridgeReport((), ())
    bridges = []
    starts = []
    for k, u in enumerate(unders):
        nxt = unders[(k + 1) % len(unders)]
        gap = (nxt - u - 1) % L
        run = tuple((u + 1 + j) % L for j in range(gap))
        if any(code[i].is_over for i in run):
            bridges.append(run)
            starts.append((u + 1) % L)
    order = sorted(range(len(starts)), key=starts.__getitem__)
    return BridgeReport(tuple(bridges[i] for i in order), tuple(starts[i] for i in order))


def bridge_starts(code: DiagramCode) -> tuple[int, ...]:
    return bridge_count(code).starts
