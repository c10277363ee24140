"""Minimal dancer counts and enumeration of small codes."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterator

from knotdance.bridges import bridge_starts
from knotdance.codec import DiagramCode, Kind, Passage, _relabel_key
from knotdance.engine import (
    COINCIDENT,
    OVER_FIRST,
    SMOOTHING,
    UNDER_FIRST,
    ClassicalRule,
    Configuration,
    Rule,
    Trace,
    VirtualRule,
    coincident_to_smoothing,
    trivial_trace,
    try_dance,
    validate_trace,
)
from knotdance.errors import Infeasible, ResourceLimit

__all__ = [
    "DanceNumbers",
    "RULES",
    "min_dancers",
    "dance_numbers",
    "restriction_applies",
    "enumerate_codes",
    "enumerate_corpus",
    "MAX_CROSSINGS",
]

MAX_CROSSINGS = 5

RULES: dict[str, Rule] = {
    "over": OVER_FIRST,
    "under": UNDER_FIRST,
    "unrestricted": OVER_FIRST,
    "coincident": COINCIDENT,
    "smoothing": SMOOTHING,
}


def restriction_applies(code: DiagramCode, rule: Rule) -> bool:
    """Whether starts may be restricted to bridge starts without losing minimality.

    True for over-first on classical codes and for the unrestricted rule on
    virtual codes.
    """
    if rule.classical is not ClassicalRule.OVER_FIRST:
        return False
    return rule.virtual is VirtualRule.UNRESTRICTED or not code.has_virtual


def min_dancers(
    code: DiagramCode, rule: Rule, restrict_starts: bool = False
) -> tuple[int, Configuration, Trace]:
    """Least number of dancers that dance ``code`` under ``rule``.

    Start sets are tried by size, then lexicographically, so the returned
    configuration is the lexicographically least minimal one.  With
    ``restrict_starts`` only bridge starts are candidates (falling back to
    every arc when the code has no bridge).

    Raises:
        ValueError: ``restrict_starts`` with a rule where that is unsound.
        Infeasible: no start set works (never happens for L >= 1, kept for
            the synchronized rules' contract).
    """
    L = len(code)
    if L == 0:
        trace = trivial_trace(code, rule)
        return 1, trace.config, trace
    if restrict_starts:
        if not restriction_applies(code, rule):
            raise ValueError(f"start restriction is not valid for rule {rule}")
        candidates = bridge_starts(code) or tuple(range(L))
    else:
        candidates = tuple(range(L))
    for n in range(1, len(candidates) + 1):
        for starts in combinations(candidates, n):
            config = Configuration(starts, rule)
            trace = try_dance(code, config)
            if trace is not None:
                return n, config, trace
    if rule.virtual.synchronized and code.has_virtual:
        raise Infeasible(f"no configuration dances {code} under {rule}")
    raise AssertionError(f"one dancer per candidate arc must dance {code} under {rule}")


@dataclass(frozen=True)
class DanceNumbers:
    """Diagram-level dance numbers; ``None`` marks an infeasible entry."""

    over_first: int
    under_first: int
    unrestricted: int
    coincident: int | None
    smoothing: int | None
    witnesses: dict[str, Trace] = field(default_factory=dict, compare=False, repr=False)

    def as_dict(self) -> dict[str, int | None]:
        return {
            "over": self.over_first,
            "under": self.under_first,
            "unrestricted": self.unrestricted,
            "coincident": self.coincident,
            "smoothing": self.smoothing,
        }

    @property
    def virtual_pattern(self) -> tuple[int | None, int | None, int | None]:
        return (self.unrestricted, self.coincident, self.smoothing)


def _min_or_none(code: DiagramCode, rule: Rule) -> tuple[int | None, Trace | None]:
    try:
        n, _, trace = min_dancers(code, rule)
    except Infeasible:
        return None, None
    return n, trace


def dance_numbers(code: DiagramCode) -> DanceNumbers:
    """All five dance numbers of ``code``.

    The smoothing entry comes from its own search; the coincident witness is
    also mapped to a smoothing schedule, and both routes must agree.
    """
    # virtual passages are free under the plain classical rules, so the
    # over-first and unrestricted numbers share one search
    over, _, over_tr = min_dancers(code, OVER_FIRST)
    under, _, under_tr = min_dancers(code, UNDER_FIRST)
    unres, unres_tr = over, over_tr
    coin, coin_tr = _min_or_none(code, COINCIDENT)
    smooth, smooth_tr = _min_or_none(code, SMOOTHING)
    witnesses = {"over": over_tr, "under": under_tr, "unrestricted": unres_tr}
    if coin_tr is not None:
        witnesses["coincident"] = coin_tr
        if len(code):
            mapped = coincident_to_smoothing(code, coin_tr)
            validate_trace(code, mapped)
        if smooth != coin:
            raise AssertionError(
                f"coincident ({coin}) and smoothing ({smooth}) numbers differ on {code}"
            )
    if smooth_tr is not None:
        witnesses["smoothing"] = smooth_tr
    return DanceNumbers(over, under, unres, coin, smooth, witnesses)


# --------------------------------------------------------------------------
# enumeration


def _pairings(k: int) -> Iterator[tuple[int, ...]]:
    """Words of length 2k using labels 1..k twice each, labels in first-appearance order."""
    word = [0] * (2 * k)

    def rec(pos: int, next_label: int, open_labels: list[int]):
        if pos == 2 * k:
            yield tuple(word)
            return
        for idx, lab in enumerate(open_labels):
            word[pos] = lab
            yield from rec(pos + 1, next_label, open_labels[:idx] + open_labels[idx + 1 :])
        unopened = k - next_label + 1
        if unopened > 0 and 2 * unopened + len(open_labels) <= 2 * k - pos:
            word[pos] = next_label
            yield from rec(pos + 1, next_label + 1, open_labels + [next_label])

    yield from rec(0, 1, [])


def _is_canonical(passages: tuple[Passage, ...]) -> bool:
    key = _relabel_key(passages)
    n = len(passages)
    for r in range(1, n):
        if _relabel_key(passages[r:] + passages[:r]) < key:
            return False
    return True


def enumerate_codes(classical: int, virtual: int, max_total: int = MAX_CROSSINGS) -> Iterator[DiagramCode]:
    """Every code with exactly these crossing counts, one per rotation/relabel class.

    Each yielded code is its own :func:`canonical_rotation`.

    Raises:
        ResourceLimit: ``classical + virtual`` exceeds ``max_total``.
    """
    if classical < 0 or virtual < 0:
        raise ValueError("crossing counts must be non-negative")
    k = classical + virtual
    if k > max_total:
        raise ResourceLimit(f"{k} crossings exceeds the enumeration budget of {max_total}")
    if k == 0:
        yield DiagramCode(())
        return
    for word in _pairings(k):
        for virtual_labels in combinations(range(1, k + 1), virtual):
            vset = set(virtual_labels)
            classical_labels = [c for c in range(1, k + 1) if c not in vset]
            for bits in product((Kind.OVER, Kind.UNDER), repeat=len(classical_labels)):
                first = dict(zip(classical_labels, bits))
                seen = set()
                ps = []
                for c in word:
                    if c in vset:
                        ps.append(Passage(c, Kind.VIRTUAL))
                    elif c in seen:
                        ps.append(Passage(c, Kind.UNDER if first[c] is Kind.OVER else Kind.OVER))
                    else:
                        seen.add(c)
                        ps.append(Passage(c, first[c]))
                ps = tuple(ps)
                if _is_canonical(ps):
                    yield DiagramCode(ps)


def enumerate_corpus(
    max_classical: int, max_virtual: int, max_total: int = MAX_CROSSINGS
) -> Iterator[DiagramCode]:
    """All codes with at most the given crossing counts, smallest first."""
    if max_classical + max_virtual > max_total:
        raise ResourceLimit(
            f"{max_classical} classical + {max_virtual} virtual crossings exceeds "
            f"the enumeration budget of {max_total}"
        )
    for total in range(max_classical + max_virtual + 1):
        for v in range(min(total, max_virtual) + 1):
            c = total - v
            if c <= max_classical:
                yield from enumerate_codes(c, v, max_total)
