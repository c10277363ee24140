"""Per-diagram checks of the danceability/bridge relations over a corpus of codes.

Each property is a callable ``(code, facts) -> bool | None``: ``True`` for a
pass, ``False`` for a failure, ``None`` when it does not apply to the code.
Raising :class:`PropertyFailure` (or any other exception) also counts as a
failure and its message becomes the counterexample note.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Mapping

from knotdance.braid import BraidWord, braid_schedule
from knotdance.bridges import bridge_count
from knotdance.codec import DiagramCode, reverse_code, serialize_code
from knotdance.engine import (
    COINCIDENT,
    OVER_FIRST,
    SMOOTHING,
    UNDER_FIRST,
    Configuration,
    Rule,
    coincident_to_smoothing,
    retrograde_trace,
    saturate,
    smoothing_to_coincident,
    try_dance,
    validate_trace,
)
from knotdance.errors import ResourceLimit
from knotdance.oracle import oracle_try_dance
from knotdance.search import min_dancers
from knotdance.slide import reduce_to_bridge_minimal

__all__ = [
    "PropertyFailure",
    "Facts",
    "PropertyResult",
    "PropertyReport",
    "DEFAULT_PROPERTIES",
    "check_properties",
    "check_braid_bound",
]


class PropertyFailure(AssertionError):
    pass


def _require(ok: bool, message: str) -> bool:
    if not ok:
        raise PropertyFailure(message)
    return True


class Facts:
    """Memoized searches on one code, shared by the properties run on it."""

    def __init__(self, code: DiagramCode):
        self.code = code
        self.bridges = bridge_count(code)
        self._min: dict[tuple[DiagramCode, Rule, bool], tuple] = {}

    def min(self, rule: Rule, restrict: bool = False, code: DiagramCode | None = None):
        code = self.code if code is None else code
        key = (code, rule, restrict)
        if key not in self._min:
            self._min[key] = min_dancers(code, rule, restrict)
        return self._min[key]

    def number(self, rule: Rule, restrict: bool = False, code: DiagramCode | None = None) -> int:
        return self.min(rule, restrict, code)[0]


# --------------------------------------------------------------------------
# the properties


def retrograde_duality(code: DiagramCode, facts: Facts) -> bool:
    rev = reverse_code(code)
    over = facts.number(OVER_FIRST)
    under_rev = facts.number(UNDER_FIRST, code=rev)
    _require(over == under_rev, f"over-first {over} but reversed under-first {under_rev}")
    if len(code):
        trace = facts.min(OVER_FIRST)[2]
        back = retrograde_trace(code, trace)
        validate_trace(rev, back)
        _require(back.n == trace.n, "retrograde changed the dancer count")
    return True


def start_at_bridge(code: DiagramCode, facts: Facts) -> bool | None:
    if not facts.bridges.count:
        return None
    full = facts.number(OVER_FIRST)
    restricted = facts.number(OVER_FIRST, restrict=True)
    return _require(full == restricted, f"all-start minimum {full}, bridge-start minimum {restricted}")


def upper_bound(code: DiagramCode, facts: Facts) -> bool | None:
    if not code.classical_crossings:
        return None
    br = facts.bridges.count
    n = facts.number(OVER_FIRST)
    _require(n <= br, f"dance number {n} exceeds bridge count {br}")
    witness = try_dance(code, Configuration(facts.bridges.starts, OVER_FIRST))
    return _require(witness is not None, "one dancer per bridge start does not dance")


def bridge_reduction(code: DiagramCode, facts: Facts) -> bool | None:
    if not code.classical_crossings:
        return None
    before = facts.number(OVER_FIRST)
    out, trace = reduce_to_bridge_minimal(code)
    br = bridge_count(out).count
    after = facts.number(OVER_FIRST, code=out)
    _require(
        br == after == before == trace.n,
        f"reduced to {serialize_code(out)}: bridges {br}, dance {after}, original dance {before}",
    )
    return True


def rule_ordering(code: DiagramCode, facts: Facts) -> bool:
    u = facts.number(OVER_FIRST)
    c = facts.number(COINCIDENT)
    return _require(u <= c, f"unrestricted {u} > coincident {c}")


def coincident_equals_smoothing(code: DiagramCode, facts: Facts) -> bool:
    c = facts.number(COINCIDENT)
    s = facts.number(SMOOTHING)
    _require(c == s, f"coincident {c} != smoothing {s}")
    if len(code):
        trace = facts.min(COINCIDENT)[2]
        there = coincident_to_smoothing(code, trace)
        back = smoothing_to_coincident(code, there)
        _require(back.moves == trace.moves, "coincident -> smoothing -> coincident is not the identity")
        strace = facts.min(SMOOTHING)[2]
        again = coincident_to_smoothing(code, smoothing_to_coincident(code, strace))
        _require(again.moves == strace.moves, "smoothing -> coincident -> smoothing is not the identity")
    return True


def no_virtual_collapse(code: DiagramCode, facts: Facts) -> bool | None:
    if code.has_virtual:
        return None
    o = facts.number(OVER_FIRST)
    c = facts.number(COINCIDENT)
    s = facts.number(SMOOTHING)
    return _require(o == c == s, f"over-first {o}, coincident {c}, smoothing {s}")


def rules_for(code: DiagramCode) -> list[Rule]:
    if code.has_virtual:
        return [OVER_FIRST, UNDER_FIRST, COINCIDENT, SMOOTHING]
    return [OVER_FIRST, UNDER_FIRST]


def greedy_matches_oracle(code: DiagramCode, facts: Facts, max_dancers: int = 3, max_length: int = 10) -> bool | None:
    L = len(code)
    if L == 0 or L > max_length:
        return None
    for k in range(1, min(max_dancers, L) + 1):
        for starts in combinations(range(L), k):
            for rule in rules_for(code):
                config = Configuration(starts, rule)
                greedy = try_dance(code, config)
                oracle = oracle_try_dance(code, config)
                _require(
                    (greedy is None) == (oracle is None),
                    f"starts {starts} rule {rule}: greedy {'ok' if greedy else 'stuck'}, "
                    f"oracle {'ok' if oracle else 'stuck'}",
                )
                if oracle is not None:
                    validate_trace(code, oracle)
    return True


def greedy_confluence(code: DiagramCode, facts: Facts, tries: int = 5) -> bool | None:
    L = len(code)
    if L == 0:
        return None
    rng = random.Random(serialize_code(code))
    configs = [facts.min(rule)[1] for rule in rules_for(code)]
    for _ in range(tries):
        k = rng.randint(1, L)
        configs.append(Configuration(tuple(rng.sample(range(L), k)), rng.choice(rules_for(code))))
    for config in configs:
        _, reference = saturate(code, config)
        for _ in range(tries):
            _, other = saturate(code, config, rng=rng)
            _require(other == reference, f"starts {config.starts}: order-dependent saturation")
    return True


Property = Callable[[DiagramCode, Facts], "bool | None"]

DEFAULT_PROPERTIES: dict[str, Property] = {
    "retrograde_duality": retrograde_duality,
    "start_at_bridge": start_at_bridge,
    "upper_bound": upper_bound,
    "bridge_reduction": bridge_reduction,
    "rule_ordering": rule_ordering,
    "coincident_equals_smoothing": coincident_equals_smoothing,
    "no_virtual_collapse": no_virtual_collapse,
    "greedy_matches_oracle": greedy_matches_oracle,
    "greedy_confluence": greedy_confluence,
}


# --------------------------------------------------------------------------
# reporting


@dataclass
class PropertyResult:
    name: str
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    counterexamples: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def record(self, code_text: str, outcome: bool | None, note: str = "", keep: int = 5) -> None:
        if outcome is None:
            self.skipped += 1
        elif outcome:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.counterexamples) < keep:
                self.counterexamples.append((code_text, note))

    def to_record(self) -> dict:
        return {
            "property": self.name,
            "passed": self.passed,
            "failed": self.failed,
            "skipped": self.skipped,
            "ok": self.ok,
            "counterexamples": [{"code": c, "note": n} for c, n in self.counterexamples],
        }


@dataclass
class PropertyReport:
    results: dict[str, PropertyResult]
    codes: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def to_records(self) -> list[dict]:
        return [r.to_record() for r in self.results.values()]

    def summary(self) -> str:
        width = max((len(n) for n in self.results), default=0)
        lines = [f"{self.codes} codes checked"]
        for name, r in self.results.items():
            status = "PASS" if r.ok else "FAIL"
            lines.append(
                f"{status} {name.ljust(width)}  passed={r.passed} failed={r.failed} skipped={r.skipped}"
            )
            for code_text, note in r.counterexamples:
                lines.append(f"     counterexample [{code_text}]: {note}")
        return "\n".join(lines)


def check_properties(
    corpus: Iterable[DiagramCode],
    properties: Mapping[str, Property] | None = None,
    keep: int = 5,
) -> PropertyReport:
    """Run every property on every code; failures are collected, not raised.

    Raises:
        ResourceLimit: the oracle exceeded its state budget.
    """
    props = DEFAULT_PROPERTIES if properties is None else properties
    report = PropertyReport({name: PropertyResult(name) for name in props})
    for code in corpus:
        report.codes += 1
        facts = Facts(code)
        text = serialize_code(code)
        for name, prop in props.items():
            try:
                outcome, note = prop(code, facts), ""
            except ResourceLimit:
                raise
            except Exception as exc:  # a crash is a counterexample too
                outcome, note = False, f"{type(exc).__name__}: {exc}"
            report.results[name].record(text, outcome, note, keep)
    return report


def check_braid_bound(words: Iterable[BraidWord], keep: int = 5) -> PropertyResult:
    """Constructive schedule validates and the coincident number is at most the strand count."""
    result = PropertyResult("braid_bound")
    for word in words:
        try:
            code, trace = braid_schedule(word)
            validate_trace(code, trace)
            n = min_dancers(code, COINCIDENT)[0]
            ok = trace.n == word.strands and n <= word.strands
            note = "" if ok else f"coincident number {n}, strands {word.strands}, dancers {trace.n}"
        except Exception as exc:
            ok, note = False, f"{type(exc).__name__}: {exc}"
        result.record(str(word), ok, note, keep)
    return result
