"""Acceptance suite: one test per criterion, each with its time budget.

A ``CRITERION <n> PASS|FAIL`` line per criterion is printed in the terminal
summary (see ``conftest.py``).  Set ``KNOTDANCE_FULL_ORACLE=1`` to extend
criterion 11 to every code with five crossings, virtual ones included.
"""

from __future__ import annotations

import functools
import os
import random
import time
from itertools import combinations

from knotdance.braid import random_knot_word
from knotdance.bridges import bridge_count
from knotdance.codec import canonical_rotation, parse_code, reverse_code
from knotdance.engine import (
    COINCIDENT,
    OVER_FIRST,
    SMOOTHING,
    UNDER_FIRST,
    UNRESTRICTED,
    Configuration,
    coincident_to_smoothing,
    smoothing_to_coincident,
    try_dance,
    validate_trace,
)
from knotdance.oracle import oracle_try_dance
from knotdance.properties import check_braid_bound
from knotdance.search import dance_numbers, enumerate_codes, enumerate_corpus, min_dancers
from knotdance.slide import reduce_to_bridge_minimal

TREFOIL = parse_code("1+ 2- 3+ 1- 2+ 3-")

# criterion number -> (passed, seconds, detail)
RESULTS: dict[int, tuple[bool, float, str]] = {}


def criterion(number: int, budget: float | None = None):
    """Time the test, enforce the budget, and record one result line."""

    def wrap(fn):
        @functools.wraps(fn)
        def run():
            t0 = time.perf_counter()
            detail = ""
            passed = False
            try:
                detail = fn() or ""
                elapsed = time.perf_counter() - t0
                assert budget is None or elapsed < budget, f"took {elapsed:.2f}s, budget {budget}s"
                passed = True
            except AssertionError as exc:
                detail = str(exc).splitlines()[0] if str(exc) else "assertion failed"
                raise
            finally:
                RESULTS[number] = (passed, time.perf_counter() - t0, detail)

        return run

    return wrap


def corpus(max_classical: int, max_virtual: int, max_total: int = 5):
    return list(enumerate_corpus(max_classical, max_virtual, max_total))


def violations(items, check) -> list[str]:
    return [str(x) for x in items if not check(x)]


@criterion(1, budget=1.0)
def test_criterion_01_trefoil_baseline():
    assert bridge_count(TREFOIL).count == 3
    assert min_dancers(TREFOIL, OVER_FIRST)[0] == 2
    out, trace = reduce_to_bridge_minimal(TREFOIL)
    validate_trace(out, trace)
    assert bridge_count(out).count == 2 and trace.n == 2
    return f"reduced to {out}"


@criterion(2, budget=1.0)
def test_criterion_02_under_one_over_two():
    hits = [
        c
        for c in enumerate_codes(2, 0)
        if min_dancers(c, UNDER_FIRST)[0] == 1 and min_dancers(c, OVER_FIRST)[0] == 2
    ]
    assert hits, "no 2-crossing code with under-first 1 and over-first 2"
    assert canonical_rotation(parse_code("1+ 2- 2+ 1-")) in hits
    return f"{len(hits)} witness code(s)"


@criterion(3, budget=60.0)
def test_criterion_03_retrograde_duality():
    codes = corpus(4, 0)
    bad = violations(
        codes, lambda c: min_dancers(c, OVER_FIRST)[0] == min_dancers(reverse_code(c), UNDER_FIRST)[0]
    )
    assert not bad, f"violations: {bad[:5]}"
    return f"{len(codes)} codes"


@criterion(4, budget=120.0)
def test_criterion_04_start_at_bridge():
    def agree(rule):
        def check(c):
            if not bridge_count(c).count:
                return True
            return min_dancers(c, rule)[0] == min_dancers(c, rule, restrict_starts=True)[0]

        return check

    classical = corpus(4, 0)
    welded = [c for c in corpus(3, 1) if c.has_virtual]
    bad = violations(classical, agree(OVER_FIRST)) + violations(welded, agree(UNRESTRICTED))
    assert not bad, f"violations: {bad[:5]}"
    return f"{len(classical)} classical + {len(welded)} virtual codes"


def _bound_corpus():
    seen = {}
    for c in corpus(4, 0) + corpus(3, 1) + corpus(2, 2):
        seen.setdefault(c, None)
    return list(seen)


@criterion(5)
def test_criterion_05_upper_bounds():
    codes = [c for c in _bound_corpus() if c.classical_crossings]

    def check(c):
        report = bridge_count(c)
        rule = UNRESTRICTED if c.has_virtual else OVER_FIRST
        witness = try_dance(c, Configuration(report.starts, rule))
        return min_dancers(c, rule)[0] <= report.count and witness is not None

    bad = violations(codes, check)
    assert not bad, f"violations: {bad[:5]}"
    return f"{len(codes)} codes with a classical crossing"


@criterion(6)
def test_criterion_06_main_pipeline():
    codes = [c for c in corpus(4, 0) if c.classical_crossings]

    def check(c):
        before = min_dancers(c, OVER_FIRST)[0]
        out, trace = reduce_to_bridge_minimal(c)
        return bridge_count(out).count == min_dancers(out, OVER_FIRST)[0] == before == trace.n

    bad = violations(codes, check)
    assert not bad, f"violations: {bad[:5]}"
    return f"{len(codes)} codes"


@criterion(7)
def test_criterion_07_virtual_rules():
    codes = corpus(2, 2)

    def check(c):
        dn = dance_numbers(c)
        if dn.coincident is None:
            return dn.smoothing is None
        if not (dn.unrestricted <= dn.coincident and dn.coincident == dn.smoothing):
            return False
        if len(c):
            coin, smooth = dn.witnesses["coincident"], dn.witnesses["smoothing"]
            if smoothing_to_coincident(c, coincident_to_smoothing(c, coin)).moves != coin.moves:
                return False
            if coincident_to_smoothing(c, smoothing_to_coincident(c, smooth)).moves != smooth.moves:
                return False
        if not c.has_virtual:
            return dn.unrestricted == dn.coincident == dn.over_first
        return True

    bad = violations(codes, check)
    assert not bad, f"violations: {bad[:5]}"
    return f"{len(codes)} codes"


@criterion(8, budget=1.0)
def test_criterion_08_virtual_trefoil():
    vt = parse_code("1+ 2+ 1- 2-")
    assert bridge_count(vt).count == 1
    assert min_dancers(vt, UNRESTRICTED)[0] == 1


@criterion(9, budget=600.0)
def test_criterion_09_gap_pattern():
    deadline = time.perf_counter() + 540.0
    found = None
    examined = 0
    for c in enumerate_corpus(4, 3, max_total=7):
        if time.perf_counter() > deadline:
            break
        if not c.has_virtual:
            continue
        examined += 1
        u = min_dancers(c, UNRESTRICTED)[0]
        co = min_dancers(c, COINCIDENT)[0]
        if (u, co) == (2, 3) and min_dancers(c, SMOOTHING)[0] == 3:
            found = c
            break
    fallback = next(
        (
            c
            for c in enumerate_corpus(4, 1)
            if c.has_virtual and dance_numbers(c).virtual_pattern == (1, 2, 2)
        ),
        None,
    )
    assert fallback is not None, "no (1, 2, 2) code in the one-virtual corpus"
    if found is None:
        return f"(2, 3, 3) not found after {examined} codes; fallback {fallback}"
    assert dance_numbers(found).virtual_pattern == (2, 3, 3)
    return f"(2, 3, 3) at [{found}] after {examined} codes; fallback [{fallback}]"


@criterion(10, budget=60.0)
def test_criterion_10_braid_bound():
    rng = random.Random(2024)
    words = [random_knot_word(rng, max_strands=3, max_letters=6) for _ in range(50)]
    assert all(w.strands <= 3 and len(w.letters) <= 6 for w in words)
    result = check_braid_bound(words)
    assert result.ok, f"violations: {result.counterexamples}"
    return f"{result.passed} words"


def _oracle_corpus():
    codes = corpus(5, 0)
    for total in range(1, 5):
        for v in range(1, total + 1):
            codes += list(enumerate_codes(total - v, v))
    if os.environ.get("KNOTDANCE_FULL_ORACLE") == "1":
        for c, v in [(4, 1), (3, 2), (2, 3), (1, 4), (0, 5)]:
            codes += list(enumerate_codes(c, v))
    return codes


@criterion(11)
def test_criterion_11_oracle_equivalence():
    codes = _oracle_corpus()
    pairs = 0
    bad = []
    for c in codes:
        L = len(c)
        if L == 0 or L > 10:
            continue
        rules = [OVER_FIRST, UNDER_FIRST, COINCIDENT, SMOOTHING] if c.has_virtual else [OVER_FIRST, UNDER_FIRST]
        for k in range(1, min(3, L) + 1):
            for starts in combinations(range(L), k):
                for rule in rules:
                    config = Configuration(starts, rule)
                    pairs += 1
                    if (try_dance(c, config) is None) != (oracle_try_dance(c, config) is None):
                        bad.append(f"{c} {starts} {rule}")
    assert not bad, f"{len(bad)} disagreements: {bad[:5]}"
    return f"{pairs} (code, configuration, rule) triples over {len(codes)} codes"
