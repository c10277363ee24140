"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import pytest
from hypothesis import strategies as st

from knotdance.codec import DiagramCode, Kind, Passage, parse_code

TREFOIL = "1+ 2- 3+ 1- 2+ 3-"
GAP_CODE = "1+ 2- 2+ 1-"
VIRTUAL_TREFOIL = "1+ 2+ 1- 2-"
VIRTUAL_KINK = "v1 v1"


@pytest.fixture
def trefoil() -> DiagramCode:
    return parse_code(TREFOIL)


@pytest.fixture
def gap_code() -> DiagramCode:
    return parse_code(GAP_CODE)


@pytest.fixture
def vtrefoil() -> DiagramCode:
    return parse_code(VIRTUAL_TREFOIL)


@pytest.fixture
def vkink() -> DiagramCode:
    return parse_code(VIRTUAL_KINK)


@st.composite
def codes(draw, max_classical: int = 4, max_virtual: int = 2, min_crossings: int = 0) -> DiagramCode:
    """Random valid code with arbitrary (not necessarily 1..k) crossing ids."""
    c = draw(st.integers(max(0, min_crossings - max_virtual), max_classical))
    v = draw(st.integers(max(0, min_crossings - c), max_virtual))
    ids = draw(st.lists(st.integers(1, 40), min_size=c + v, max_size=c + v, unique=True))
    classical, virtual = ids[:c], ids[c:]
    first_over = {x: draw(st.booleans()) for x in classical}
    slots = draw(st.permutations([x for x in ids for _ in range(2)]))
    seen: set[int] = set()
    out = []
    for x in slots:
        if x in virtual:
            out.append(Passage(x, Kind.VIRTUAL))
        else:
            over = first_over[x] if x not in seen else not first_over[x]
            out.append(Passage(x, Kind.OVER if over else Kind.UNDER))
            seen.add(x)
    return DiagramCode(tuple(out))


@st.composite
def code_and_starts(draw, max_classical: int = 4, max_virtual: int = 2, max_dancers: int | None = None):
    code = draw(codes(max_classical, max_virtual, min_crossings=1))
    L = len(code)
    hi = L if max_dancers is None else min(L, max_dancers)
    starts = draw(st.lists(st.integers(0, L - 1), min_size=1, max_size=hi, unique=True))
    return code, tuple(sorted(starts))


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        passed, seconds, detail = module.RESULTS[number]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"CRITERION {number:2d} {status} ({seconds:.2f}s) {detail}")
