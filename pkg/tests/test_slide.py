import pytest
from hypothesis import given, settings

from conftest import codes
from knotdance.bridges import bridge_count
from knotdance.codec import parse_code, serialize_code
from knotdance.engine import OVER_FIRST, UNDER_FIRST, COINCIDENT, Configuration, try_dance
from knotdance.errors import PreconditionViolated
from knotdance.search import min_dancers
from knotdance.slide import bridge_slide, bridges_covered, plan_slide, reduce_to_bridge_minimal

D_STAR = "4+ 1+ 2- 4- 3+ 2+ 1- 3-"


def test_trefoil_slide_gives_d_star(trefoil):
    trace = try_dance(trefoil, Configuration((0, 2), OVER_FIRST))
    # dancer 1 runs 3+ 1- 2+ 3-: bridges {3+} and {2+}
    assert bridges_covered(trefoil, (0, 2), 1) == 2
    out = bridge_slide(trefoil, trace, 1)
    assert serialize_code(out) == D_STAR
    assert bridge_count(out).count == 2


def test_d_star_dances_from_bridge_starts():
    d_star = parse_code(D_STAR)
    starts = bridge_count(d_star).starts
    assert len(starts) == 2
    assert try_dance(d_star, Configuration(starts, OVER_FIRST)) is not None


def test_shared_crossing_is_rejected(gap_code):
    with pytest.raises(PreconditionViolated, match="both"):
        plan_slide(gap_code, (0,), 0)


def test_single_bridge_dancer_is_rejected(trefoil):
    with pytest.raises(PreconditionViolated, match="fewer than two"):
        plan_slide(trefoil, (0, 2), 0)


def test_slide_requires_over_first(trefoil):
    trace = try_dance(trefoil, Configuration((0, 3), UNDER_FIRST))
    with pytest.raises(PreconditionViolated):
        bridge_slide(trefoil, trace, 1)


def test_reduce_trefoil(trefoil):
    history = []
    out, trace = reduce_to_bridge_minimal(trefoil, history=history)
    assert bridge_count(out).count == 2 == trace.n
    assert history[0] == trefoil and len(history) == 2
    assert serialize_code(out) == D_STAR


@pytest.mark.parametrize("text, n", [("1+ 2- 2+ 1-", 2), ("1+ 1-", 1)])
def test_reduce_leaves_minimal_codes_unchanged(text, n):
    code = parse_code(text)
    out, trace = reduce_to_bridge_minimal(code)
    assert out == code
    assert bridge_count(out).count == trace.n == n


def test_reduce_rejects_crossingless():
    with pytest.raises(PreconditionViolated):
        reduce_to_bridge_minimal(parse_code(""))
    with pytest.raises(PreconditionViolated):
        reduce_to_bridge_minimal(parse_code("v1 v1"))


def test_reduce_rejects_synchronized_rule_on_virtual_code():
    with pytest.raises(PreconditionViolated):
        reduce_to_bridge_minimal(parse_code("1+ 2- v3 1- 2+ v3"), COINCIDENT)


def _check_slide(code):
    n, config, trace = min_dancers(code, OVER_FIRST, restrict_starts=True)
    for k in range(n):
        if bridges_covered(code, config.starts, k) >= 2:
            out = bridge_slide(code, trace, k)
            assert bridge_count(out).count == bridge_count(code).count - 1
            assert min_dancers(out, OVER_FIRST)[0] == n
            fresh = set(out.classical_crossings) - set(code.classical_crossings)
            assert all(c > max(p.crossing for p in code) for c in fresh)


@given(codes(max_classical=4, max_virtual=0, min_crossings=1))
@settings(max_examples=100, deadline=None)
def test_slide_preserves_dance_number_classical(code):
    _check_slide(code)


@given(codes(max_classical=3, max_virtual=2, min_crossings=1))
@settings(max_examples=100, deadline=None)
def test_slide_preserves_dance_number_welded(code):
    if code.classical_crossings:
        _check_slide(code)


@given(codes(max_classical=4, max_virtual=1, min_crossings=1))
@settings(max_examples=100, deadline=None)
def test_reduction_reaches_bridge_minimal(code):
    if not code.classical_crossings:
        return
    before = min_dancers(code, OVER_FIRST)[0]
    out, trace = reduce_to_bridge_minimal(code)
    assert bridge_count(out).count == min_dancers(out, OVER_FIRST)[0] == before == trace.n
