"""Dance numbers and bridge numbers of classical and virtual knot diagrams.

Diagrams are extended Gauss codes such as ``"1+ 2- 3+ 1- 2+ 3-"``.  The
main entry points are :func:`parse_code`, :func:`try_dance`,
:func:`min_dancers`, :func:`dance_numbers`, :func:`bridge_count`,
:func:`reduce_to_bridge_minimal` and :func:`braid_closure`.
"""

from knotdance.braid import (
    BraidWord,
    braid_closure,
    braid_schedule,
    closure_components,
    parse_braid,
    random_knot_word,
)
from knotdance.bridges import BridgeReport, bridge_count, bridge_starts
from knotdance.codec import (
    DiagramCode,
    Kind,
    Passage,
    canonical_rotation,
    parse_code,
    read_code_lines,
    reverse_code,
    rotate,
    serialize_code,
)
from knotdance.engine import (
    COINCIDENT,
    OVER_FIRST,
    SMOOTHING,
    UNDER_FIRST,
    UNRESTRICTED,
    Advance,
    ClassicalRule,
    Configuration,
    Move,
    Rendezvous,
    Rule,
    Trace,
    VirtualRule,
    coincident_to_smoothing,
    is_valid_trace,
    render_trace_table,
    retrograde_trace,
    saturate,
    segments,
    smoothing_to_coincident,
    trivial_trace,
    try_dance,
    validate_trace,
)
from knotdance.errors import (
    CodeSyntaxError,
    IndexOutOfRange,
    Infeasible,
    InvalidConfiguration,
    InvalidTrace,
    KnotDanceError,
    NotAKnot,
    PreconditionViolated,
    ResourceLimit,
    ValidationError,
)
from knotdance.oracle import oracle_try_dance
from knotdance.properties import PropertyReport, PropertyResult, check_braid_bound, check_properties
from knotdance.search import (
    DanceNumbers,
    dance_numbers,
    enumerate_codes,
    enumerate_corpus,
    min_dancers,
    restriction_applies,
)
from knotdance.slide import bridge_slide, plan_slide, reduce_to_bridge_minimal

__version__ = "0.1.0"

__all__ = [
    "BraidWord",
    "braid_closure",
    "braid_schedule",
    "closure_components",
    "parse_braid",
    "random_knot_word",
    "BridgeReport",
    "bridge_count",
    "bridge_starts",
    "DiagramCode",
    "Kind",
    "Passage",
    "canonical_rotation",
    "parse_code",
    "read_code_lines",
    "reverse_code",
    "rotate",
    "serialize_code",
    "COINCIDENT",
    "OVER_FIRST",
    "SMOOTHING",
    "UNDER_FIRST",
    "UNRESTRICTED",
    "Advance",
    "ClassicalRule",
    "Configuration",
    "Move",
    "Rendezvous",
    "Rule",
    "Trace",
    "VirtualRule",
    "coincident_to_smoothing",
    "is_valid_trace",
    "render_trace_table",
    "retrograde_trace",
    "saturate",
    "segments",
    "smoothing_to_coincident",
    "trivial_trace",
    "try_dance",
    "validate_trace",
    "CodeSyntaxError",
    "IndexOutOfRange",
    "Infeasible",
    "InvalidConfiguration",
    "InvalidTrace",
    "KnotDanceError",
    "NotAKnot",
    "PreconditionViolated",
    "ResourceLimit",
    "ValidationError",
    "oracle_try_dance",
    "PropertyReport",
    "PropertyResult",
    "check_braid_bound",
    "check_properties",
    "DanceNumbers",
    "dance_numbers",
    "enumerate_codes",
    "enumerate_corpus",
    "min_dancers",
    "restriction_applies",
    "bridge_slide",
    "plan_slide",
    "reduce_to_bridge_minimal",
]
