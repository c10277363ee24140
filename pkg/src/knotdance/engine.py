"""Dance configurations on Gauss codes.

Dancers start on arcs of a code and each one dances forward until it
reaches the next dancer's starting arc.  Time is a sequence of discrete
moves: a single dancer stepping through its next passage, or (for the
coincident and smoothing rules) two dancers stepping through the two
passages of one virtual crossing together.

The greedy engine in :func:`try_dance` is exact: a move that becomes enabled
stays enabled until taken, so saturating the enabled moves in any order
reaches the same final state.
"""

from __future__ import annotations

import enum
import random
import string
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence, Union

from knotdance.codec import DiagramCode, reverse_code, serialize_code
from knotdance.errors import InvalidConfiguration, InvalidTrace

__all__ = [
    "ClassicalRule",
    "VirtualRule",
    "Rule",
    "OVER_FIRST",
    "UNDER_FIRST",
    "UNRESTRICTED",
    "COINCIDENT",
    "SMOOTHING",
    "Configuration",
    "Advance",
    "Rendezvous",
    "Move",
    "Trace",
    "segments",
    "saturate",
    "try_dance",
    "validate_trace",
    "is_valid_trace",
    "trivial_trace",
    "retrograde_trace",
    "coincident_to_smoothing",
    "smoothing_to_coincident",
    "render_trace_table",
    "dancer_label",
]


class ClassicalRule(enum.Enum):
    OVER_FIRST = "over"
    UNDER_FIRST = "under"

    @property
    def opposite(self) -> "ClassicalRule":
        if self is ClassicalRule.OVER_FIRST:
            return ClassicalRule.UNDER_FIRST
        return ClassicalRule.OVER_FIRST


class VirtualRule(enum.Enum):
    UNRESTRICTED = "unrestricted"
    COINCIDENT = "coincident"
    SMOOTHING = "smoothing"

    @property
    def synchronized(self) -> bool:
        return self is not VirtualRule.UNRESTRICTED


@dataclass(frozen=True)
class Rule:
    classical: ClassicalRule = ClassicalRule.OVER_FIRST
    virtual: VirtualRule = VirtualRule.UNRESTRICTED

    def __str__(self) -> str:
        return f"{self.classical.value}-first/{self.virtual.value}"


OVER_FIRST = Rule(ClassicalRule.OVER_FIRST, VirtualRule.UNRESTRICTED)
UNDER_FIRST = Rule(ClassicalRule.UNDER_FIRST, VirtualRule.UNRESTRICTED)
UNRESTRICTED = OVER_FIRST
COINCIDENT = Rule(ClassicalRule.OVER_FIRST, VirtualRule.COINCIDENT)
SMOOTHING = Rule(ClassicalRule.OVER_FIRST, VirtualRule.SMOOTHING)


@dataclass(frozen=True)
class Configuration:
    """Sorted, distinct starting arcs plus the rule being danced.

    Dancer ``k`` starts on arc ``starts[k]``.  For the crossingless code the
    only configuration is a single dancer on arc 0.
    """

    starts: tuple[int, ...]
    rule: Rule = OVER_FIRST

    def __post_init__(self):
        object.__setattr__(self, "starts", tuple(sorted(self.starts)))

    @property
    def n(self) -> int:
        return len(self.starts)

    def check(self, length: int) -> None:
        if not self.starts:
            raise InvalidConfiguration("a configuration needs at least one dancer")
        if len(set(self.starts)) != len(self.starts):
            raise InvalidConfiguration(f"duplicate starting arcs in {self.starts}")
        if length == 0:
            if self.starts != (0,):
                raise InvalidConfiguration("the crossingless code only admits starts (0,)")
            return
        for s in self.starts:
            if not 0 <= s < length:
                raise InvalidConfiguration(f"start {s} outside [0, {length})")


@dataclass(frozen=True)
class Advance:
    time: int
    dancer: int
    passage: int


@dataclass(frozen=True)
class Rendezvous:
    time: int
    dancers: tuple[int, int]
    passages: tuple[int, int]
    crossing: int


Move = Union[Advance, Rendezvous]


def _move_passages(move: Move) -> tuple[int, ...]:
    if isinstance(move, Advance):
        return (move.passage,)
    return move.passages


def _move_dancers(move: Move) -> tuple[int, ...]:
    if isinstance(move, Advance):
        return (move.dancer,)
    return move.dancers


@dataclass(frozen=True)
class Trace:
    """A complete schedule plus its crossing-status table.

    ``status[c][t]`` is the number of over passages of classical crossing
    ``c`` taken in the first ``t`` moves minus the number of under passages.
    """

    config: Configuration
    moves: tuple[Move, ...]
    status: Mapping[int, tuple[int, ...]] = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, code: DiagramCode, config: Configuration, moves: Sequence[Move]) -> "Trace":
        moves = tuple(_retime(moves))
        return cls(config, moves, _status_table(code, moves))

    @property
    def n(self) -> int:
        return self.config.n

    @property
    def rule(self) -> Rule:
        return self.config.rule

    @property
    def rendezvous_count(self) -> int:
        return sum(isinstance(m, Rendezvous) for m in self.moves)

    def to_record(self) -> dict:
        """Structured form used by the CLI's json-lines output."""
        out = []
        for m in self.moves:
            if isinstance(m, Advance):
                out.append({"t": m.time, "dancer": m.dancer, "passage": m.passage})
            else:
                out.append(
                    {
                        "t": m.time,
                        "dancers": list(m.dancers),
                        "passages": list(m.passages),
                        "crossing": m.crossing,
                    }
                )
        return {"starts": list(self.config.starts), "rule": str(self.rule), "moves": out}


def _retime(moves: Sequence[Move]):
    for t, m in enumerate(moves):
        yield replace(m, time=t)


def _status_table(code: DiagramCode, moves: Sequence[Move]) -> dict[int, tuple[int, ...]]:
    current = {c: 0 for c in code.classical_crossings}
    rows = {c: [0] for c in current}
    for m in moves:
        for i in _move_passages(m):
            p = code[i]
            if p.is_over:
                current[p.crossing] += 1
            elif p.is_under:
                current[p.crossing] -= 1
        for c in current:
            rows[c].append(current[c])
    return {c: tuple(v) for c, v in rows.items()}


def segments(length: int, starts: Sequence[int]) -> list[list[int]]:
    """Passage indices danced by each dancer, in dancing order."""
    starts = sorted(starts)
    if length == 0:
        return [[] for _ in starts]
    out = []
    for k, s in enumerate(starts):
        end = starts[(k + 1) % len(starts)]
        span = (end - s) % length or length
        out.append([(s + j) % length for j in range(span)])
    return out


# --------------------------------------------------------------------------
# greedy saturation


class _Dance:
    """Mutable scheduler state used by :func:`try_dance`."""

    def __init__(self, code: DiagramCode, config: Configuration):
        self.code = code
        self.rule = config.rule
        self.segs = segments(len(code), config.starts)
        self.cursor = [0] * len(self.segs)
        self.done = [False] * len(code)
        # dancer currently dancing each segment; only permuted under smoothing
        self.who = list(range(len(self.segs)))
        self.sync = self.rule.virtual.synchronized and code.has_virtual
        self.over_first = self.rule.classical is ClassicalRule.OVER_FIRST
        self.virtual = [p.is_virtual for p in code]
        self.is_over = [p.is_over for p in code]
        self.partner = [code.partner(i) for i in range(len(code))]

    def next_passage(self, seg: int) -> int | None:
        c = self.cursor[seg]
        s = self.segs[seg]
        return s[c] if c < len(s) else None

    def single_enabled(self, seg: int) -> bool:
        i = self.next_passage(seg)
        if i is None:
            return False
        if self.virtual[i]:
            return not self.sync
        if self.is_over[i] == self.over_first:
            return True
        return self.done[self.partner[i]]

    def rendezvous_pairs(self) -> list[tuple[int, int]]:
        if not self.sync:
            return []
        waiting: dict[int, int] = {}
        pairs = []
        for seg in range(len(self.segs)):
            i = self.next_passage(seg)
            if i is None or not self.virtual[i]:
                continue
            c = self.code[i].crossing
            if c in waiting:
                pairs.append((waiting[c], seg))
            else:
                waiting[c] = seg
        return sorted(pairs)

    def enabled(self) -> list[tuple[int, ...]]:
        moves: list[tuple[int, ...]] = list(self.rendezvous_pairs())
        moves.extend((seg,) for seg in range(len(self.segs)) if self.single_enabled(seg))
        return moves

    def apply(self, move: tuple[int, ...], t: int) -> Move:
        if len(move) == 1:
            (seg,) = move
            i = self.next_passage(seg)
            self.done[i] = True
            self.cursor[seg] += 1
            return Advance(t, self.who[seg], i)
        a, b = move
        ia, ib = self.next_passage(a), self.next_passage(b)
        self.done[ia] = self.done[ib] = True
        self.cursor[a] += 1
        self.cursor[b] += 1
        out = Rendezvous(t, (self.who[a], self.who[b]), (ia, ib), self.code[ia].crossing)
        if self.rule.virtual is VirtualRule.SMOOTHING:
            self.who[a], self.who[b] = self.who[b], self.who[a]
        return out


def saturate(
    code: DiagramCode,
    config: Configuration,
    rng: random.Random | None = None,
    check_monotone: bool = True,
) -> tuple[list[Move], frozenset[int]]:
    """Apply enabled moves until none is left; return the moves and the passages taken.

    By default rendezvous moves go first and then the lowest-numbered dancer
    that can step; passing ``rng`` picks uniformly among all enabled moves.
    """
    config.check(len(code))
    if len(code) == 0:
        return [], frozenset()
    state = _Dance(code, config)
    moves: list[Move] = []
    pending: set[tuple[int, ...]] = set()
    while True:
        enabled = state.enabled()
        if check_monotone and not pending.issubset(enabled):
            raise AssertionError(f"enabled moves {pending - set(enabled)} were disabled")
        if not enabled:
            break
        move = enabled[rng.randrange(len(enabled))] if rng is not None else enabled[0]
        moves.append(state.apply(move, len(moves)))
        pending = set(enabled)
        pending.discard(move)
    return moves, frozenset(i for i, d in enumerate(state.done) if d)


def try_dance(
    code: DiagramCode,
    config: Configuration,
    rng: random.Random | None = None,
    check_monotone: bool = True,
) -> Trace | None:
    """Return a witness schedule if ``config`` dances ``code``, else ``None``.

    Raises:
        InvalidConfiguration: starts out of range or repeated.
    """
    if len(code) == 0:
        config.check(0)
        return trivial_trace(code, config.rule)
    moves, taken = saturate(code, config, rng, check_monotone)
    if len(taken) != len(code):
        return None
    return Trace.build(code, config, moves)


def trivial_trace(code: DiagramCode, rule: Rule = OVER_FIRST) -> Trace:
    """One dancer going once around the crossingless circle."""
    if len(code):
        raise InvalidConfiguration("trivial traces exist only for the empty code")
    return Trace.build(code, Configuration((0,), rule), ())


# --------------------------------------------------------------------------
# validation


def validate_trace(code: DiagramCode, trace: Trace, rule: Rule | None = None) -> None:
    """Check every trace invariant, raising :class:`InvalidTrace` on the first failure.

    ``rule`` defaults to the rule recorded in the trace's configuration.
    """
    rule = rule or trace.rule
    L = len(code)
    try:
        trace.config.check(L)
    except InvalidConfiguration as exc:
        raise InvalidTrace(str(exc)) from exc
    segs = segments(L, trace.config.starts)
    owner = {}
    for k, seg in enumerate(segs):
        for i in seg:
            owner[i] = k
    cursor = [0] * len(segs)
    who = list(range(len(segs)))
    done = [False] * L
    status = {c: 0 for c in code.classical_crossings}
    over_first = rule.classical is ClassicalRule.OVER_FIRST
    sync = rule.virtual.synchronized

    for t, move in enumerate(trace.moves):
        if move.time != t:
            raise InvalidTrace(f"move {t} carries time {move.time}")
        passages = _move_passages(move)
        dancers = _move_dancers(move)
        for i in passages:
            if not 0 <= i < L:
                raise InvalidTrace(f"move {t}: passage {i} out of range")
            if done[i]:
                raise InvalidTrace(f"move {t}: passage {i} advanced twice")
            seg = owner[i]
            if segs[seg][cursor[seg]] != i:
                raise InvalidTrace(f"move {t}: passage {i} is not next on its dancer's path")
        segs_moved = [owner[i] for i in passages]
        for seg, d in zip(segs_moved, dancers):
            if who[seg] != d:
                raise InvalidTrace(f"move {t}: dancer {d} is not the one on that path")
        if isinstance(move, Rendezvous):
            ia, ib = move.passages
            pa, pb = code[ia], code[ib]
            if not (pa.is_virtual and pb.is_virtual and pa.crossing == pb.crossing == move.crossing):
                raise InvalidTrace(f"move {t}: rendezvous must use both passages of one virtual crossing")
            if segs_moved[0] == segs_moved[1]:
                raise InvalidTrace(f"move {t}: rendezvous needs two distinct dancers")
        else:
            p = code[move.passage]
            if p.is_virtual and sync:
                raise InvalidTrace(f"move {t}: virtual crossing {p.crossing} passed alone under {rule.virtual.value}")
        for i in passages:
            done[i] = True
            cursor[owner[i]] += 1
            p = code[i]
            if p.is_over:
                status[p.crossing] += 1
            elif p.is_under:
                status[p.crossing] -= 1
            if p.is_classical:
                s = status[p.crossing]
                if (over_first and s < 0) or (not over_first and s > 0):
                    raise InvalidTrace(
                        f"move {t}: crossing {p.crossing} status {s} breaks the "
                        f"{rule.classical.value}-first rule"
                    )
        if isinstance(move, Rendezvous) and rule.virtual is VirtualRule.SMOOTHING:
            a, b = segs_moved
            who[a], who[b] = who[b], who[a]
    if not all(done):
        missing = [i for i, d in enumerate(done) if not d]
        raise InvalidTrace(f"passages {missing} never danced")
    expected = _status_table(code, trace.moves)
    if trace.status and dict(trace.status) != expected:
        raise InvalidTrace("recorded crossing-status table is inconsistent with the moves")


def is_valid_trace(code: DiagramCode, trace: Trace, rule: Rule | None = None) -> bool:
    try:
        validate_trace(code, trace, rule)
    except InvalidTrace:
        return False
    return True


# --------------------------------------------------------------------------
# transforms


def _segment_of(length: int, starts: Sequence[int]) -> dict[int, int]:
    return {i: k for k, seg in enumerate(segments(length, starts)) for i in seg}


def retrograde_trace(code: DiagramCode, trace: Trace) -> Trace:
    """Play ``trace`` backwards on the reversed code.

    The old ending arcs become the new starting arcs and over-first becomes
    under-first (and vice versa).  Returns a trace valid for
    ``reverse_code(code)``.
    """
    validate_trace(code, trace)
    rule = trace.rule
    if rule.virtual is VirtualRule.SMOOTHING and trace.rendezvous_count:
        coincident = smoothing_to_coincident(code, trace)
        back = retrograde_trace(code, coincident)
        return coincident_to_smoothing(reverse_code(code), back)

    L = len(code)
    new_rule = Rule(rule.classical.opposite, rule.virtual)
    if L == 0:
        return trivial_trace(code, new_rule)
    old = trace.config.starts
    new_starts = tuple(sorted((L - s) % L for s in old))
    # old segment k ends at old[k+1]; backwards it starts on arc L - old[k+1]
    new_index = {s: k for k, s in enumerate(new_starts)}
    dancer_map = {k: new_index[(L - old[(k + 1) % len(old)]) % L] for k in range(len(old))}
    owner = _segment_of(L, old)

    moves: list[Move] = []
    for move in reversed(trace.moves):
        if isinstance(move, Advance):
            moves.append(Advance(0, dancer_map[owner[move.passage]], L - 1 - move.passage))
        else:
            ia, ib = move.passages
            moves.append(
                Rendezvous(
                    0,
                    (dancer_map[owner[ia]], dancer_map[owner[ib]]),
                    (L - 1 - ia, L - 1 - ib),
                    move.crossing,
                )
            )
    rev = reverse_code(code)
    out = Trace.build(rev, Configuration(new_starts, new_rule), moves)
    validate_trace(rev, out)
    return out


def coincident_to_smoothing(code: DiagramCode, trace: Trace) -> Trace:
    """Swap dancer identities downstream of every rendezvous.

    Each (passage, time) event is kept; only who dances it changes.
    """
    if trace.rule.virtual is not VirtualRule.COINCIDENT:
        raise InvalidTrace(f"expected a coincident trace, got {trace.rule}")
    validate_trace(code, trace)
    owner = _segment_of(len(code), trace.config.starts)
    who = list(range(trace.n))
    moves: list[Move] = []
    for m in trace.moves:
        if isinstance(m, Advance):
            moves.append(Advance(m.time, who[owner[m.passage]], m.passage))
            continue
        a, b = (owner[i] for i in m.passages)
        moves.append(Rendezvous(m.time, (who[a], who[b]), m.passages, m.crossing))
        who[a], who[b] = who[b], who[a]
    rule = Rule(trace.rule.classical, VirtualRule.SMOOTHING)
    out = Trace.build(code, Configuration(trace.config.starts, rule), moves)
    validate_trace(code, out)
    return out


def smoothing_to_coincident(code: DiagramCode, trace: Trace) -> Trace:
    """Inverse of :func:`coincident_to_smoothing`."""
    if trace.rule.virtual is not VirtualRule.SMOOTHING:
        raise InvalidTrace(f"expected a smoothing trace, got {trace.rule}")
    validate_trace(code, trace)
    owner = _segment_of(len(code), trace.config.starts)
    moves: list[Move] = []
    for m in trace.moves:
        if isinstance(m, Advance):
            moves.append(Advance(m.time, owner[m.passage], m.passage))
        else:
            moves.append(
                Rendezvous(m.time, tuple(owner[i] for i in m.passages), m.passages, m.crossing)
            )
    rule = Rule(trace.rule.classical, VirtualRule.COINCIDENT)
    out = Trace.build(code, Configuration(trace.config.starts, rule), moves)
    validate_trace(code, out)
    return out


# --------------------------------------------------------------------------
# rendering


def dancer_label(k: int) -> str:
    letters = string.ascii_uppercase
    if k < len(letters):
        return letters[k]
    return f"D{k}"


def render_trace_table(code: DiagramCode, trace: Trace) -> str:
    """Plain-text dance table.

    Columns are the passages of ``code``; a dancer is drawn in the column of
    the passage it is about to take (a finished dancer sits on the column of
    the next dancer's start).  Crossing statuses are appended to each row.
    """
    L = len(code)
    if L == 0 or not trace.moves:
        raise ValueError("cannot render a trace without moves")
    validate_trace(code, trace)
    segs = segments(L, trace.config.starts)
    owner = {i: k for k, seg in enumerate(segs) for i in seg}
    cursor = [0] * len(segs)
    who = list(range(len(segs)))
    smoothing = trace.rule.virtual is VirtualRule.SMOOTHING
    crossings = list(trace.status)

    def arc_of(seg: int) -> int:
        s = segs[seg]
        if cursor[seg] < len(s):
            return s[cursor[seg]]
        return (s[-1] + 1) % L

    def row() -> list[str]:
        cells = [[] for _ in range(L)]
        for seg in range(len(segs)):
            cells[arc_of(seg)].append(dancer_label(who[seg]))
        return ["".join(sorted(c)) for c in cells]

    rows = [row()]
    for m in trace.moves:
        ps = _move_passages(m)
        for i in ps:
            cursor[owner[i]] += 1
        if smoothing and isinstance(m, Rendezvous):
            a, b = (owner[i] for i in ps)
            who[a], who[b] = who[b], who[a]
        rows.append(row())

    header = [str(p) for p in code]
    status_header = [f"C{c}" for c in crossings]
    widths = [max(len(header[j]), *(len(r[j]) for r in rows)) for j in range(L)]
    status_widths = [
        max(len(status_header[j]), *(len(str(v)) for v in trace.status[c]))
        for j, c in enumerate(crossings)
    ]
    tw = max(1, len(str(len(rows) - 1)))

    def fmt(t: str, cells: list[str], stats: list[str]) -> str:
        left = " ".join(c.ljust(w) for c, w in zip(cells, widths))
        right = " ".join(s.rjust(w) for s, w in zip(stats, status_widths))
        line = f"{t.rjust(tw)} | {left}"
        if crossings:
            line += f" | {right}"
        return line.rstrip()

    lines = [fmt("t", header, status_header)]
    for t, cells in enumerate(rows):
        stats = [str(trace.status[c][t]) for c in crossings]
        lines.append(fmt(str(t), cells, stats))
    return "\n".join(lines)


def describe(code: DiagramCode, trace: Trace) -> str:
    """One-line summary used in logs and error messages."""
    return f"{serialize_code(code)} starts={list(trace.config.starts)} rule={trace.rule}"
