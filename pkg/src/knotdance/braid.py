"""Virtual braid words, their closures, and the strand-by-strand coincident dance.

Word syntax: an optional ``n=<strands>`` followed by letters ``s<i>``
(positive classical crossing of strands i, i+1), ``S<i>`` (its inverse) and
``v<i>`` (virtual crossing).  Strands are numbered from 1 at the left.

Sign convention: at ``s<i>`` the strand moving from position i to i+1
passes over; at ``S<i>`` it passes under.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass

from knotdance.codec import DiagramCode, Kind, Passage
from knotdance.engine import (
    COINCIDENT,
    Advance,
    Configuration,
    Move,
    Rendezvous,
    Trace,
    trivial_trace,
    validate_trace,
)
from knotdance.errors import CodeSyntaxError, IndexOutOfRange, NotAKnot

__all__ = [
    "BraidWord",
    "parse_braid",
    "braid_closure",
    "braid_schedule",
    "closure_components",
    "random_knot_word",
]

SIGMA, SIGMA_INV, TAU = "s", "S", "v"


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[tuple[str, int], ...] = ()

    def __post_init__(self):
        if self.strands < 1:
            raise IndexOutOfRange(f"a braid needs at least one strand, got {self.strands}")
        for kind, i in self.letters:
            if kind not in (SIGMA, SIGMA_INV, TAU):
                raise CodeSyntaxError(f"unknown generator {kind!r}", token=kind)
            if not 1 <= i <= self.strands - 1:
                raise IndexOutOfRange(
                    f"generator {kind}{i} needs 1 <= i <= {self.strands - 1}"
                )

    def __str__(self) -> str:
        return " ".join([f"n={self.strands}"] + [f"{k}{i}" for k, i in self.letters])

    def permutation(self) -> list[int]:
        """``perm[p]`` is the top position (0-based) of the strand starting at bottom ``p``."""
        pos = list(range(self.strands))
        for _, i in self.letters:
            a, b = i - 1, i
            pos = [b if x == a else a if x == b else x for x in pos]
        return pos


_LETTER = re.compile(r"^([sSv])(\d+)$")
_STRANDS = re.compile(r"^n=(\d+)$")


def parse_braid(text: str) -> BraidWord:
    """Parse e.g. ``"n=2 s1 s1 v1"``.

    Without ``n=`` the strand count is one more than the largest index.

    Raises:
        CodeSyntaxError: malformed token or misplaced ``n=``.
        IndexOutOfRange: a generator index outside ``1..n-1``.
    """
    tokens = text.split()
    strands = None
    if tokens and tokens[0].startswith("n="):
        m = _STRANDS.match(tokens[0])
        if m is None:
            raise CodeSyntaxError(f"malformed strand count {tokens[0]!r}", token=tokens[0])
        strands = int(m.group(1))
        tokens = tokens[1:]
    letters = []
    for tok in tokens:
        m = _LETTER.match(tok)
        if m is None:
            raise CodeSyntaxError(f"malformed braid letter {tok!r}", token=tok)
        letters.append((m.group(1), int(m.group(2))))
    if strands is None:
        strands = max((i for _, i in letters), default=0) + 1
    return BraidWord(strands, tuple(letters))


def closure_components(word: BraidWord) -> int:
    perm = word.permutation()
    seen = set()
    count = 0
    for p in range(word.strands):
        if p in seen:
            continue
        count += 1
        while p not in seen:
            seen.add(p)
            p = perm[p]
    return count


def _traverse(word: BraidWord):
    """Walk the closure from the bottom of strand 1.

    Returns the passages, plus for each pass through the braid its bottom
    position and the code index where it begins.
    """
    components = closure_components(word)
    if components != 1:
        raise NotAKnot(f"closure of {word} has {components} components", components)
    passages: list[Passage] = []
    passes: list[tuple[int, int]] = []
    pos = 0
    while True:
        passes.append((pos, len(passages)))
        for k, (kind, i) in enumerate(word.letters, start=1):
            a, b = i - 1, i
            if pos not in (a, b):
                continue
            rising = pos == a
            if kind == TAU:
                passages.append(Passage(k, Kind.VIRTUAL))
            elif (kind == SIGMA) == rising:
                passages.append(Passage(k, Kind.OVER))
            else:
                passages.append(Passage(k, Kind.UNDER))
            pos = b if rising else a
        if pos == 0:
            break
    return passages, passes


def braid_closure(word: BraidWord) -> DiagramCode:
    """Gauss code of the closure, read upward from the bottom of strand 1.

    Crossing ``k`` of the code is the ``k``-th letter of the word.

    Raises:
        NotAKnot: the closure is a link with more than one component.
    """
    passages, _ = _traverse(word)
    return DiagramCode(tuple(passages))


def braid_schedule(word: BraidWord) -> tuple[DiagramCode, Trace]:
    """Closure code plus a coincident dance with one dancer per strand.

    All dancers climb the braid one letter at a time.  At a classical letter
    the dancer on the over-strand goes first; at a virtual letter the two
    dancers meet.
    """
    passages, passes = _traverse(word)
    code = DiagramCode(tuple(passages))
    if not passages:
        return code, trivial_trace(code, COINCIDENT)
    starts = tuple(sorted(idx for _, idx in passes))
    dancer_of_index = {s: k for k, s in enumerate(starts)}
    # dancer standing at each braid position, and its next code index
    at_position = {pos: dancer_of_index[idx] for pos, idx in passes}
    cursor = {dancer_of_index[idx]: idx for _, idx in passes}

    moves: list[Move] = []
    for kind, i in word.letters:
        a, b = i - 1, i
        da, db = at_position[a], at_position[b]
        ia, ib = cursor[da], cursor[db]
        if kind == TAU:
            moves.append(Rendezvous(len(moves), (da, db), (ia, ib), code[ia].crossing))
        else:
            first, second = (da, db) if code[ia].is_over else (db, da)
            for d in (first, second):
                moves.append(Advance(len(moves), d, cursor[d]))
        cursor[da] += 1
        cursor[db] += 1
        at_position[a], at_position[b] = db, da
    trace = Trace.build(code, Configuration(starts, COINCIDENT), moves)
    validate_trace(code, trace)
    return code, trace


def random_knot_word(
    rng: random.Random, max_strands: int = 3, max_letters: int = 6, max_tries: int = 10_000
) -> BraidWord:
    """Draw uniformly random words until one closes to a single component."""
    for _ in range(max_tries):
        n = rng.randint(min(2, max_strands), max_strands)
        if n == 1:
            return BraidWord(1, ())
        length = rng.randint(0, max_letters)
        letters = tuple(
            (rng.choice((SIGMA, SIGMA_INV, TAU)), rng.randint(1, n - 1)) for _ in range(length)
        )
        word = BraidWord(n, letters)
        if closure_components(word) == 1:
            return word
    raise RuntimeError("no single-component word found")
