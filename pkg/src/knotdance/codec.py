"""Extended Gauss codes: parsing, validation, serialization, canonical forms.

A code is the cyclic sequence of passages met while traversing an oriented
knot diagram.  Classical crossings contribute one over passage (``3+``) and
one under passage (``3-``); virtual crossings contribute two virtual
passages (``v3``).  Arc ``i`` of a code of length ``L`` is the stretch of
the diagram immediately before passage ``i``.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from knotdance.errors import CodeSyntaxError, ValidationError

__all__ = [
    "Kind",
    "Passage",
    "DiagramCode",
    "parse_code",
    "serialize_code",
    "reverse_code",
    "canonical_rotation",
    "rotate",
    "read_code_lines",
]


class Kind(enum.Enum):
    OVER = "+"
    UNDER = "-"
    VIRTUAL = "v"

    @property
    def rank(self) -> int:
        return _KIND_RANK[self]


_KIND_RANK = {Kind.OVER: 0, Kind.UNDER: 1, Kind.VIRTUAL: 2}


@dataclass(frozen=True, order=False)
class Passage:
    crossing: int
    kind: Kind

    def __post_init__(self):
        if not isinstance(self.crossing, int) or self.crossing < 1:
            raise ValidationError(
                f"crossing identifier must be a positive integer, got {self.crossing!r}",
                crossing=None,
            )

    @property
    def is_over(self) -> bool:
        return self.kind is Kind.OVER

    @property
    def is_under(self) -> bool:
        return self.kind is Kind.UNDER

    @property
    def is_virtual(self) -> bool:
        return self.kind is Kind.VIRTUAL

    @property
    def is_classical(self) -> bool:
        return self.kind is not Kind.VIRTUAL

    def __str__(self) -> str:
        if self.kind is Kind.VIRTUAL:
            return f"v{self.crossing}"
        return f"{self.crossing}{self.kind.value}"

    def __repr__(self) -> str:
        return f"Passage({self})"


def _over(c: int) -> Passage:
    return Passage(c, Kind.OVER)


def _under(c: int) -> Passage:
    return Passage(c, Kind.UNDER)


@dataclass(frozen=True)
class DiagramCode:
    """An immutable, validated extended Gauss code.

    Equality (``==``) compares passages element-wise from index 0; use
    :meth:`cyclic_equal` for rotation-invariant comparison.
    """

    passages: tuple[Passage, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "passages", tuple(self.passages))
        _validate(self.passages)
        partner = [0] * len(self.passages)
        seen: dict[int, int] = {}
        for i, p in enumerate(self.passages):
            if p.crossing in seen:
                j = seen[p.crossing]
                partner[i], partner[j] = j, i
            else:
                seen[p.crossing] = i
        object.__setattr__(self, "_partner", tuple(partner))

    @classmethod
    def from_tokens(cls, tokens: Iterable[str]) -> "DiagramCode":
        return cls(tuple(_parse_token(t) for t in tokens))

    def __len__(self) -> int:
        return len(self.passages)

    def __iter__(self) -> Iterator[Passage]:
        return iter(self.passages)

    def __getitem__(self, i: int) -> Passage:
        return self.passages[i]

    def __str__(self) -> str:
        return serialize_code(self)

    def __repr__(self) -> str:
        return f"DiagramCode({serialize_code(self)!r})"

    def partner(self, i: int) -> int:
        """Index of the other passage through the same crossing as passage ``i``."""
        return self._partner[i]

    @property
    def classical_crossings(self) -> tuple[int, ...]:
        return tuple(sorted({p.crossing for p in self.passages if p.is_classical}))

    @property
    def virtual_crossings(self) -> tuple[int, ...]:
        return tuple(sorted({p.crossing for p in self.passages if p.is_virtual}))

    @property
    def has_virtual(self) -> bool:
        return any(p.is_virtual for p in self.passages)

    def cyclic_equal(self, other: "DiagramCode") -> bool:
        return canonical_rotation(self) == canonical_rotation(other)


_TOKEN = re.compile(r"^(?:(?P<c>\d+)(?P<s>[+-])|v(?P<v>\d+))$")


def _parse_token(token: str) -> Passage:
    m = _TOKEN.match(token)
    if m is None:
        raise CodeSyntaxError(f"malformed token {token!r}", token=token)
    if m.group("v") is not None:
        n = int(m.group("v"))
        kind = Kind.VIRTUAL
    else:
        n = int(m.group("c"))
        kind = Kind.OVER if m.group("s") == "+" else Kind.UNDER
    if n < 1:
        raise CodeSyntaxError(f"crossing identifier must be positive in {token!r}", token=token)
    return Passage(n, kind)


def _validate(passages: Sequence[Passage]) -> None:
    kinds: dict[int, Counter] = {}
    for p in passages:
        kinds.setdefault(p.crossing, Counter())[p.kind] += 1
    for c, counts in kinds.items():
        total = sum(counts.values())
        if counts[Kind.VIRTUAL] and (counts[Kind.OVER] or counts[Kind.UNDER]):
            raise ValidationError(
                f"crossing {c} is used as both classical and virtual", crossing=c
            )
        if counts[Kind.VIRTUAL]:
            if total != 2:
                raise ValidationError(
                    f"virtual crossing {c} appears {total} times (expected 2)", crossing=c
                )
        elif counts[Kind.OVER] != 1 or counts[Kind.UNDER] != 1:
            raise ValidationError(
                f"classical crossing {c} needs exactly one over and one under passage, "
                f"got {counts[Kind.OVER]} over and {counts[Kind.UNDER]} under",
                crossing=c,
            )


def parse_code(text: str) -> DiagramCode:
    """Parse whitespace-separated tokens such as ``"1+ 2- v3 1- 2+ v3"``.

    Raises:
        CodeSyntaxError: a token does not match ``<int>+``, ``<int>-`` or ``v<int>``.
        ValidationError: the passages do not pair up into crossings.
    """
    return DiagramCode.from_tokens(text.split())


def serialize_code(code: DiagramCode) -> str:
    return " ".join(str(p) for p in code.passages)


def reverse_code(code: DiagramCode) -> DiagramCode:
    """Traverse the same diagram against its orientation; kinds are kept."""
    return DiagramCode(code.passages[::-1])


def rotate(code: DiagramCode, k: int) -> DiagramCode:
    """Return the code read from passage ``k`` onward."""
    if not code.passages:
        return code
    k %= len(code)
    return DiagramCode(code.passages[k:] + code.passages[:k])


def _relabel_key(seq: Sequence[Passage]) -> tuple[tuple[int, int], ...]:
    labels: dict[int, int] = {}
    key = []
    for p in seq:
        label = labels.setdefault(p.crossing, len(labels) + 1)
        key.append((label, p.kind.rank))
    return tuple(key)


def canonical_rotation(code: DiagramCode) -> DiagramCode:
    """Least rotation after relabeling crossings 1, 2, ... in order of first appearance.

    Passages compare by (label, kind) with over < under < virtual.  Two codes
    are rotations of each other up to relabeling iff their canonical forms
    are equal.
    """
    ps = code.passages
    if not ps:
        return code
    n = len(ps)
    best = min(_relabel_key(ps[k:] + ps[:k]) for k in range(n))
    kinds = [Kind.OVER, Kind.UNDER, Kind.VIRTUAL]
    return DiagramCode(tuple(Passage(label, kinds[rank]) for label, rank in best))


def read_code_lines(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield ``(line_number, text)`` for code lines, skipping ``#`` comments.

    Blank lines are kept: they encode the crossingless diagram.  A trailing
    empty line at end of file is not a separate code.
    """
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\n").rstrip("\r")
        if line.lstrip().startswith("#"):
            continue
        yield lineno, line.strip()
