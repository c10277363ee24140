"""Command-line front end: ``knotdance <command> ...``.

Input files hold one code per line (``#`` lines are comments, a blank line is
the crossingless code).  ``-`` reads standard input.

Exit status: 0 success, 1 a property check failed, 2 bad input,
3 a resource limit was hit.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from contextlib import nullcontext
from typing import Callable, Iterable, TextIO

from knotdance.braid import braid_closure, braid_schedule, parse_braid, random_knot_word
from knotdance.bridges import bridge_count
from knotdance.codec import DiagramCode, parse_code, read_code_lines, serialize_code
from knotdance.engine import Configuration, Trace, render_trace_table, try_dance
from knotdance.errors import KnotDanceError, NotAKnot, ResourceLimit
from knotdance.properties import check_braid_bound, check_properties
from knotdance.search import (
    MAX_CROSSINGS,
    RULES,
    dance_numbers,
    enumerate_codes,
    enumerate_corpus,
    min_dancers,
    restriction_applies,
)
from knotdance.slide import reduce_to_bridge_minimal

__all__ = ["main", "build_parser", "certified_bounds"]

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3

RULE_ORDER = ("over", "under", "unrestricted", "coincident", "smoothing")


class InputError(Exception):
    """Collected parse/validation problems, one message per bad line."""

    def __init__(self, messages: list[str]):
        super().__init__("\n".join(messages))
        self.messages = messages


# --------------------------------------------------------------------------
# helpers


def _open(path: str):
    return nullcontext(sys.stdin) if path == "-" else open(path, encoding="utf-8")


def _name(path: str) -> str:
    return "<stdin>" if path == "-" else path


def load_codes(path: str) -> list[tuple[int, DiagramCode]]:
    """Parse every code line; raise :class:`InputError` listing all bad lines."""
    try:
        with _open(path) as fh:
            lines = list(read_code_lines(fh))
    except OSError as exc:
        raise InputError([f"{path}: {exc.strerror}"]) from exc
    codes, errors = [], []
    for lineno, text in lines:
        try:
            codes.append((lineno, parse_code(text)))
        except KnotDanceError as exc:
            errors.append(f"{_name(path)}:{lineno}: {exc}")
    if errors:
        raise InputError(errors)
    return codes


def certified_bounds(code: DiagramCode, numbers: dict[str, int | None]) -> dict[str, int]:
    """Knot-level upper bounds certified by this one diagram.

    The crossingless diagram has no bridge, but the unknot's bridge index is
    1 by convention, hence the ``max(1, ...)``.
    """
    bridges = max(1, bridge_count(code).count)
    bounds: dict[str, int] = {}
    if code.has_virtual:
        if numbers.get("unrestricted") is not None:
            bounds["da_unrestricted"] = numbers["unrestricted"]
        if numbers.get("coincident") is not None:
            bounds["da_coincident"] = numbers["coincident"]
        bounds["b1"] = bridges
    else:
        classical = [numbers[r] for r in ("over", "under") if numbers.get(r) is not None]
        if classical:
            bounds["da"] = min(classical)
        bounds["br"] = bridges
    return bounds


def _emit(out: TextIO, fmt: str, record: dict, text: Callable[[dict], str]) -> None:
    if fmt == "json-lines":
        out.write(json.dumps(record, sort_keys=True) + "\n")
    else:
        out.write(text(record) + "\n")


def _starts(s: Iterable[int]) -> str:
    return "[" + ", ".join(map(str, s)) + "]"


def _table(code: DiagramCode, trace: Trace) -> str:
    if not len(code):
        return "(crossingless: one dancer goes once around)"
    return render_trace_table(code, trace)


# --------------------------------------------------------------------------
# compute


def _compute_one(code: DiagramCode, rules: list[str], restrict: bool) -> tuple[dict, dict[str, Trace]]:
    numbers: dict[str, int | None] = {}
    witnesses: dict[str, Trace] = {}
    restricted: list[str] = []
    if rules == list(RULE_ORDER) and not restrict:
        dn = dance_numbers(code)
        numbers = dn.as_dict()
        witnesses = dict(dn.witnesses)
    else:
        for name in rules:
            rule = RULES[name]
            use = restrict and restriction_applies(code, rule)
            try:
                n, _, trace = min_dancers(code, rule, use)
            except KnotDanceError:
                numbers[name] = None
                continue
            numbers[name] = n
            witnesses[name] = trace
            if use:
                restricted.append(name)
    record = {
        "code": serialize_code(code),
        "length": len(code),
        "bridges": bridge_count(code).to_record(),
        "numbers": {r: numbers.get(r) for r in rules},
        "starts": {r: list(witnesses[r].config.starts) for r in rules if r in witnesses},
        "bounds": certified_bounds(code, numbers),
    }
    if restrict:
        record["restricted"] = restricted
    return record, witnesses


def _compute_text(record: dict) -> str:
    lines = [f"line {record['line']}: {record['code'] or '(crossingless)'}"]
    b = record["bridges"]
    lines.append(f"  bridges: {b['count']} starts {_starts(b['starts'])}")
    for rule, n in record["numbers"].items():
        if n is None:
            lines.append(f"  {rule}: infeasible")
        else:
            tag = " (bridge starts only)" if rule in record.get("restricted", ()) else ""
            lines.append(f"  {rule}: {n} starts {_starts(record['starts'][rule])}{tag}")
    bounds = ", ".join(f"{k} <= {v}" for k, v in record["bounds"].items())
    lines.append(f"  bounds: {bounds}")
    for rule, table in record.get("tables", {}).items():
        lines.append(f"  trace ({rule}):")
        lines.extend("    " + row for row in table.splitlines())
    return "\n".join(lines)


def cmd_compute(args: argparse.Namespace, out: TextIO) -> int:
    codes = load_codes(args.input)
    rules = list(RULE_ORDER) if args.rule == "all" else [args.rule]
    for lineno, code in codes:
        record, witnesses = _compute_one(code, rules, args.restrict_starts)
        record = {"line": lineno, **record}
        if args.trace:
            if args.format == "json-lines":
                record["traces"] = {r: t.to_record() for r, t in witnesses.items() if r in rules}
            else:
                record["tables"] = {r: _table(code, witnesses[r]) for r in rules if r in witnesses}
        _emit(out, args.format, record, _compute_text)
    return EXIT_OK


# --------------------------------------------------------------------------
# reduce


def _reduce_text(record: dict) -> str:
    head = f"line {record['line']}: {record['code'] or '(crossingless)'}"
    if record["status"] == "no-classical-crossings":
        return f"{head}\n  no-classical-crossings"
    lines = [
        head,
        f"  reduced: {record['reduced']}",
        f"  bridges: {record['bridges_before']} -> {record['bridges_after']}",
        f"  dance number: {record['dance_number']}",
        f"  slides: {record['slides']}",
    ]
    if record["status"] == "already-minimal":
        lines.append("  already-minimal")
    return "\n".join(lines)


def cmd_reduce(args: argparse.Namespace, out: TextIO) -> int:
    for lineno, code in load_codes(args.input):
        record: dict = {"line": lineno, "code": serialize_code(code)}
        if not code.classical_crossings:
            record["status"] = "no-classical-crossings"
        else:
            history: list[DiagramCode] = []
            reduced, trace = reduce_to_bridge_minimal(code, history=history)
            slides = len(history) - 1
            record.update(
                reduced=serialize_code(reduced),
                bridges_before=bridge_count(code).count,
                bridges_after=bridge_count(reduced).count,
                dance_number=trace.n,
                starts=list(trace.config.starts),
                slides=slides,
                status="already-minimal" if slides == 0 else "reduced",
            )
        _emit(out, args.format, record, _reduce_text)
    return EXIT_OK


# --------------------------------------------------------------------------
# trace


def _trace_text(record: dict) -> str:
    head = f"line {record['line']}: {record['code'] or '(crossingless)'}"
    if not record["dances"]:
        return f"{head}\n  starts {_starts(record['starts'])} rule {record['rule']}: does not dance"
    lines = [f"{head}\n  starts {_starts(record['starts'])} rule {record['rule']}:"]
    lines.extend("    " + row for row in record["table"].splitlines())
    return "\n".join(lines)


def _parse_starts(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(x) for x in text.replace(",", " ").split()))
    except ValueError as exc:
        raise InputError([f"--starts: expected integers, got {text!r}"]) from exc


def cmd_trace(args: argparse.Namespace, out: TextIO) -> int:
    codes = load_codes(args.input)
    rule = RULES[args.rule]
    given = None if args.starts is None else _parse_starts(args.starts)
    for lineno, code in codes:
        if given is None:
            _, config, trace = min_dancers(code, rule)
        else:
            config = Configuration(given, rule)
            try:
                trace = try_dance(code, config)
            except KnotDanceError as exc:
                raise InputError([f"{_name(args.input)}:{lineno}: {exc}"]) from exc
        record: dict = {
            "line": lineno,
            "code": serialize_code(code),
            "rule": args.rule,
            "starts": list(config.starts),
            "dances": trace is not None,
        }
        if trace is not None:
            if args.format == "json-lines":
                record["trace"] = trace.to_record()
            else:
                record["table"] = _table(code, trace)
        _emit(out, args.format, record, _trace_text)
    return EXIT_OK


# --------------------------------------------------------------------------
# closure


def cmd_closure(args: argparse.Namespace, out: TextIO) -> int:
    try:
        word = parse_braid(args.word)
    except KnotDanceError as exc:
        raise InputError([f"braid word: {exc}"]) from exc
    if args.schedule:
        code, trace = braid_schedule(word)
    else:
        code, trace = braid_closure(word), None
    record: dict = {"word": str(word), "strands": word.strands, "code": serialize_code(code)}
    if trace is not None:
        record["dancers"] = trace.n
        if args.format == "json-lines":
            record["trace"] = trace.to_record()
        else:
            record["table"] = _table(code, trace)

    def text(r: dict) -> str:
        lines = [r["code"] or "(crossingless)"]
        if "table" in r:
            lines.append(f"coincident schedule with {r['dancers']} dancers:")
            lines.append(r["table"])
        return "\n".join(lines)

    _emit(out, args.format, record, text)
    return EXIT_OK


# --------------------------------------------------------------------------
# enumerate


def cmd_enumerate(args: argparse.Namespace, out: TextIO) -> int:
    if args.exact:
        codes = enumerate_codes(args.classical, args.virtual, args.budget)
    else:
        codes = enumerate_corpus(args.classical, args.virtual, args.budget)
    for code in codes:
        _emit(out, args.format, {"code": serialize_code(code)}, lambda r: r["code"])
    return EXIT_OK


# --------------------------------------------------------------------------
# check


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    corpus = list(enumerate_corpus(args.max_classical, args.max_virtual))
    report = check_properties(corpus)
    rng = random.Random(args.seed)
    words = [random_knot_word(rng) for _ in range(args.braid_words)]
    braid = check_braid_bound(words)
    report.results[braid.name] = braid
    if args.format == "json-lines":
        for rec in report.to_records():
            out.write(json.dumps(rec, sort_keys=True) + "\n")
    else:
        out.write(report.summary() + "\n")
    return EXIT_OK if report.ok else EXIT_FAILED


# --------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knotdance",
        description="Dance numbers and bridge numbers of extended Gauss codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    formats = ("text", "json-lines")

    p = sub.add_parser("compute", help="bridge count, dance numbers and bounds per code")
    p.add_argument("input", help="file of codes, one per line ('-' for stdin)")
    p.add_argument("--rule", choices=RULE_ORDER + ("all",), default="all")
    p.add_argument(
        "--restrict-starts",
        action="store_true",
        help="try only bridge starts where that keeps the minimum (over-first rules)",
    )
    p.add_argument("--trace", action="store_true", help="include a minimal witness trace")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("reduce", help="slide bridges until bridge count equals dance number")
    p.add_argument("input")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("trace", help="dance table for given starts (default: a minimal witness)")
    p.add_argument("input")
    p.add_argument("--rule", choices=RULE_ORDER, default="over")
    p.add_argument("--starts", help="comma-separated starting arcs")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("closure", help="Gauss code of a braid closure")
    p.add_argument("word", help="e.g. 'n=2 s1 s1 s1'")
    p.add_argument("--schedule", action="store_true", help="also print the strand-by-strand dance")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("enumerate", help="one code per rotation/relabel class")
    p.add_argument("--classical", type=int, default=3, help="classical crossings (maximum unless --exact)")
    p.add_argument("--virtual", type=int, default=0, help="virtual crossings (maximum unless --exact)")
    p.add_argument("--exact", action="store_true", help="exactly these counts")
    p.add_argument("--budget", type=int, default=MAX_CROSSINGS, help="largest total crossing count allowed")
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("check", help="run the property suite on an enumerated corpus")
    p.add_argument("--max-classical", type=int, default=3)
    p.add_argument("--max-virtual", type=int, default=0)
    p.add_argument("--braid-words", type=int, default=50, help="random braid words to check")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=formats, default="text")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except InputError as exc:
        for msg in exc.messages:
            err.write(f"error: {msg}\n")
        return EXIT_INPUT
    except NotAKnot as exc:
        err.write(f"error: {exc} (components: {exc.components})\n")
        return EXIT_INPUT
    except ResourceLimit as exc:
        err.write(f"error: resource limit: {exc}\n")
        return EXIT_RESOURCE
    except KnotDanceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
