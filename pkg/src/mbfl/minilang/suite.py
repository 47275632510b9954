"""Test-suite files: one record per test.

    test t1; input: 1 2 3; expect: 2;

Records may span lines; ``#`` starts a comment.
"""
from __future__ import annotations

import re
from pathlib import Path

from .ast import Program
from .interpreter import TestCase

_RECORD = re.compile(
    r"test\s+(?P<id>[A-Za-z0-9_.\-]+)\s*;\s*input:(?P<inputs>[^;]*);\s*expect:(?P<expect>[^;]*);",
)


class SuiteFormatError(ValueError):
    pass


def _ints(text: str, where: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split())
    except ValueError:
        raise SuiteFormatError(f"non-integer value in {where}: {text.strip()!r}") from None


def parse_suite(text: str) -> list[TestCase]:
    body = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    tests = []
    pos = 0
    seen = set()
    for m in _RECORD.finditer(body):
        gap = body[pos : m.start()].strip()
        if gap:
            raise SuiteFormatError(f"unparseable text before test record: {gap[:40]!r}")
        pos = m.end()
        tid = m.group("id")
        if tid in seen:
            raise SuiteFormatError(f"duplicate test id {tid!r}")
        seen.add(tid)
        tests.append(
            TestCase(tid, _ints(m.group("inputs"), tid), _ints(m.group("expect"), tid))
        )
    rest = body[pos:].strip()
    if rest:
        raise SuiteFormatError(f"unparseable trailing text: {rest[:40]!r}")
    return tests


def format_suite(tests: list[TestCase]) -> str:
    return "".join(
        f"test {t.id}; input: {' '.join(map(str, t.inputs))}; "
        f"expect: {' '.join(map(str, t.expected_output))};\n"
        for t in tests
    )


def load_suite(path: str | Path) -> list[TestCase]:
    return parse_suite(Path(path).read_text())


def check_arity(program: Program, tests: list[TestCase]) -> None:
    for t in tests:
        if len(t.inputs) != len(program.params):
            raise SuiteFormatError(
                f"test {t.id} has {len(t.inputs)} inputs, program takes {len(program.params)}"
            )
