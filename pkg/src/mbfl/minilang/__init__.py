"""Parser and deterministic interpreter for a small imperative integer language."""
from .ast import Program, iter_statements
from .interpreter import (
    BACKEND,
    BUDGET_EXCEEDED,
    COMPLETED,
    DEFAULT_STEP_BUDGET,
    FAIL,
    PASS,
    RUNTIME_ERROR,
    ExecOutcome,
    TestCase,
    execute,
    verdict,
)
from .parser import MiniLangSyntaxError, parse
from .printer import to_source
from .suite import format_suite, load_suite, parse_suite

__all__ = [
    "BACKEND",
    "BUDGET_EXCEEDED",
    "COMPLETED",
    "DEFAULT_STEP_BUDGET",
    "ExecOutcome",
    "FAIL",
    "MiniLangSyntaxError",
    "PASS",
    "Program",
    "RUNTIME_ERROR",
    "TestCase",
    "execute",
    "format_suite",
    "iter_statements",
    "load_suite",
    "parse",
    "parse_suite",
    "to_source",
    "verdict",
]
