"""Deterministic execution of mini-language programs against test cases.

The bytecode VM comes in two builds: the compiled ``_vm`` extension and the
pure-Python ``_vm_py`` fallback. The compiled one is used when importable,
unless ``MBFL_PURE_PYTHON`` is set in the environment.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Callable

from . import _vm_py
from .ast import Program, wrap
from .bytecode import STATUS_NAMES, CompiledProgram, compile_program

DEFAULT_STEP_BUDGET = 100_000

COMPLETED = "completed"
RUNTIME_ERROR = "runtime-error"
BUDGET_EXCEEDED = "step-budget-exceeded"

PASS = "pass"
FAIL = "fail"

try:
    from . import _vm as _vm_native
except ImportError:  # extension not built
    _vm_native = None

if _vm_native is not None and not os.environ.get("MBFL_PURE_PYTHON"):
    BACKEND = "compiled"
    _run: Callable = _vm_native.run
else:
    BACKEND = "python"
    _run = _vm_py.run


def available_backends() -> dict[str, Callable]:
    backends = {"python": _vm_py.run}
    if _vm_native is not None:
        backends["compiled"] = _vm_native.run
    return backends


@dataclass(frozen=True)
class TestCase:
    id: str
    inputs: tuple[int, ...]
    expected_output: tuple[int, ...]

    __test__ = False  # not a pytest class


@dataclass(frozen=True)
class ExecOutcome:
    status: str
    output: tuple[int, ...]
    covered_lines: frozenset[int]
    steps_used: int

    def observable(self) -> tuple[str, tuple[int, ...]]:
        """What output-difference kills compare: status class and output."""
        return self.status, self.output


def run_compiled(
    cp: CompiledProgram, inputs, step_budget: int = DEFAULT_STEP_BUDGET, vm: Callable | None = None
) -> ExecOutcome:
    if len(inputs) != cp.n_params:
        raise ValueError(f"expected {cp.n_params} inputs, got {len(inputs)}")
    if step_budget < 1:
        raise ValueError("step budget must be positive")
    vm = vm or _run
    status, output, covered, steps = vm(
        cp.code, cp.n_slots, len(cp.lines), [wrap(i) for i in inputs], step_budget, cp.max_stack
    )
    lines = cp.lines
    return ExecOutcome(
        status=STATUS_NAMES[status],
        output=tuple(output),
        covered_lines=frozenset(lines[i] for i, flag in enumerate(covered) if flag),
        steps_used=steps,
    )


def execute(p: Program, t: TestCase, step_budget: int = DEFAULT_STEP_BUDGET) -> ExecOutcome:
    return run_compiled(compile_program(p), t.inputs, step_budget)


def verdict(o: ExecOutcome, t: TestCase) -> str:
    if o.status == COMPLETED and o.output == tuple(t.expected_output):
        return PASS
    return FAIL
