"""Run test suites on the original program and its mutants.

Builds the test x line coverage matrix and the mutant x test result matrix,
and derives the kill and flip vectors both localization techniques consume.
"""
from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .minilang.ast import Program
from .minilang.bytecode import compile_program
from .minilang.interpreter import (
    DEFAULT_STEP_BUDGET,
    FAIL,
    PASS,
    ExecOutcome,
    TestCase,
    run_compiled,
    verdict,
)
from .mutation import MutantSet

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CoverageMatrix:
    tests: tuple[str, ...]
    lines: tuple[int, ...]
    cells: np.ndarray  # bool, len(tests) x len(lines)
    original_verdicts: tuple[str, ...]
    # status class and output of the original per test; output-diff kills
    # compare against these
    observables: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @property
    def failing(self) -> np.ndarray:
        return np.array([v == FAIL for v in self.original_verdicts], dtype=bool)

    @property
    def passing(self) -> np.ndarray:
        return ~self.failing

    @property
    def n_failing(self) -> int:
        return int(self.failing.sum())

    def covered(self, test: str, line: int) -> bool:
        return bool(self.cells[self.tests.index(test), self.lines.index(line)])

    def covering_tests(self, line: int) -> np.ndarray:
        return self.cells[:, self.lines.index(line)]


@dataclass(frozen=True)
class ResultMatrix:
    mutants: tuple[str, ...]
    mutant_lines: tuple[int, ...]
    tests: tuple[str, ...]
    failed: np.ndarray  # bool, mutant verdict == fail
    differs: np.ndarray  # bool, observable behaviour differs from original

    def row(self, mutant_id: str) -> int:
        return self.mutants.index(mutant_id)

    @property
    def killed(self) -> np.ndarray:
        """Per-mutant flag: killed by at least one test (output-diff)."""
        return self.differs.any(axis=1) if len(self.mutants) else np.zeros(0, dtype=bool)


@dataclass(frozen=True)
class Flips:
    f2p: frozenset[str]
    p2f: frozenset[str]


@dataclass(frozen=True)
class MutationStats:
    generated: int
    duplicates: int
    retained: int
    dormant: int
    killed: int
    mutation_score: float

    def as_dict(self) -> dict:
        return dict(self.__dict__)


class NoFailingTestError(ValueError):
    """Fault localization needs at least one failing test."""


def build_coverage_matrix(
    p: Program, suite: Sequence[TestCase], budget: int = DEFAULT_STEP_BUDGET
) -> CoverageMatrix:
    if not suite:
        raise ValueError("test suite is empty")
    cp = compile_program(p)
    lines = p.lines
    cells = np.zeros((len(suite), len(lines)), dtype=bool)
    verdicts, observables = [], []
    col = {line: j for j, line in enumerate(lines)}
    for i, t in enumerate(suite):
        out = run_compiled(cp, t.inputs, budget)
        for line in out.covered_lines:
            cells[i, col[line]] = True
        verdicts.append(verdict(out, t))
        observables.append(out.observable())
    cm = CoverageMatrix(tuple(t.id for t in suite), lines, cells, tuple(verdicts), tuple(observables))
    if cm.n_failing == 0:
        log.warning("%s: no failing test; fault localization is blocked", p.source_name)
    return cm


def _run_chunk(args) -> tuple[np.ndarray, np.ndarray]:
    programs, suite, budget, reference = args
    failed = np.zeros((len(programs), len(suite)), dtype=bool)
    differs = np.zeros_like(failed)
    for i, prog in enumerate(programs):
        cp = compile_program(prog)
        for j, t in enumerate(suite):
            out = run_compiled(cp, t.inputs, budget)
            failed[i, j] = verdict(out, t) == FAIL
            differs[i, j] = out.observable() != reference[j]
    return failed, differs


def run_mutants(
    ms: MutantSet,
    suite: Sequence[TestCase],
    budget: int = DEFAULT_STEP_BUDGET,
    jobs: int = 1,
    reference: CoverageMatrix | None = None,
) -> ResultMatrix:
    """Execute every retained mutant on every test.

    Results are assembled by mutant index, so the matrix is identical for any
    ``jobs`` value.
    """
    if reference is None:
        reference = build_coverage_matrix(ms.original, suite, budget)
    ref = reference.observables
    tests = tuple(t.id for t in suite)
    programs = [m.program for m in ms.mutants]
    shape = (len(programs), len(suite))
    if not programs:
        empty = np.zeros(shape, dtype=bool)
        return ResultMatrix((), (), tests, empty, empty.copy())
    if jobs <= 1:
        failed, differs = _run_chunk((programs, list(suite), budget, ref))
    else:
        n_chunks = min(len(programs), jobs * 4)
        bounds = np.linspace(0, len(programs), n_chunks + 1).astype(int)
        chunks = [
            (programs[a:b], list(suite), budget, ref) for a, b in zip(bounds[:-1], bounds[1:])
        ]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_chunk, chunks))
        failed = np.vstack([f for f, _ in parts])
        differs = np.vstack([d for _, d in parts])
    return ResultMatrix(
        mutants=tuple(m.id for m in ms.mutants),
        mutant_lines=tuple(m.line for m in ms.mutants),
        tests=tests,
        failed=failed,
        differs=differs,
    )


def kill_vector_outputdiff(rm: ResultMatrix, mutant_id: str) -> frozenset[str]:
    row = rm.differs[rm.row(mutant_id)]
    return frozenset(t for t, d in zip(rm.tests, row) if d)


def flip_vector(rm: ResultMatrix, cm: CoverageMatrix, mutant_id: str) -> Flips:
    row = rm.failed[rm.row(mutant_id)]
    orig_fail = cm.failing
    f2p = frozenset(t for t, of, mf in zip(rm.tests, orig_fail, row) if of and not mf)
    p2f = frozenset(t for t, of, mf in zip(rm.tests, orig_fail, row) if not of and mf)
    return Flips(f2p, p2f)


def mutation_score(ms: MutantSet, rm: ResultMatrix) -> MutationStats:
    killed = int(rm.killed.sum())
    retained = len(rm.mutants)
    return MutationStats(
        generated=ms.stats.generated,
        duplicates=ms.stats.duplicates_removed,
        retained=retained,
        dormant=retained - killed,
        killed=killed,
        mutation_score=killed / retained if retained else 0.0,
    )


# -- CSV serialization -----------------------------------------------------

def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_coverage_csv(cm: CoverageMatrix, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["line", *cm.tests])
        for j, line in enumerate(cm.lines):
            w.writerow([line, *(int(c) for c in cm.cells[:, j])])


def write_original_csv(cm: CoverageMatrix, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["test", "verdict", "status", "output"])
        for t, v, (status, output) in zip(cm.tests, cm.original_verdicts, cm.observables):
            w.writerow([t, "P" if v == PASS else "F", status, " ".join(map(str, output))])


def read_coverage(coverage_path: Path, original_path: Path) -> CoverageMatrix:
    with open(coverage_path, newline="") as fh:
        rows = list(csv.reader(fh))
    tests = tuple(rows[0][1:])
    lines = tuple(int(r[0]) for r in rows[1:])
    cells = np.array([[c == "1" for c in r[1:]] for r in rows[1:]], dtype=bool).reshape(
        len(lines), len(tests)
    ).T.copy()
    with open(original_path, newline="") as fh:
        orig = list(csv.DictReader(fh))
    if tuple(r["test"] for r in orig) != tests:
        raise ValueError("coverage and original-verdict files list different tests")
    verdicts = tuple(PASS if r["verdict"] == "P" else FAIL for r in orig)
    observables = tuple(
        (r["status"], tuple(int(v) for v in r["output"].split())) for r in orig
    )
    return CoverageMatrix(tests, lines, cells, verdicts, observables)


def write_result_csv(rm: ResultMatrix, path: Path, diff_path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["mutant", *rm.tests])
        for i, mid in enumerate(rm.mutants):
            w.writerow([mid, *("F" if f else "P" for f in rm.failed[i])])
    with open(diff_path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["mutant", *rm.tests])
        for i, mid in enumerate(rm.mutants):
            w.writerow([mid, *(int(d) for d in rm.differs[i])])


def read_result(path: Path, diff_path: Path, mutant_lines: dict[str, int]) -> ResultMatrix:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    with open(diff_path, newline="") as fh:
        drows = list(csv.reader(fh))
    tests = tuple(rows[0][1:])
    mutants = tuple(r[0] for r in rows[1:])
    if tuple(drows[0][1:]) != tests or tuple(r[0] for r in drows[1:]) != mutants:
        raise ValueError("result and diff files disagree on shape")
    shape = (len(mutants), len(tests))
    failed = np.array([[c == "F" for c in r[1:]] for r in rows[1:]], dtype=bool).reshape(shape)
    differs = np.array([[c == "1" for c in r[1:]] for r in drows[1:]], dtype=bool).reshape(shape)
    return ResultMatrix(mutants, tuple(mutant_lines[m] for m in mutants), tests, failed, differs)
