import sys
from pathlib import Path

import numpy as np
import pytest

from mbfl.execution import CoverageMatrix, ResultMatrix
from mbfl.minilang import load_suite, parse

CORPUS = Path(__file__).resolve().parent.parent / "corpus"
MANIFEST = CORPUS / "manifest.txt"


def corpus_bug_ids():
    rows = MANIFEST.read_text().splitlines()
    return [r.split()[0] for r in rows if r.strip() and not r.startswith("#")]


@pytest.fixture(scope="session")
def median():
    return parse((CORPUS / "median" / "program.ml").read_text(), "median.ml")


@pytest.fixture(scope="session")
def median_suite():
    return load_suite(CORPUS / "median" / "tests.txt")


def make_cm(cover, verdicts, lines=None):
    """cover: rows per test of 0/1 per line; verdicts: string of P/F per test."""
    cells = np.array(cover, dtype=bool)
    n_tests, n_lines = cells.shape
    lines = tuple(lines or range(1, n_lines + 1))
    tests = tuple(f"t{i}" for i in range(1, n_tests + 1))
    return CoverageMatrix(tests, lines, cells, tuple("fail" if v == "F" else "pass" for v in verdicts))


def make_rm(cm, mutant_lines, failed, differs=None):
    """failed: one P/F string per mutant; differs defaults to verdict != original."""
    failed = np.array([[c == "F" for c in row] for row in failed], dtype=bool).reshape(
        len(mutant_lines), len(cm.tests)
    )
    if differs is None:
        differs = failed != cm.failing[None, :]
    else:
        differs = np.array([[c == "1" for c in row] for row in differs], dtype=bool).reshape(failed.shape)
    ids = tuple(f"m{i}" for i in range(1, len(mutant_lines) + 1))
    return ResultMatrix(ids, tuple(mutant_lines), cm.tests, failed, differs)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for ac in sorted(results, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(results[ac])
