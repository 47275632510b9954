"""Metallaxis and MUSE suspiciousness, and tie-aware statement ranking.

Scores are computed from exact integer counts so that mathematically equal
suspiciousness values come out as identical floats. Tie groups are formed by
float equality, which would otherwise depend on summation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .execution import CoverageMatrix, NoFailingTestError, ResultMatrix

METALLAXIS = "metallaxis"
MUSE = "muse"
OPTIMAL = "optimal"
TECHNIQUES = (METALLAXIS, MUSE)

# MUSE score of statements without resident mutants; sorts below any real score
NO_MUTANT_SCORE = -math.inf


@dataclass(frozen=True)
class KillStats:
    mutant: str
    failed_k: int
    passed_k: int
    totfailed: int


@dataclass(frozen=True)
class FlipCounts:
    line: int
    mut_s: int
    sum_f2p_frac: Fraction
    sum_p2f_frac: Fraction


@dataclass(frozen=True)
class RankEntry:
    line: int
    score: float
    rank: int


@dataclass(frozen=True)
class Ranking:
    technique: str
    entries: tuple[RankEntry, ...]

    def rank_of(self, line: int) -> int:
        for e in self.entries:
            if e.line == line:
                return e.rank
        raise KeyError(line)

    @property
    def lines(self) -> tuple[int, ...]:
        return tuple(e.line for e in self.entries)

    def to_tsv(self) -> str:
        out = [f"# technique: {self.technique}", "rank\tline\tscore"]
        out += [f"{e.rank}\t{e.line}\t{e.score:.6f}" for e in self.entries]
        return "\n".join(out) + "\n"

    @classmethod
    def from_tsv(cls, text: str) -> "Ranking":
        technique, entries = "", []
        for row in text.splitlines():
            if row.startswith("#"):
                key, _, value = row[1:].partition(":")
                if key.strip() == "technique":
                    technique = value.strip()
            elif row and not row.startswith("rank"):
                rank, line, score = row.split("\t")
                entries.append(RankEntry(int(line), float(score), int(rank)))
        return cls(technique, tuple(entries))


def _require_failing(cm: CoverageMatrix) -> None:
    if cm.n_failing == 0:
        raise NoFailingTestError("no failing test: fault localization is undefined")


def ochiai(ks: KillStats) -> float:
    """failed / sqrt(totfailed * (failed + passed)); 0 for an unkilled mutant."""
    if ks.totfailed < 1:
        raise ValueError("ochiai needs at least one failing test")
    killers = ks.failed_k + ks.passed_k
    if ks.failed_k == 0 or killers == 0:
        return 0.0
    # sqrt of the exact ratio: equal ratios give bit-identical scores
    return math.sqrt(Fraction(ks.failed_k * ks.failed_k, ks.totfailed * killers))


def kill_stats(rm: ResultMatrix, cm: CoverageMatrix) -> list[KillStats]:
    failing = cm.failing
    tot = int(failing.sum())
    out = []
    for i, mid in enumerate(rm.mutants):
        row = rm.differs[i]
        out.append(KillStats(mid, int((row & failing).sum()), int((row & ~failing).sum()), tot))
    return out


def metallaxis_scores(cm: CoverageMatrix, rm: ResultMatrix) -> dict[int, float]:
    """Per line, the maximum Ochiai score over the mutants residing on it."""
    _require_failing(cm)
    scores = dict.fromkeys(cm.lines, 0.0)
    for line, ks in zip(rm.mutant_lines, kill_stats(rm, cm)):
        scores[line] = max(scores[line], ochiai(ks))
    return scores


def _flip_matrices(cm: CoverageMatrix, rm: ResultMatrix) -> tuple[np.ndarray, np.ndarray]:
    orig_fail = cm.failing
    f2p = orig_fail[None, :] & ~rm.failed
    p2f = ~orig_fail[None, :] & rm.failed
    return f2p, p2f


def muse_alpha(rm: ResultMatrix, cm: CoverageMatrix) -> Fraction:
    """Ratio of the summed f2p fractions to the summed p2f fractions.

    Falls back to 1 when no mutant turns a passing test into a failing one.
    """
    n_fail, n_pass = cm.n_failing, len(cm.tests) - cm.n_failing
    if n_fail == 0 or n_pass == 0:
        raise NoFailingTestError("MUSE needs at least one failing and one passing test")
    f2p, p2f = _flip_matrices(cm, rm)
    f2p_total = Fraction(int(f2p.sum()), n_fail)
    p2f_total = Fraction(int(p2f.sum()), n_pass)
    if p2f_total == 0:
        return Fraction(1)
    return f2p_total / p2f_total


def flip_counts(cm: CoverageMatrix, rm: ResultMatrix) -> dict[int, FlipCounts]:
    n_fail, n_pass = cm.n_failing, len(cm.tests) - cm.n_failing
    f2p, p2f = _flip_matrices(cm, rm)
    by_line: dict[int, list[int]] = {line: [] for line in cm.lines}
    for i, line in enumerate(rm.mutant_lines):
        by_line[line].append(i)
    out = {}
    for line, rows in by_line.items():
        cover = cm.covering_tests(line)
        # f_P(s) and p_P(s): failing / passing tests that execute s
        f2p_hits = int((f2p[rows] & cover).sum()) if rows else 0
        p2f_hits = int((p2f[rows] & cover).sum()) if rows else 0
        out[line] = FlipCounts(line, len(rows), Fraction(f2p_hits, n_fail), Fraction(p2f_hits, n_pass))
    return out


def muse_scores(
    cm: CoverageMatrix, rm: ResultMatrix, alpha: float | Fraction | str = "auto"
) -> dict[int, float]:
    n_fail, n_pass = cm.n_failing, len(cm.tests) - cm.n_failing
    if n_fail == 0 or n_pass == 0:
        raise NoFailingTestError("MUSE needs at least one failing and one passing test")
    if alpha == "auto":
        a = muse_alpha(rm, cm)
    else:
        a = Fraction(alpha)
        if a < 0:
            raise ValueError("alpha must be non-negative")
    scores = {}
    for line, fc in flip_counts(cm, rm).items():
        if fc.mut_s == 0:
            scores[line] = NO_MUTANT_SCORE
        else:
            scores[line] = float((fc.sum_f2p_frac - a * fc.sum_p2f_frac) / fc.mut_s)
    return scores


def rank_with_ties(
    scores: Mapping[int, float],
    faulty_lines: Iterable[int] | None = None,
    technique: str = "",
) -> Ranking:
    """Rank lines by descending score.

    A tie group of ``n`` lines at positions ``i..j`` shares rank ``j``; when
    ``k > 1`` of its members are faulty it shares ``j - k + 1`` instead.
    """
    faulty = frozenset(faulty_lines or ())
    order = sorted(scores, key=lambda line: (-scores[line], line))
    entries = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and scores[order[j + 1]] == scores[order[i]]:
            j += 1
        group = order[i : j + 1]
        k = sum(line in faulty for line in group)
        rank = j + 1 if k <= 1 else j + 1 - k + 1
        entries.extend(RankEntry(line, scores[line], rank) for line in group)
        i = j + 1
    return Ranking(technique, tuple(entries))


def localize(
    cm: CoverageMatrix,
    rm: ResultMatrix,
    technique: str,
    alpha: float | str = "auto",
    faulty_lines: Iterable[int] | None = None,
) -> Ranking:
    if technique == METALLAXIS:
        scores = metallaxis_scores(cm, rm)
    elif technique == MUSE:
        scores = muse_scores(cm, rm, alpha)
    else:
        raise ValueError(f"unknown technique {technique!r}")
    return rank_with_ties(scores, faulty_lines, technique)
