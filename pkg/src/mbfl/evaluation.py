"""Accuracy metrics for fault-localization rankings.

Top-N and PS use the tie-aware rank (shared rank of the tie group). AP walks
the ranking's sequential positions (descending score, ascending line within a
tie), so precision at any cut-off never exceeds 1 and a perfect ranking has
AP exactly 1.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from statistics import fmean
from typing import Iterable, Mapping, Sequence

from .localization import METALLAXIS, MUSE, OPTIMAL, Ranking, rank_with_ties

TOP_N = (1, 5, 10, 15, 20, 25, 30, 35)
_LABELS = {METALLAXIS: "Metallaxis", OPTIMAL: "Optimal", MUSE: "MUSE"}


@dataclass(frozen=True)
class FaultSpec:
    bug_id: str
    faulty_lines: frozenset[int]

    def __post_init__(self):
        if not self.faulty_lines:
            raise ValueError(f"{self.bug_id}: fault spec lists no faulty line")

    @classmethod
    def parse(cls, bug_id: str, text: str) -> "FaultSpec":
        body = " ".join(row.split("#", 1)[0] for row in text.splitlines())
        return cls(bug_id, frozenset(int(tok) for tok in body.replace(",", " ").split()))


@dataclass(frozen=True)
class BugResult:
    bug_id: str
    technique: str
    best_rank: int
    ps: float
    ap: float
    ranked_sloc_count: int


def top_n(best_ranks: Iterable[int], n: int) -> int:
    return sum(1 for r in best_ranks if r <= n)


def ps(best_rank: int, m: int) -> float:
    if not 1 <= best_rank <= m:
        raise ValueError(f"rank {best_rank} outside 1..{m}")
    return (m - best_rank) / m


def ap(ranking: Ranking, faults: FaultSpec) -> float:
    faulty = faults.faulty_lines
    hits = 0
    total = 0.0
    for k, entry in enumerate(ranking.entries, 1):
        if entry.line in faulty:
            hits += 1
            total += hits / k
    return total / len(faulty)


def mps(ps_values: Sequence[float]) -> float:
    if not ps_values:
        raise ValueError("MPS of an empty set is undefined")
    return fmean(ps_values)


def map_metric(ap_values: Sequence[float]) -> float:
    if not ap_values:
        raise ValueError("MAP of an empty set is undefined")
    return fmean(ap_values)


def optimal_ranking(sloc: Iterable[int], faults: FaultSpec) -> Ranking:
    scores = {line: 1.0 if line in faults.faulty_lines else 0.0 for line in sloc}
    return rank_with_ties(scores, faults.faulty_lines, OPTIMAL)


def best_rank(ranking: Ranking, faults: FaultSpec) -> int:
    missing = faults.faulty_lines - set(ranking.lines)
    if missing:
        raise ValueError(f"{faults.bug_id}: faulty lines {sorted(missing)} are not ranked SLOC")
    return min(ranking.rank_of(line) for line in faults.faulty_lines)


def evaluate_bug(ranking: Ranking, faults: FaultSpec) -> BugResult:
    """Score one ranking; ``ranking`` should come from ``rank_with_ties``
    with the bug's faulty lines so multi-fault ties use the adjusted rank."""
    m = len(ranking.entries)
    r = best_rank(ranking, faults)
    return BugResult(faults.bug_id, ranking.technique, r, ps(r, m), ap(ranking, faults), m)


@dataclass
class Report:
    techniques: tuple[str, ...]
    results: list[BugResult] = field(default_factory=list)
    mutation_stats: dict[str, dict] = field(default_factory=dict)

    def add(self, result: BugResult) -> None:
        self.results.append(result)

    def bugs(self) -> list[str]:
        return list(dict.fromkeys(r.bug_id for r in self.results))

    def for_technique(self, technique: str) -> list[BugResult]:
        return [r for r in self.results if r.technique == technique]

    def aggregate(self, technique: str) -> dict:
        rs = self.for_technique(technique)
        ranks = [r.best_rank for r in rs]
        return {
            "technique": technique,
            "top_n": {str(n): top_n(ranks, n) for n in TOP_N},
            "mps": mps([r.ps for r in rs]),
            "map": map_metric([r.ap for r in rs]),
        }

    def to_dict(self) -> dict:
        return {
            "techniques": list(self.techniques),
            "bugs": [
                {
                    "bug": r.bug_id,
                    "technique": r.technique,
                    "best_rank": r.best_rank,
                    "ps": r.ps,
                    "ap": r.ap,
                    "sloc": r.ranked_sloc_count,
                }
                for r in self.results
            ],
            "aggregate": [self.aggregate(t) for t in self.techniques],
            "mutation_stats": self.mutation_stats,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def accuracy_table(self) -> str:
        """Top-N / MPS / MAP rows, one column per technique."""
        cols = list(self.techniques)
        aggs = {t: self.aggregate(t) for t in cols}
        head = ["Metrics", *(_LABELS.get(t, t) for t in cols)]
        rows = [[f"Top {n}", *(str(aggs[t]["top_n"][str(n)]) for t in cols)] for n in TOP_N]
        rows.append(["MPS", *(f"{aggs[t]['mps']:.3f}" for t in cols)])
        rows.append(["MAP", *(f"{aggs[t]['map']:.3f}" for t in cols)])
        return _format_table(head, rows)

    def rank_table(self, left: str = METALLAXIS, right: str = MUSE) -> str:
        """Per-bug best ranks side by side; Diff = left rank - right rank."""
        lhs = {r.bug_id: r for r in self.for_technique(left)}
        rhs = {r.bug_id: r for r in self.for_technique(right)}
        head = ["ID", _LABELS.get(left, left), _LABELS.get(right, right), "Diff"]
        rows = []
        for bug in self.bugs():
            if bug in lhs and bug in rhs:
                a, b = lhs[bug].best_rank, rhs[bug].best_rank
                rows.append([bug, str(a), str(b), str(a - b)])
        rows.sort(key=lambda row: -int(row[3]))
        return _format_table(head, rows)

    def per_bug_table(self) -> str:
        head = ["ID", "SLOC"]
        for t in self.techniques:
            label = _LABELS.get(t, t)
            head += [f"{label} rank", f"{label} PS", f"{label} AP"]
        by = {(r.bug_id, r.technique): r for r in self.results}
        rows = []
        for bug in self.bugs():
            row = [bug, str(by[(bug, self.techniques[0])].ranked_sloc_count)]
            for t in self.techniques:
                r = by.get((bug, t))
                row += [str(r.best_rank), f"{r.ps:.3f}", f"{r.ap:.3f}"] if r else ["-"] * 3
            rows.append(row)
        return _format_table(head, rows)

    def to_text(self) -> str:
        parts = ["Accuracy", self.accuracy_table(), "Per-bug results", self.per_bug_table()]
        if METALLAXIS in self.techniques and MUSE in self.techniques:
            parts += ["Per-fault ranking difference", self.rank_table()]
        return "\n".join(parts)


def _format_table(head: list[str], rows: list[list[str]]) -> str:
    widths = [max(len(str(c)) for c in col) for col in zip(head, *rows)]
    fmt = "  ".join(f"{{:<{w}}}" if i == 0 else f"{{:>{w}}}" for i, w in enumerate(widths))
    lines = [fmt.format(*head), "  ".join("-" * w for w in widths)]
    lines += [fmt.format(*row) for row in rows]
    return "\n".join(lines) + "\n"


def build_report(
    rankings: Mapping[str, Mapping[str, Ranking]],
    faults: Mapping[str, FaultSpec],
    sloc: Mapping[str, Sequence[int]],
    techniques: Sequence[str] = (METALLAXIS, OPTIMAL, MUSE),
    mutation_stats: Mapping[str, dict] | None = None,
) -> Report:
    """``rankings[bug][technique]``; the optimal baseline is built here from
    each bug's SLOC universe."""
    report = Report(tuple(techniques), mutation_stats=dict(mutation_stats or {}))
    for bug in sloc:
        spec = faults[bug]
        for tech in techniques:
            if tech == OPTIMAL:
                report.add(evaluate_bug(optimal_ranking(sloc[bug], spec), spec))
            else:
                report.add(evaluate_bug(rankings[bug][tech], spec))
    return report
