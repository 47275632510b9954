"""File-based pipeline stages: mutate -> run -> localize -> evaluate.

Every stage reads only files written by earlier stages, so any stage can be
rerun on its own. Per-bug working directory layout::

    mutants.tsv          id, operator, line, description (generation order)
    mutants/<id>.ml      mutant sources
    pruned.tsv           pruned mutant id -> retained representative
    generation.json      generated / duplicates / retained counts
    coverage.csv         line x test coverage of the original (0/1)
    original.csv         original verdict, status and output per test
    results.csv          mutant x test verdicts (P/F)
    results_diff.csv     mutant x test output differs from original (0/1)
    mutation_stats.json  dormant / killed / mutation score
    ranking_<tech>.tsv   rank, line, score
"""
from __future__ import annotations

import csv
import json
import logging
import shutil
from dataclasses import dataclass, field
from pathlib import Path

from . import execution, localization
from .evaluation import FaultSpec, Report, build_report
from .localization import METALLAXIS, MUSE, OPTIMAL, Ranking
from .minilang import DEFAULT_STEP_BUDGET, Program, parse
from .minilang.printer import to_source
from .minilang.suite import check_arity, load_suite
from .mutation import (
    ALL_OPERATORS,
    UOM_FORMS,
    Mutant,
    MutantSet,
    MutantStats,
    OperatorId,
    generate_mutants,
    prune_duplicates,
)

log = logging.getLogger(__name__)


@dataclass
class RunConfig:
    operators: tuple[OperatorId, ...] = ALL_OPERATORS
    uom_forms: tuple[str, ...] = UOM_FORMS
    step_budget: int = DEFAULT_STEP_BUDGET
    alpha: float | str = "auto"
    jobs: int = 1

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("parallelism must be at least 1")
        if self.step_budget < 1:
            raise ValueError("step budget must be at least 1")


@dataclass(frozen=True)
class BugBundle:
    bug_id: str
    program: Path
    tests: Path
    faults: Path


@dataclass
class Manifest:
    path: Path
    bugs: list[BugBundle] = field(default_factory=list)


def load_manifest(path: str | Path) -> Manifest:
    """One bug per line: ``<bug id> <program> <tests> <faults>``, paths
    relative to the manifest's directory."""
    path = Path(path)
    base = path.parent
    manifest = Manifest(path)
    seen = set()
    for n, row in enumerate(path.read_text().splitlines(), 1):
        row = row.split("#", 1)[0].strip()
        if not row:
            continue
        parts = row.split()
        if len(parts) != 4:
            raise ValueError(f"{path}:{n}: expected 4 fields, got {len(parts)}")
        bug_id, prog, tests, faults = parts
        if bug_id in seen:
            raise ValueError(f"{path}:{n}: duplicate bug id {bug_id!r}")
        seen.add(bug_id)
        bundle = BugBundle(bug_id, base / prog, base / tests, base / faults)
        for p in (bundle.program, bundle.tests, bundle.faults):
            if not p.is_file():
                raise FileNotFoundError(f"{path}:{n}: missing file {p}")
        manifest.bugs.append(bundle)
    return manifest


def load_program(path: str | Path) -> Program:
    path = Path(path)
    return parse(path.read_text(), source_name=path.name)


def load_faults(bundle: BugBundle, program: Program) -> FaultSpec:
    spec = FaultSpec.parse(bundle.bug_id, bundle.faults.read_text())
    bad = spec.faulty_lines - set(program.lines)
    if bad:
        raise ValueError(f"{bundle.bug_id}: faulty lines {sorted(bad)} are not executable lines")
    return spec


def _write_json(path: Path, data) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n")


# -- stage 1: mutate -------------------------------------------------------

def stage_mutate(program: Program, out: Path, cfg: RunConfig) -> MutantSet:
    out.mkdir(parents=True, exist_ok=True)
    ms = prune_duplicates(generate_mutants(program, cfg.operators, cfg.uom_forms))
    if not cfg.operators:
        log.warning("no mutation operators enabled; 0 mutants generated")
    mdir = out / "mutants"
    if mdir.exists():
        shutil.rmtree(mdir)
    mdir.mkdir()
    with open(out / "mutants.tsv", "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["id", "operator", "line", "description"])
        for m in ms.mutants:
            w.writerow([m.id, m.operator.value, m.line, m.description])
            (mdir / f"{m.id}.ml").write_text(to_source(m.program))
    with open(out / "pruned.tsv", "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["id", "operator", "line", "duplicate_of", "description"])
        for m, rep in ms.pruned:
            w.writerow([m.id, m.operator.value, m.line, rep or "ORIGINAL", m.description])
    _write_json(out / "generation.json", {
        "operators": [op.value for op in cfg.operators],
        "generated": ms.stats.generated,
        "duplicates": ms.stats.duplicates_removed,
        "equivalent": ms.stats.equivalent,
        "retained": ms.stats.retained,
    })
    return ms


def read_mutants(work: Path, original: Program) -> MutantSet:
    """Rebuild the retained MutantSet from ``mutants.tsv`` and mutant sources."""
    listing = work / "mutants.tsv"
    if not listing.is_file():
        raise FileNotFoundError(f"{listing} not found; run the mutate stage first")
    gen = json.loads((work / "generation.json").read_text())
    mutants = []
    with open(listing, newline="") as fh:
        for row in csv.DictReader(fh, delimiter="\t"):
            src = (work / "mutants" / f"{row['id']}.ml").read_text()
            mutants.append(Mutant(
                id=row["id"],
                operator=OperatorId(row["operator"]),
                line=int(row["line"]),
                program=parse(src, source_name=row["id"], allow_skip=True),
                description=row["description"],
            ))
    stats = MutantStats(gen["generated"], gen["duplicates"], gen["retained"], gen["equivalent"])
    return MutantSet(original, tuple(mutants), stats)


# -- stage 2: run ----------------------------------------------------------

def stage_run(program: Program, tests_path: Path, work: Path, cfg: RunConfig):
    suite = load_suite(tests_path)
    check_arity(program, suite)
    ms = read_mutants(work, program)
    cm = execution.build_coverage_matrix(program, suite, cfg.step_budget)
    rm = execution.run_mutants(ms, suite, cfg.step_budget, cfg.jobs, reference=cm)
    execution.write_coverage_csv(cm, work / "coverage.csv")
    execution.write_original_csv(cm, work / "original.csv")
    execution.write_result_csv(rm, work / "results.csv", work / "results_diff.csv")
    stats = execution.mutation_score(ms, rm)
    _write_json(work / "mutation_stats.json", {**stats.as_dict(), "equivalent": ms.stats.equivalent})
    return cm, rm, stats


def read_matrices(work: Path) -> tuple[execution.CoverageMatrix, execution.ResultMatrix]:
    for name in ("coverage.csv", "original.csv", "results.csv", "results_diff.csv", "mutants.tsv"):
        if not (work / name).is_file():
            raise FileNotFoundError(f"{work / name} not found; run the earlier stages first")
    cm = execution.read_coverage(work / "coverage.csv", work / "original.csv")
    with open(work / "mutants.tsv", newline="") as fh:
        lines = {r["id"]: int(r["line"]) for r in csv.DictReader(fh, delimiter="\t")}
    rm = execution.read_result(work / "results.csv", work / "results_diff.csv", lines)
    return cm, rm


# -- stage 3: localize -----------------------------------------------------

def stage_localize(work: Path, technique: str, cfg: RunConfig, faulty_lines=None) -> Ranking:
    cm, rm = read_matrices(work)
    ranking = localization.localize(cm, rm, technique, cfg.alpha, faulty_lines)
    (work / f"ranking_{technique}.tsv").write_text(ranking.to_tsv())
    return ranking


# -- stage 4: evaluate -----------------------------------------------------

def stage_evaluate(manifest: Manifest, out: Path, cfg: RunConfig) -> Report:
    """Score every bug's rankings against its fault spec.

    Scores are recomputed from the matrices and re-ranked with the faulty
    lines known, so tie groups holding several faulty lines get the adjusted
    rank.
    """
    rankings, faults, sloc, stats = {}, {}, {}, {}
    for bundle in manifest.bugs:
        work = out / bundle.bug_id
        program = load_program(bundle.program)
        spec = load_faults(bundle, program)
        cm, rm = read_matrices(work)
        if tuple(cm.lines) != program.lines:
            raise ValueError(f"{bundle.bug_id}: coverage matrix does not match program lines")
        faults[bundle.bug_id] = spec
        sloc[bundle.bug_id] = cm.lines
        rankings[bundle.bug_id] = {
            t: localization.localize(cm, rm, t, cfg.alpha, spec.faulty_lines) for t in (METALLAXIS, MUSE)
        }
        stats_path = work / "mutation_stats.json"
        if stats_path.is_file():
            stats[bundle.bug_id] = json.loads(stats_path.read_text())
    report = build_report(rankings, faults, sloc, (METALLAXIS, OPTIMAL, MUSE), stats)
    (out / "report.json").write_text(report.to_json())
    (out / "report.txt").write_text(report.to_text())
    return report


def run_pipeline(manifest: Manifest, out: Path, cfg: RunConfig) -> Report:
    out.mkdir(parents=True, exist_ok=True)
    for bundle in manifest.bugs:
        work = out / bundle.bug_id
        program = load_program(bundle.program)
        load_faults(bundle, program)
        stage_mutate(program, work, cfg)
        cm, _, _ = stage_run(program, bundle.tests, work, cfg)
        if cm.n_failing == 0:
            raise execution.NoFailingTestError(f"{bundle.bug_id}: no failing test")
        for technique in (METALLAXIS, MUSE):
            stage_localize(work, technique, cfg)
    return stage_evaluate(manifest, out, cfg)
