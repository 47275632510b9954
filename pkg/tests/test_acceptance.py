"""Acceptance criteria AC-1 .. AC-8.

Each test records one ``AC-n PASS|FAIL`` line. The lines are printed in the
pytest terminal summary, and also when this file is run as a script::

    python tests/test_acceptance.py
"""
import math
import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import CORPUS, MANIFEST  # noqa: E402
from oracles import ORACLES  # noqa: E402

from mbfl.evaluation import TOP_N, FaultSpec, ap, map_metric, mps, ps  # noqa: E402
from mbfl.execution import build_coverage_matrix, run_mutants  # noqa: E402
from mbfl.localization import (  # noqa: E402
    METALLAXIS,
    MUSE,
    OPTIMAL,
    KillStats,
    localize,
    metallaxis_scores,
    muse_scores,
    ochiai,
    rank_with_ties,
)
from mbfl.minilang import execute, load_suite, parse  # noqa: E402
from mbfl.mutation import generate_mutants, prune_duplicates  # noqa: E402
from mbfl.pipeline import RunConfig, load_manifest, run_pipeline  # noqa: E402

RESULTS: dict[str, str] = {}


def record(ac: str, ok: bool, detail: str) -> None:
    line = f"{ac} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[ac] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def full_run(tmp_path_factory):
    """One timed full-corpus pipeline run, all operators, --jobs 1."""
    out = tmp_path_factory.mktemp("full-j1")
    manifest = load_manifest(MANIFEST)
    start = time.perf_counter()
    report = run_pipeline(manifest, out, RunConfig(jobs=1))
    elapsed = time.perf_counter() - start
    return manifest, report, out, elapsed


def test_ac1_median_divergence():
    start = time.perf_counter()
    program = parse((CORPUS / "median" / "program.ml").read_text())
    suite = load_suite(CORPUS / "median" / "tests.txt")
    faulty = FaultSpec.parse("median", (CORPUS / "median" / "faults.txt").read_text()).faulty_lines
    ms = prune_duplicates(generate_mutants(program, {"UOM"}, uom_forms=("inc", "dec")))
    cm = build_coverage_matrix(program, suite)
    rm = run_mutants(ms, suite, reference=cm)
    meta = localize(cm, rm, METALLAXIS, faulty_lines=faulty)
    muse = localize(cm, rm, MUSE, faulty_lines=faulty)
    elapsed = time.perf_counter() - start
    (line,) = faulty
    n_pass = len(suite) - cm.n_failing
    ok = (
        len(suite) == 6 and n_pass == 5 and cm.n_failing == 1
        and meta.rank_of(line) == 1 and muse.rank_of(line) > 1 and elapsed < 1.0
    )
    record("AC-1", ok, f"tests {n_pass}P/{cm.n_failing}F, {len(ms)} +-1 mutants; faulty line {line}: "
                       f"Metallaxis rank {meta.rank_of(line)}, MUSE rank {muse.rank_of(line)}; {elapsed:.3f}s < 1s")


def test_ac2_optimal_baseline(full_run):
    manifest, report, _, _ = full_run
    b = len(manifest.bugs)
    agg = report.aggregate(OPTIMAL)
    problems = [f"Top-{n}={agg['top_n'][str(n)]}" for n in TOP_N if agg["top_n"][str(n)] != b]
    if abs(agg["map"] - 1.0) > 1e-12:
        problems.append(f"MAP={agg['map']!r}")
    for r in report.for_technique(OPTIMAL):
        m = r.ranked_sloc_count
        if abs(r.ps - (m - 1) / m) > 1e-12:
            problems.append(f"{r.bug_id} PS={r.ps!r}")
    record("AC-2", not problems, f"B={b}: Top-N=B for N in {list(TOP_N)}, MAP={agg['map']:.12f}, "
                                 f"PS=(M-1)/M per bug (tol 1e-12)" + (f"; {problems}" if problems else ""))


# five rankings whose PS and AP were computed by hand
_RANKING_ORACLES = [
    # scores, faulty lines, ps, ap
    ({1: .9, 2: .5, 3: .2, 4: .1}, {2}, 0.5, 0.5),
    ({1: .9, 2: .5, 3: .2, 4: .1}, {1, 3}, 0.75, 5 / 6),
    ({1: 0, 2: 0, 3: 0, 4: 0}, {3, 4}, 0.25, 5 / 12),
    ({1: .1, 2: .2, 3: .3, 4: .4, 5: .5}, {1}, 0.0, 0.2),
    ({1: 1, 2: 1, 3: 0, 4: 0, 5: 0, 6: 0}, {4}, 0.0, 0.25),
]
_MPS, _MAP = 0.3, 0.44


def test_ac3_formula_oracles():
    tol = 1e-9
    bad = []
    for failed, passed, tot, want in [(1, 0, 1, 1.0), (0, 5, 1, 0.0), (1, 3, 2, 0.35355339059327373)]:
        if abs(ochiai(KillStats("m", failed, passed, tot)) - want) > tol:
            bad.append(f"ochiai({failed},{passed},{tot})")
    for o in ORACLES:
        meta = metallaxis_scores(o.cm, o.rm)
        bad += [f"{o.name} ochiai/max L{k}" for k, v in o.metallaxis.items() if abs(meta[k] - v) > tol]
        mu = muse_scores(o.cm, o.rm)
        for k, v in o.muse.items():
            if not (mu[k] == v if math.isinf(v) else abs(mu[k] - v) <= tol):
                bad.append(f"{o.name} mu L{k}")
    ps_values, ap_values = [], []
    for i, (scores, faulty, want_ps, want_ap) in enumerate(_RANKING_ORACLES, 1):
        spec = FaultSpec(f"r{i}", frozenset(faulty))
        ranking = rank_with_ties(scores, faulty)
        got_ps = ps(min(ranking.rank_of(f) for f in faulty), len(scores))
        got_ap = ap(ranking, spec)
        ps_values.append(got_ps)
        ap_values.append(got_ap)
        if abs(got_ps - want_ps) > tol:
            bad.append(f"r{i} PS")
        if abs(got_ap - want_ap) > tol:
            bad.append(f"r{i} AP")
    if abs(mps(ps_values) - _MPS) > tol:
        bad.append("MPS")
    if abs(map_metric(ap_values) - _MAP) > tol:
        bad.append("MAP")
    record("AC-3", not bad, f"ochiai and mu on {len(ORACLES)} matrices, PS/AP on {len(_RANKING_ORACLES)} "
                            f"rankings, MPS and MAP (tol 1e-9)" + (f"; mismatches {bad}" if bad else ""))


def test_ac4_tie_breaks():
    def ranks(scores, faulty):
        return {e.line: e.rank for e in rank_with_ties(scores, faulty).entries}

    cases = {
        # n=4 at positions 3..6, k=2 -> 6-2+1
        "n4-i3-k2": (ranks({10: .9, 11: .8, 1: .3, 2: .3, 3: .3, 4: .3}, {2, 4}),
                     {10: 1, 11: 2, 1: 5, 2: 5, 3: 5, 4: 5}),
        "all-tied-k0": (ranks(dict.fromkeys(range(1, 6), 0.5), set()), dict.fromkeys(range(1, 6), 5)),
        "all-tied-k1": (ranks(dict.fromkeys(range(1, 6), 0.5), {2}), dict.fromkeys(range(1, 6), 5)),
        "all-tied-k3": (ranks(dict.fromkeys(range(1, 6), 0.5), {1, 2, 5}), dict.fromkeys(range(1, 6), 3)),
        "k=n": (ranks({1: .7, 2: .7, 3: .7, 4: .1}, {1, 2, 3}), {1: 1, 2: 1, 3: 1, 4: 4}),
        "k=0": (ranks({1: .9, 2: .4, 3: .4, 4: .4}, {1}), {1: 1, 2: 4, 3: 4, 4: 4}),
        "n3-i1-k1": (ranks({1: .5, 2: .5, 3: .5}, {3}), {1: 3, 2: 3, 3: 3}),
    }
    bad = [name for name, (got, want) in cases.items() if got != want]
    record("AC-4", not bad, f"{len(cases)} tie cases incl. n=4,i=3,k=2 -> 5, all-tied, k=n, k=0"
                            + (f"; wrong {bad}" if bad else ""))


_TRANSFORMS = [
    ("exp", math.exp),
    ("affine", lambda x: 3.5 * x - 7),
    ("cube", lambda x: x ** 3),
    ("atan", math.atan),
    ("shifted-log", lambda x: math.log(x + 2)),
]


def test_ac5_monotone_invariance():
    rng = random.Random(20240611)
    trials, bad = 0, 0
    for _ in range(120):
        n = rng.randint(1, 30)
        # values on a coarse grid so transforms cannot merge distinct scores
        scores = {line: rng.randint(-20, 20) / 20 for line in rng.sample(range(1, 200), n)}
        faulty = set(rng.sample(sorted(scores), rng.randint(0, min(3, n))))
        base = [(e.line, e.rank) for e in rank_with_ties(scores, faulty).entries]
        for _name, f in _TRANSFORMS:
            moved = {line: f(s) for line, s in scores.items()}
            trials += 1
            if [(e.line, e.rank) for e in rank_with_ties(moved, faulty).entries] != base:
                bad += 1
    record("AC-5", bad == 0 and trials >= 100,
           f"{trials} (score map, transform) pairs over 120 random maps; {bad} rank changes")


def test_ac6_pruning_soundness():
    manifest = load_manifest(MANIFEST)
    pairs = mismatches = 0
    for bundle in manifest.bugs:
        program = parse(bundle.program.read_text())
        suite = load_suite(bundle.tests)
        ms = prune_duplicates(generate_mutants(program))
        by_id = {m.id: m.program for m in ms.mutants}

        def outcome(p):
            return [execute(p, t).observable() for t in suite]

        cache = {}
        for m, rep in ms.pruned:
            key = rep or "<original>"
            if key not in cache:
                cache[key] = outcome(program if rep is None else by_id[rep])
            pairs += 1
            if outcome(m.program) != cache[key]:
                mismatches += 1
    record("AC-6", pairs > 0 and mismatches == 0,
           f"{pairs} pruned mutants over {len(manifest.bugs)} bugs; {mismatches} differ from their representative")


def _tree(root: Path) -> dict[str, bytes]:
    return {str(p.relative_to(root)): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def test_ac7_parallel_determinism(full_run, tmp_path):
    manifest, _, out1, _ = full_run
    out4 = tmp_path / "full-j4"
    run_pipeline(manifest, out4, RunConfig(jobs=4))
    a, b = _tree(out1), _tree(out4)
    differing = sorted(k for k in a.keys() | b.keys() if a.get(k) != b.get(k))
    record("AC-7", not differing, f"{len(a)} artifact files compared, --jobs 1 vs --jobs 4; "
                                  f"{len(differing)} differ" + (f" {differing[:5]}" if differing else ""))


def test_ac8_desk_scale(full_run):
    manifest, report, _, elapsed = full_run
    retained = sum(s["retained"] for s in report.mutation_stats.values())
    ok = len(manifest.bugs) >= 10 and retained >= 500 and elapsed < 60
    record("AC-8", ok, f"{len(manifest.bugs)} bugs, all 9 operators, {retained} retained mutants, "
                       f"{elapsed:.2f}s < 60s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
