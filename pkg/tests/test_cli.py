import json
import shutil

import pytest

from mbfl import cli
from mbfl.localization import Ranking

from conftest import CORPUS

MEDIAN = CORPUS / "median"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def median_bundle(tmp_path):
    """A one-bug manifest pointing at the bundled median program."""
    shutil.copytree(MEDIAN, tmp_path / "median")
    (tmp_path / "manifest.txt").write_text("median median/program.ml median/tests.txt median/faults.txt\n")
    return tmp_path


def test_mutate_lists_plus_minus_one_mutants(capsys, tmp_path):
    code, out, _ = run(capsys, "mutate", MEDIAN / "program.ml", "--out", tmp_path,
                       "--operators", "UOM", "--uom-forms", "inc,dec")
    assert code == 0
    assert out.splitlines()[0] == "generated 32  duplicates 0  retained 32"
    assert "UOM-L11-1\t11\ty -> y + 1" in out and "UOM-L11-2\t11\ty -> y - 1" in out
    assert (tmp_path / "mutants" / "UOM-L11-1.ml").read_text().splitlines()[10].strip() == "m = y + 1;"


def test_empty_operator_set_warns(capsys, caplog, tmp_path):
    code, out, _ = run(capsys, "mutate", MEDIAN / "program.ml", "--out", tmp_path, "--operators", "")
    assert code == 0
    assert "retained 0" in out and "no mutation operators" in caplog.text


def test_run_then_localize(capsys, tmp_path):
    prog, tests = MEDIAN / "program.ml", MEDIAN / "tests.txt"
    common = ["--out", tmp_path, "--operators", "UOM", "--uom-forms", "inc,dec"]
    assert run(capsys, "mutate", prog, *common)[0] == 0
    code, out, _ = run(capsys, "run", prog, tests, *common)
    assert code == 0 and "failing 1" in out
    code, out, _ = run(capsys, "localize", "--technique", "metallaxis", *common)
    assert code == 0
    assert Ranking.from_tsv(out).rank_of(11) == 1
    code, out, _ = run(capsys, "localize", "--technique", "muse", *common)
    assert code == 0
    assert Ranking.from_tsv(out).rank_of(11) > 1
    assert (tmp_path / "ranking_muse.tsv").read_text() == out


def test_localize_refuses_without_failing_test(capsys, tmp_path):
    (tmp_path / "tests.txt").write_text("test t1; input: 1 2 3; expect: 2;\n")
    prog = MEDIAN / "program.ml"
    run(capsys, "mutate", prog, "--out", tmp_path, "--operators", "UOM")
    code, _, err = run(capsys, "run", prog, tmp_path / "tests.txt", "--out", tmp_path)
    assert code == 0 and "no failing test" in err
    code, _, err = run(capsys, "localize", "--technique", "metallaxis", "--out", tmp_path)
    assert code == 2 and "refused" in err


def test_pipeline_refuses_without_failing_test(capsys, median_bundle):
    (median_bundle / "median" / "tests.txt").write_text("test t1; input: 1 2 3; expect: 2;\n")
    code, _, err = run(capsys, "pipeline", median_bundle / "manifest.txt", "--out", median_bundle / "out",
                       "--operators", "UOM")
    assert code == 2 and "no failing test" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["mutate"],
        ["mutate", "x.ml"],
        ["localize", "--out", "o", "--technique", "tarantula"],
        ["run", "a", "b", "--out", "o", "--jobs", "0"],
        ["run", "a", "b", "--out", "o", "--budget", "-5"],
        ["localize", "--out", "o", "--technique", "muse", "--alpha", "-1"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        cli.main(argv)
    assert exc.value.code == 1
    capsys.readouterr()


def test_input_errors_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.ml"
    bad.write_text("x = (1;\n")
    assert run(capsys, "mutate", bad, "--out", tmp_path / "o")[0] == 1
    assert run(capsys, "mutate", tmp_path / "missing.ml", "--out", tmp_path / "o")[0] == 1
    assert run(capsys, "mutate", MEDIAN / "program.ml", "--out", tmp_path / "o", "--operators", "XYZ")[0] == 1
    assert run(capsys, "localize", "--technique", "muse", "--out", tmp_path / "nothing")[0] == 1
    (tmp_path / "suite.txt").write_text("test t1; input: 1; expect: 1;\n")
    run(capsys, "mutate", MEDIAN / "program.ml", "--out", tmp_path / "o", "--operators", "UOM")
    code, _, err = run(capsys, "run", MEDIAN / "program.ml", tmp_path / "suite.txt", "--out", tmp_path / "o")
    assert code == 1 and "input" in err


def test_bad_manifest_exit_1(capsys, median_bundle):
    (median_bundle / "m2.txt").write_text("median median/program.ml median/tests.txt\n")
    assert run(capsys, "pipeline", median_bundle / "m2.txt", "--out", median_bundle / "o")[0] == 1
    (median_bundle / "median" / "faults.txt").write_text("9\n")  # line 9 is an else, not a statement
    code, _, err = run(capsys, "pipeline", median_bundle / "manifest.txt", "--out", median_bundle / "o")
    assert code == 1 and "not executable" in err


def test_internal_error_exit_3(capsys, monkeypatch, tmp_path):
    def boom(*args, **kwargs):
        raise RuntimeError("kaput")

    monkeypatch.setattr(cli, "stage_mutate", boom)
    code, _, err = run(capsys, "mutate", MEDIAN / "program.ml", "--out", tmp_path)
    assert code == 3 and "kaput" in err


def test_stages_rerun_from_files(capsys, median_bundle):
    out = median_bundle / "out"
    code, first, _ = run(capsys, "pipeline", median_bundle / "manifest.txt", "--out", out, "--operators", "UOM,ROR")
    assert code == 0
    report = (out / "report.json").read_text()
    (out / "report.json").unlink()
    code, second, _ = run(capsys, "evaluate", median_bundle / "manifest.txt", "--out", out)
    assert code == 0 and second == first
    assert (out / "report.json").read_text() == report
    for name in ("mutants.tsv", "pruned.tsv", "generation.json", "coverage.csv", "original.csv",
                 "results.csv", "results_diff.csv", "mutation_stats.json",
                 "ranking_metallaxis.tsv", "ranking_muse.tsv"):
        assert (out / "median" / name).is_file(), name


def test_single_bug_report(capsys, median_bundle):
    code, out, _ = run(capsys, "pipeline", median_bundle / "manifest.txt", "--out", median_bundle / "o",
                       "--operators", "UOM", "--uom-forms", "inc,dec")
    assert code == 0
    report = json.loads((median_bundle / "o" / "report.json").read_text())
    per_bug = {b["technique"]: b for b in report["bugs"]}
    for agg in report["aggregate"]:
        bug = per_bug[agg["technique"]]
        assert agg["mps"] == bug["ps"] and agg["map"] == bug["ap"]
    assert per_bug["metallaxis"]["best_rank"] == 1 and per_bug["muse"]["best_rank"] > 1
    assert "median" in out
