"""Command-line entry point.

Exit codes: 0 success, 1 usage or input error, 2 pipeline refusal (no
failing test), 3 internal error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .execution import NoFailingTestError
from .localization import METALLAXIS, MUSE
from .minilang import DEFAULT_STEP_BUDGET
from .minilang.parser import MiniLangSyntaxError
from .minilang.suite import SuiteFormatError
from .mutation import UOM_FORMS, parse_operators
from .pipeline import (
    RunConfig,
    load_manifest,
    load_program,
    run_pipeline,
    stage_evaluate,
    stage_localize,
    stage_mutate,
    stage_run,
)

EXIT_OK, EXIT_USAGE, EXIT_REFUSED, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("mbfl")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alpha(text: str):
    if text == "auto":
        return text
    value = float(text)
    if value < 0:
        raise argparse.ArgumentTypeError("alpha must be non-negative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--operators", default=None,
                        help="comma-separated operator ids (default: all nine)")
    common.add_argument("--uom-forms", default=",".join(UOM_FORMS),
                        help="UOM sub-forms to apply (default: %(default)s)")
    common.add_argument("--budget", type=_positive, default=DEFAULT_STEP_BUDGET,
                        help="step budget per test execution")
    common.add_argument("--alpha", type=_alpha, default="auto",
                        help="MUSE balancing factor, or 'auto'")
    common.add_argument("--jobs", type=_positive, default=1, help="worker processes for mutant runs")
    common.add_argument("--out", type=Path, required=True, help="output directory")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="mbfl", description="Mutation-based fault localization")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("mutate", parents=[common], help="generate and prune mutants")
    p.add_argument("program", type=Path)

    p = sub.add_parser("run", parents=[common], help="execute tests on program and mutants")
    p.add_argument("program", type=Path)
    p.add_argument("tests", type=Path)

    p = sub.add_parser("localize", parents=[common], help="rank statements from run artifacts")
    p.add_argument("--technique", choices=(METALLAXIS, MUSE), required=True)

    p = sub.add_parser("evaluate", parents=[common], help="score rankings over a corpus")
    p.add_argument("manifest", type=Path)

    p = sub.add_parser("pipeline", parents=[common], help="mutate, run, localize and evaluate a corpus")
    p.add_argument("manifest", type=Path)
    return parser


def _config(args) -> RunConfig:
    ops = parse_operators(args.operators)
    forms = tuple(f.strip() for f in args.uom_forms.split(",") if f.strip())
    return RunConfig(operators=ops, uom_forms=forms, step_budget=args.budget, alpha=args.alpha, jobs=args.jobs)


def _dispatch(args) -> int:
    cfg = _config(args)
    if args.command == "mutate":
        ms = stage_mutate(load_program(args.program), args.out, cfg)
        s = ms.stats
        print(f"generated {s.generated}  duplicates {s.duplicates_removed}  retained {s.retained}")
        for m in ms.mutants:
            print(f"{m.id}\t{m.line}\t{m.description}")
    elif args.command == "run":
        cm, rm, stats = stage_run(load_program(args.program), args.tests, args.out, cfg)
        print(
            f"tests {len(cm.tests)} (failing {cm.n_failing})  mutants {stats.retained}  "
            f"killed {stats.killed}  dormant {stats.dormant}  score {stats.mutation_score:.3f}"
        )
        if cm.n_failing == 0:
            print("warning: no failing test; localization will refuse to run", file=sys.stderr)
    elif args.command == "localize":
        ranking = stage_localize(args.out, args.technique, cfg)
        sys.stdout.write(ranking.to_tsv())
    elif args.command == "evaluate":
        report = stage_evaluate(load_manifest(args.manifest), args.out, cfg)
        sys.stdout.write(report.to_text())
    elif args.command == "pipeline":
        report = run_pipeline(load_manifest(args.manifest), args.out, cfg)
        sys.stdout.write(report.to_text())
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except NoFailingTestError as exc:
        print(f"mbfl: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (MiniLangSyntaxError, SuiteFormatError, FileNotFoundError, ValueError) as exc:
        print(f"mbfl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"mbfl: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
