"""Compare the compiled and pure-Python interpreter backends.

Two workloads:

* ``corpus``: every retained mutant of every bundled bug on its full test
  suite (the result-matrix hot loop), with a reduced step budget so the pure
  Python run stays short.
* ``spin``: one non-terminating loop run to the step budget, the worst case
  a mutant can hit.

    python benchmarks/bench_vm.py [--budget N] [--repeat R]
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from mbfl.minilang import load_suite, parse
from mbfl.minilang.bytecode import compile_program
from mbfl.minilang.interpreter import available_backends, run_compiled
from mbfl.mutation import generate_mutants, prune_duplicates
from mbfl.pipeline import load_manifest

MANIFEST = Path(__file__).resolve().parent.parent / "corpus" / "manifest.txt"


def corpus_jobs():
    jobs = []
    for bundle in load_manifest(MANIFEST).bugs:
        program = parse(bundle.program.read_text())
        suite = load_suite(bundle.tests)
        programs = [program] + [m.program for m in prune_duplicates(generate_mutants(program)).mutants]
        jobs += [(compile_program(p), [t.inputs for t in suite]) for p in programs]
    return jobs


def run_corpus(jobs, vm, budget):
    results = []
    for cp, inputs in jobs:
        for inp in inputs:
            results.append(run_compiled(cp, inp, budget, vm))
    return results


def run_spin(vm, budget):
    cp = compile_program(parse("i = 0;\nwhile (1) {\n  i += 1;\n}"))
    return [run_compiled(cp, (), budget, vm)]


def best_of(fn, repeat):
    times, result = [], None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        times.append(time.perf_counter() - start)
    return min(times), result


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--budget", type=int, default=10_000, help="step budget per execution")
    ap.add_argument("--repeat", type=int, default=3, help="take the best of this many runs")
    args = ap.parse_args(argv)

    backends = available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is available", file=sys.stderr)
    jobs = corpus_jobs()
    n_exec = sum(len(inputs) for _, inputs in jobs)
    workloads = {
        f"corpus ({n_exec} executions)": lambda vm: run_corpus(jobs, vm, args.budget),
        f"spin ({args.budget} steps)": lambda vm: run_spin(vm, args.budget),
    }

    print(f"{'workload':34s} {'backend':9s} {'seconds':>9s} {'speedup':>8s}")
    for name, work in workloads.items():
        timings, outputs = {}, {}
        for backend, vm in backends.items():
            timings[backend], outputs[backend] = best_of(lambda: work(vm), args.repeat)
        if len(outputs) == 2 and outputs["compiled"] != outputs["python"]:
            print(f"backends disagree on {name}", file=sys.stderr)
            return 1
        for backend, t in timings.items():
            speedup = timings["python"] / t if backend != "python" else 1.0
            print(f"{name:34s} {backend:9s} {t:9.3f} {speedup:7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
