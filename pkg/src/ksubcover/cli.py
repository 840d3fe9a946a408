"""Command-line entry point: ``ksubcover {verify,solve,exact,gen,bench}``.

Exit codes: 0 success, 2 infeasible, 3 contract violation, 4 input error.
"""

from __future__ import annotations

import argparse
import glob
import json
import sys
from pathlib import Path

from . import runner
from .errors import KSubCoverError
from .exact import exact_cover
from .instances import (
    generate_coverage,
    generate_nonmonotone_tabular,
    generate_separable,
    read_instance,
    write_instance,
)
from .runner import EXIT_CONTRACT, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_SUCCESS, ExperimentConfig
from .verify import verify_all


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t]


def _seeds(text: str) -> list[int | None]:
    return [None if t == "none" else int(t) for t in text.split(",") if t]


def _guess(text: str) -> float | str:
    return text if text == "from-exact" else float(text)


def _bound(text: str) -> float | str:
    return text if text == "n-wmax" else float(text)


def _add_monotone_flags(p: argparse.ArgumentParser) -> None:
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--monotone", dest="monotone", action="store_const", const=True,
                     help="treat g as monotone (r = 2)")
    grp.add_argument("--non-monotone", dest="monotone", action="store_const", const=False,
                     help="treat g as non-monotone (r = 3)")
    grp.add_argument("--auto-monotone", dest="monotone", action="store_const", const=None,
                     help="derive the flag by exhaustive check (default)")
    p.set_defaults(monotone=None)


def _add_tau_flags(p: argparse.ArgumentParser, required: bool) -> None:
    grp = p.add_mutually_exclusive_group(required=required)
    grp.add_argument("--tau", type=float, help="utility threshold")
    grp.add_argument("--tau-fraction", type=float,
                     help="threshold as a fraction of the exact maximum utility")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ksubcover", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the exhaustive structural verifiers")
    p.add_argument("instance")
    p.add_argument("--show", type=int, default=3, help="violations to print per property")

    p = sub.add_parser("solve", help="run one streaming algorithm")
    p.add_argument("instance")
    p.add_argument("--algorithm", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--epsilon", type=float, required=True)
    _add_tau_flags(p, required=True)
    _add_monotone_flags(p)
    p.add_argument("--guess", type=_guess, help="algorithm 1: guessed optimum or 'from-exact'")
    p.add_argument("--upper-bound-B", type=_bound, help="algorithm 3: bound B or 'n-wmax'")
    p.add_argument("--selection", choices=("default", "max-utility"), default="default")
    p.add_argument("--permute-seed", type=int)
    p.add_argument("--exact", action="store_true", help="also run the exact baseline and check bounds")
    p.add_argument("--trace", action="store_true", help="include per-element trace records")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")
    p.add_argument("--report", help="write the JSON report here instead of stdout")

    p = sub.add_parser("exact", help="brute-force optimum")
    p.add_argument("instance")
    _add_tau_flags(p, required=True)

    p = sub.add_parser("gen", help="generate a seeded instance")
    p.add_argument("family", choices=("coverage", "separable", "nonmonotone"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--universe-size", type=int, default=8)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--max-attempts", type=int, default=1000)
    p.add_argument("-o", "--output", help="output file (default stdout)")

    p = sub.add_parser("bench", help="sweep epsilon x algorithm x instances")
    p.add_argument("instances", nargs="+", help="instance files or glob patterns")
    p.add_argument("--epsilons", type=_floats, default=[0.1, 0.3, 0.5])
    p.add_argument("--algorithms", type=_ints, default=[1, 2, 3])
    p.add_argument("--permute-seeds", type=_seeds, default=[None])
    _add_tau_flags(p, required=False)
    _add_monotone_flags(p)
    p.add_argument("--selection", choices=("default", "max-utility"), default="default")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--report", help="write the merged JSON reports here")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        Path(path).write_text(text + "\n")
    else:
        print(text)


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    reports = verify_all(inst.oracle())
    for rep in reports.values():
        print(rep.summary())
        for v in rep.violations[: args.show]:
            print(f"    s={v.s} t={v.t} element={v.element} positions={v.positions} slack={v.slack:.6g}")
    structural = ("k-submodular", "orthant-submodular", "pairwise-monotone")
    if not all(reports[p].ok for p in structural):
        return EXIT_CONTRACT
    if inst.declared_monotone and not reports["monotone"].ok:
        print("declared monotone, but a monotonicity witness exists")
        return EXIT_CONTRACT
    return EXIT_SUCCESS


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    report = runner.run_experiment(ExperimentConfig(
        instance=inst,
        algorithm=args.algorithm,
        epsilon=args.epsilon,
        tau=args.tau,
        tau_fraction=args.tau_fraction,
        monotone=args.monotone,
        guess=args.guess,
        upper_bound_B=args.upper_bound_B,
        selection=args.selection,
        permute_seed=args.permute_seed,
        run_exact=args.exact,
        trace=args.trace,
        label=Path(args.instance).name,
    ))
    _emit(report.to_json(include_timing=args.timing), args.report)
    for note in report.notes:
        print(f"note: {note}", file=sys.stderr)
    return report.exit_code


def cmd_exact(args) -> int:
    inst = read_instance(args.instance)
    g, w = inst.oracle(), inst.weight_table()
    tau = args.tau if args.tau is not None else args.tau_fraction * float(g.value_table().max())
    sol = exact_cover(g, w, tau)
    print(json.dumps(runner._jsonable({
        "tau": tau,
        "feasible": sol.feasible,
        "weight": sol.weight,
        "utility": sol.utility,
        "solution": [[inst.names[x], i] for x, i in sol.solution.pairs()],
    }), sort_keys=True, indent=2))
    return EXIT_SUCCESS if sol.feasible else EXIT_INFEASIBLE


def cmd_gen(args) -> int:
    if args.family == "coverage":
        inst = generate_coverage(args.seed, args.n, args.k, args.universe_size, args.density)
    elif args.family == "separable":
        inst = generate_separable(args.seed, args.n, args.k, args.universe_size, args.density)
    else:
        inst = generate_nonmonotone_tabular(args.seed, args.n, args.k, args.max_attempts)
    if args.output:
        write_instance(inst, args.output)
    else:
        sys.stdout.write(inst.dumps())
    return EXIT_SUCCESS


def cmd_bench(args) -> int:
    paths = []
    for pattern in args.instances:
        matches = sorted(glob.glob(pattern))
        paths.extend(matches or [pattern])
    instances = {Path(p).name: read_instance(p) for p in paths}
    cells = runner.bench_cells(
        instances, args.epsilons, args.algorithms, args.permute_seeds,
        tau_fraction=args.tau_fraction if args.tau_fraction is not None else 0.8,
        tau=args.tau, monotone=args.monotone, selection=args.selection,
    )
    reports = runner.run_bench(cells, jobs=args.jobs)
    if args.report:
        Path(args.report).write_text(runner.bench_json(reports) + "\n")
    print(runner.bench_table(reports))
    failed = [r for r in reports if r.verdict and not r.verdict["pass"]]
    for r in failed:
        print(f"bound violated: {r.label}", file=sys.stderr)
    if any(r.status == "error" for r in reports):
        return EXIT_INPUT
    if failed or any(r.status == "contract-violation" for r in reports):
        return EXIT_CONTRACT
    return EXIT_SUCCESS


COMMANDS = {"verify": cmd_verify, "solve": cmd_solve, "exact": cmd_exact, "gen": cmd_gen, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except KSubCoverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
