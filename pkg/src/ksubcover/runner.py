"""Experiment runner: one algorithm on one instance, plus the bench sweep.

A run yields a :class:`RunReport`. Its canonical JSON form (sorted keys,
no wall-clock time) is byte-identical across repeats with the same
instance, configuration and permutation seed.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .errors import ConfigError, InfeasibleError, KSubCoverError
from .exact import ExactSolution, check_bicriteria, exact_cover, max_utility, guarantee_factors
from .instances import InstanceFile
from .kset import KSet, kset_weight
from .oracles import CountingOracle, TabularFunction
from .streaming import ProblemConfig, SolverResult, algorithm1, algorithm2, algorithm3
from .verify import verify_monotone

EXIT_SUCCESS = 0
EXIT_INFEASIBLE = 2
EXIT_CONTRACT = 3
EXIT_INPUT = 4

STATUS_EXIT = {
    "success": EXIT_SUCCESS,
    "infeasible": EXIT_INFEASIBLE,
    "contract-violation": EXIT_CONTRACT,
    "error": EXIT_INPUT,
}


@dataclass
class ExperimentConfig:
    """What to run.

    ``tau`` is absolute; alternatively ``tau_fraction`` scales the exact
    maximum utility (desk scale only). ``monotone=None`` derives the flag
    with the exhaustive monotonicity check. ``guess`` may be a number or
    ``"from-exact"``; ``upper_bound_B`` a number or ``"n-wmax"``.
    """

    instance: InstanceFile
    algorithm: int
    epsilon: float
    tau: float | None = None
    tau_fraction: float | None = None
    monotone: bool | None = None
    guess: float | str | None = None
    upper_bound_B: float | str | None = None
    selection: str = "default"
    permute_seed: int | None = None
    run_exact: bool = False
    trace: bool = False
    label: str = ""


@dataclass
class RunReport:
    algorithm: int
    selection: str
    label: str
    config: dict[str, Any]
    permute_seed: int | None
    stream: list[str]
    status: str
    solution: list[tuple[str, int]] = field(default_factory=list)
    weight: float = 0.0
    utility: float = 0.0
    stats: dict[str, Any] = field(default_factory=dict)
    exact: dict[str, Any] | None = None
    verdict: dict[str, Any] | None = None
    notes: list[str] = field(default_factory=list)
    duration_s: float = 0.0
    trace: list[dict[str, Any]] | None = None

    @property
    def infeasible(self) -> bool:
        return self.status == "infeasible"

    @property
    def exit_code(self) -> int:
        return STATUS_EXIT[self.status]

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        d = {
            "algorithm": self.algorithm,
            "selection": self.selection,
            "label": self.label,
            "config": self.config,
            "permute_seed": self.permute_seed,
            "stream": self.stream,
            "status": self.status,
            "infeasible": self.infeasible,
            "solution": [list(p) for p in self.solution],
            "weight": self.weight,
            "utility": self.utility,
            "stats": self.stats,
            "exact": self.exact,
            "verdict": self.verdict,
            "notes": self.notes,
        }
        if self.trace is not None:
            d["trace"] = self.trace
        if include_timing:
            d["duration_s"] = self.duration_s
        return d

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(_jsonable(self.to_dict(include_timing)), sort_keys=True, indent=2)


def _jsonable(obj):
    if isinstance(obj, float):
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        if math.isnan(obj):
            return "nan"
        return obj
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def stream_order(n: int, permute_seed: int | None) -> list[int]:
    if permute_seed is None:
        return list(range(n))
    return [int(x) for x in np.random.default_rng(permute_seed).permutation(n)]


def _stats_dict(result: SolverResult) -> dict[str, Any]:
    st = result.stats
    return {
        "elements_seen": st.elements_seen,
        "peak_stored_pairs": st.peak_stored_pairs,
        "live_instances_max": st.live_instances_max,
        "oracle_queries": st.oracle_queries,
        "max_queries_per_element": max(st.queries_per_element, default=0),
        "w_min": st.w_min,
        "w_max": st.w_max,
        "gamma": st.gamma,
        "kappa": st.kappa,
        "ladder_size": len(result.ladder),
        "candidates": len(result.candidates),
        "qualifying_candidates": sum(c.qualifies for c in result.candidates),
        "selected_guess": (
            next(c.guess for c in result.candidates if c.index == result.selected)
            if result.selected is not None
            else None
        ),
    }


def run_experiment(cfg: ExperimentConfig) -> RunReport:
    """Run one cell. Errors in the inputs are reported with status ``"error"``."""
    start = time.perf_counter()
    inst = cfg.instance
    order = stream_order(inst.n, cfg.permute_seed)
    report = RunReport(
        algorithm=cfg.algorithm,
        selection=cfg.selection,
        label=cfg.label,
        config={},
        permute_seed=cfg.permute_seed,
        stream=[inst.names[x] for x in order],
        status="error",
    )
    try:
        _run(cfg, inst, order, report)
    except KSubCoverError as exc:
        report.status = "error"
        report.notes.append(f"{type(exc).__name__}: {exc}")
    report.duration_s = time.perf_counter() - start
    return report


def _run(cfg: ExperimentConfig, inst: InstanceFile, order: list[int], report: RunReport) -> None:
    if cfg.algorithm not in (1, 2, 3):
        raise ConfigError(f"algorithm must be 1, 2 or 3, got {cfg.algorithm}")
    g = inst.oracle()
    w = inst.weight_table()

    monotone = cfg.monotone
    out_of_contract: list[str] = []
    if monotone is None:
        monotone = verify_monotone(g).ok
        report.notes.append(f"monotone flag derived by exhaustive check: {monotone}")
    elif monotone and isinstance(g, TabularFunction) and not verify_monotone(g).ok:
        out_of_contract.append("declared monotone but the exhaustive check found a witness")

    tau = cfg.tau
    if tau is None:
        if cfg.tau_fraction is None:
            raise ConfigError("give tau or tau_fraction")
        tau = cfg.tau_fraction * max_utility(g)

    need_exact = cfg.run_exact or cfg.guess == "from-exact"
    exact: ExactSolution | None = exact_cover(g, w, tau) if need_exact else None

    guess = cfg.guess
    if cfg.algorithm == 1:
        if guess is None:
            raise ConfigError("algorithm 1 needs a guess (a number or 'from-exact')")
        if guess == "from-exact":
            if not exact.feasible:
                raise InfeasibleError("tau exceeds the maximum utility; no optimum to guess")
            guess = exact.weight
        guess = float(guess)
    else:
        guess = None

    B = cfg.upper_bound_B
    if cfg.algorithm == 3:
        if B is None:
            raise ConfigError("algorithm 3 needs an upper bound B (a number or 'n-wmax')")
        B = inst.n * max(inst.weights) if B == "n-wmax" else float(B)
    else:
        B = None

    pcfg = ProblemConfig(tau, cfg.epsilon, monotone, B, guess)
    report.config = {
        "tau": tau,
        "epsilon": cfg.epsilon,
        "monotone": monotone,
        "r": pcfg.r,
        "guess": guess,
        "upper_bound_B": B,
        "utility_bar": pcfg.utility_bar,
    }

    if exact is not None and exact.feasible:
        if guess is not None and guess < exact.weight:
            out_of_contract.append(f"guess {guess} < optimum {exact.weight}")
        if B is not None and B < exact.weight:
            out_of_contract.append(f"B {B} < optimum {exact.weight}")

    counter = CountingOracle(g)
    infeasible = False
    try:
        if cfg.algorithm == 1:
            result = algorithm1(order, pcfg, counter, w, trace=cfg.trace)
        elif cfg.algorithm == 2:
            result = algorithm2(order, pcfg, counter, w, trace=cfg.trace)
        else:
            result = algorithm3(order, pcfg, counter, w, selection=cfg.selection, trace=cfg.trace)
    except InfeasibleError as exc:
        result = exc.result
        infeasible = True
        report.notes.append(str(exc))

    sol = result.solution
    report.solution = [(inst.names[x], i) for x, i in sol.pairs()]
    report.weight = result.weight
    report.utility = result.utility
    report.stats = _stats_dict(result)
    if cfg.trace and result.trace is not None:
        report.trace = [
            {"element": inst.names[r.element], "guess": r.guess, "branch": r.branch,
             "position": r.position, "gain": r.gain, "weight": r.weight}
            for r in result.trace
        ]
    _self_check(report, inst, g, w, sol)

    if exact is not None:
        report.exact = {
            "feasible": exact.feasible,
            "weight": exact.weight,
            "utility": exact.utility,
            "solution": [[inst.names[x], i] for x, i in exact.solution.pairs()],
        }
    if exact is not None and not exact.feasible and not infeasible:
        # tau above max g: the problem itself has no feasible k-set, even if a
        # candidate clears the relaxed bar (1-eps) tau / r
        infeasible = True
        report.notes.append(f"tau {tau} exceeds the maximum utility {exact.utility}")
    if cfg.algorithm == 1 and not infeasible and result.utility < pcfg.utility_bar:
        infeasible = True
        report.notes.append("algorithm 1 output is below the utility bar")

    if exact is not None and exact.feasible and not infeasible:
        factors = guarantee_factors(cfg.epsilon, monotone, cfg.algorithm)
        verdict = check_bicriteria(sol, exact, factors, tau, g, w, guess=guess)
        report.verdict = {"alpha": factors.alpha, "beta": factors.beta, "reference": factors.reference,
                          **verdict.as_dict()}

    report.notes.extend(out_of_contract)
    if out_of_contract:
        report.status = "contract-violation"
    elif infeasible:
        report.status = "infeasible"
    else:
        report.status = "success"


def _self_check(report: RunReport, inst: InstanceFile, g, w, sol: KSet) -> None:
    weight = kset_weight(w, sol)
    utility = g(sol) if len(sol) else 0.0
    if weight != report.weight or utility != report.utility:
        raise AssertionError(
            f"report inconsistent: weight {report.weight} vs {weight}, utility {report.utility} vs {utility}"
        )


# -- bench ---------------------------------------------------------------------


@dataclass
class BenchCell:
    key: str
    config: ExperimentConfig


def bench_cells(
    instances: dict[str, InstanceFile],
    epsilons: list[float],
    algorithms: list[int],
    permute_seeds: list[int | None],
    tau_fraction: float = 0.8,
    tau: float | None = None,
    monotone: bool | None = None,
    selection: str = "default",
) -> list[BenchCell]:
    cells = []
    for name in sorted(instances):
        for eps in epsilons:
            for alg in algorithms:
                for seed in permute_seeds:
                    key = f"{name}|eps={eps}|alg={alg}|perm={seed}"
                    cells.append(BenchCell(key, ExperimentConfig(
                        instance=instances[name],
                        algorithm=alg,
                        epsilon=eps,
                        tau=tau,
                        tau_fraction=None if tau is not None else tau_fraction,
                        monotone=monotone,
                        guess="from-exact" if alg == 1 else None,
                        upper_bound_B="n-wmax" if alg == 3 else None,
                        selection=selection,
                        permute_seed=seed,
                        run_exact=True,
                        label=key,
                    )))
    return cells


def _run_cell(cell: BenchCell) -> tuple[str, RunReport]:
    return cell.key, run_experiment(cell.config)


def run_bench(cells: list[BenchCell], jobs: int = 1) -> list[RunReport]:
    """Run every cell; the output is ordered by cell key whatever ``jobs`` is."""
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            pairs = list(pool.map(_run_cell, cells))
    else:
        pairs = [_run_cell(c) for c in cells]
    return [r for _, r in sorted(pairs, key=lambda p: p[0])]


def bench_json(reports: list[RunReport], include_timing: bool = False) -> str:
    docs = [_jsonable(r.to_dict(include_timing)) for r in reports]
    return json.dumps(docs, sort_keys=True, indent=2)


def bench_table(reports: list[RunReport]) -> str:
    """Aggregate per (algorithm, epsilon): cell counts, pass rate, mean ratios."""
    groups: dict[tuple[int, float], list[RunReport]] = {}
    for r in reports:
        groups.setdefault((r.algorithm, r.config.get("epsilon", math.nan)), []).append(r)
    lines = [f"{'alg':>3} {'eps':>5} {'cells':>5} {'ok':>4} {'infeas':>6} {'pass':>5} {'w/w(v)':>7} {'g/tau':>6} {'peak':>5} {'queries':>8}"]
    for (alg, eps), rs in sorted(groups.items()):
        ok = [r for r in rs if r.status == "success"]
        verdicts = [r.verdict for r in ok if r.verdict]
        ratios = [r.weight / r.exact["weight"] for r in ok if r.exact and r.exact["feasible"] and r.exact["weight"] > 0]
        gt = [r.utility / r.config["tau"] for r in ok]
        peak = [r.stats["peak_stored_pairs"] for r in rs if r.stats]
        queries = [r.stats["oracle_queries"] for r in rs if r.stats]
        lines.append(
            f"{alg:>3} {eps:>5g} {len(rs):>5} {len(ok):>4} {sum(r.infeasible for r in rs):>6} "
            f"{sum(v['pass'] for v in verdicts):>5} "
            f"{np.mean(ratios) if ratios else math.nan:>7.3f} {np.mean(gt) if gt else math.nan:>6.3f} "
            f"{max(peak, default=0):>5} {np.mean(queries) if queries else 0:>8.1f}"
        )
    return "\n".join(lines)
