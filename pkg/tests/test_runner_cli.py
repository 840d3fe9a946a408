import json

import pytest

from ksubcover.cli import main
from ksubcover.instances import (
    generate_coverage,
    generate_nonmonotone_tabular,
    perturbed_table,
    read_instance,
    write_instance,
)
from ksubcover.kset import KSet, kset_weight
from ksubcover.runner import (
    EXIT_CONTRACT,
    EXIT_INFEASIBLE,
    EXIT_INPUT,
    EXIT_SUCCESS,
    ExperimentConfig,
    bench_cells,
    bench_json,
    run_bench,
    run_experiment,
)

from conftest import DATA

I0 = str(DATA / "i0.ksc")


def _kset(report, inst):
    index = {name: x for x, name in enumerate(inst.names)}
    return KSet(inst.k, [(index[name], i) for name, i in report.solution])


def test_i0_algorithm2_passes_bounds(i0):
    rep = run_experiment(ExperimentConfig(i0, 2, 0.5, tau=3, run_exact=True))
    assert rep.status == "success" and rep.exit_code == EXIT_SUCCESS
    assert rep.utility >= 0.75
    assert rep.exact["weight"] == 3
    assert rep.verdict["pass"] and rep.verdict["alpha"] == 5


def test_algorithm1_without_guess_is_an_error(i0):
    rep = run_experiment(ExperimentConfig(i0, 1, 0.5, tau=3))
    assert rep.status == "error" and rep.exit_code == EXIT_INPUT
    assert any("guess" in note for note in rep.notes)


def test_algorithm3_both_selection_modes(i0):
    inst = generate_coverage(4, 6, 2, 6, 0.3)
    reps = [
        run_experiment(ExperimentConfig(inst, 3, 0.3, tau_fraction=0.8, upper_bound_B="n-wmax",
                                        selection=sel, run_exact=True))
        for sel in ("default", "max-utility")
    ]
    for rep in reps:
        assert rep.status == "success"
        assert rep.utility >= rep.config["utility_bar"]
    assert reps[0].weight <= reps[1].weight


def test_report_is_self_consistent():
    inst = generate_nonmonotone_tabular(9, 4, 2)
    g, w = inst.oracle(), inst.weight_table()
    for alg, extra in ((1, {"guess": "from-exact"}), (2, {}), (3, {"upper_bound_B": "n-wmax"})):
        rep = run_experiment(ExperimentConfig(inst, alg, 0.3, tau_fraction=0.7, permute_seed=2, **extra))
        s = _kset(rep, inst)
        assert kset_weight(w, s) == rep.weight
        assert (g(s) if len(s) else 0.0) == rep.utility
        assert rep.config["monotone"] is False and rep.config["r"] == 3


def test_contract_violations(i0):
    rep = run_experiment(ExperimentConfig(i0, 3, 0.5, tau=3, upper_bound_B=1, run_exact=True))
    assert rep.status == "contract-violation" and rep.exit_code == EXIT_CONTRACT
    rep = run_experiment(ExperimentConfig(i0, 1, 0.5, tau=3, guess=2, run_exact=True))
    assert rep.status == "contract-violation"
    liar = generate_nonmonotone_tabular(1, 4, 2)
    rep = run_experiment(ExperimentConfig(liar, 2, 0.5, tau_fraction=0.5, monotone=True))
    assert rep.status == "contract-violation"


def test_infeasible_tau(i0):
    rep = run_experiment(ExperimentConfig(i0, 2, 0.5, tau=100, run_exact=True))
    assert rep.status == "infeasible" and rep.exit_code == EXIT_INFEASIBLE
    assert rep.verdict is None and rep.solution == []


def test_same_permutation_same_report(i0):
    inst = generate_coverage(8, 6, 2, 6, 0.3)
    cfg = dict(instance=inst, algorithm=3, epsilon=0.3, tau_fraction=0.8, upper_bound_B="n-wmax", run_exact=True)
    a = run_experiment(ExperimentConfig(permute_seed=5, **cfg))
    b = run_experiment(ExperimentConfig(permute_seed=5, **cfg))
    assert a.to_json() == b.to_json()
    assert "duration_s" not in json.loads(a.to_json())
    assert "duration_s" in json.loads(a.to_json(include_timing=True))


def test_bench_parallel_matches_sequential():
    insts = {"c": generate_coverage(1, 5, 2, 6, 0.3), "t": generate_nonmonotone_tabular(1, 4, 2)}
    cells = bench_cells(insts, [0.3], [1, 2, 3], [None, 1])
    seq = bench_json(run_bench(cells))
    par = bench_json(run_bench(list(reversed(cells)), jobs=2))
    assert seq == par
    assert all(r["verdict"]["pass"] for r in json.loads(seq))


# CLI --------------------------------------------------------------------------


def test_cli_verify(tmp_path, capsys):
    assert main(["verify", I0]) == EXIT_SUCCESS
    assert "k-submodular" in capsys.readouterr().out
    bad = tmp_path / "bad.ksc"
    write_instance(perturbed_table(read_instance(I0), seed=0), bad)
    assert main(["verify", str(bad)]) == EXIT_CONTRACT


def test_cli_solve_and_exact(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = main(["solve", I0, "--algorithm", "1", "--epsilon", "0.5", "--tau", "3", "--guess", "3",
                 "--exact", "--report", str(out)])
    assert code == EXIT_SUCCESS
    doc = json.loads(out.read_text())
    assert doc["solution"] == [["a", 1], ["b", 1]] and doc["verdict"]["pass"]
    assert main(["solve", I0, "--algorithm", "2", "--epsilon", "0.5", "--tau", "50"]) == EXIT_INFEASIBLE
    assert main(["solve", I0, "--algorithm", "1", "--epsilon", "0.5", "--tau", "3"]) == EXIT_INPUT
    capsys.readouterr()
    assert main(["exact", I0, "--tau", "3"]) == EXIT_SUCCESS
    assert json.loads(capsys.readouterr().out)["weight"] == 3
    assert main(["exact", I0, "--tau", "4"]) == EXIT_INFEASIBLE


def test_cli_missing_file_is_input_error(tmp_path):
    assert main(["verify", str(tmp_path / "nope.ksc")]) == EXIT_INPUT


def test_cli_gen_is_deterministic(tmp_path):
    for family in ("coverage", "separable", "nonmonotone"):
        a, b = tmp_path / f"{family}a.ksc", tmp_path / f"{family}b.ksc"
        for p in (a, b):
            assert main(["gen", family, "--seed", "3", "--n", "4", "--k", "2", "-o", str(p)]) == EXIT_SUCCESS
        assert a.read_bytes() == b.read_bytes()


def test_cli_bench(tmp_path, capsys):
    for s in range(2):
        main(["gen", "coverage", "--seed", str(s), "--n", "4", "--k", "2", "-o", str(tmp_path / f"c{s}.ksc")])
    report = tmp_path / "bench.json"
    code = main(["bench", str(tmp_path / "c*.ksc"), "--epsilons", "0.3,0.5", "--report", str(report)])
    assert code == EXIT_SUCCESS
    assert len(json.loads(report.read_text())) == 2 * 2 * 3
    assert "alg" in capsys.readouterr().out
