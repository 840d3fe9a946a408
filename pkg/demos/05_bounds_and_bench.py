"""
Measuring the bicriteria guarantee
==================================

At small sizes the exact minimum-cost cover is found by enumeration, which
lets every streaming run be checked against its weight and utility bounds.
A sweep over several instances, epsilons and stream orders gives a table.
"""

from ksubcover import algorithm2, check_bicriteria, exact_cover, guarantee_factors, ProblemConfig
from ksubcover.instances import generate_coverage, generate_nonmonotone_tabular
from ksubcover.runner import bench_cells, bench_table, run_bench

inst = generate_nonmonotone_tabular(seed=3, n=5, k=2)
g, w = inst.oracle(), inst.weight_table()
tau = 0.8 * float(g.value_table().max())
exact = exact_cover(g, w, tau)
print("optimum weight", exact.weight, "solution", exact.solution)

result = algorithm2(range(inst.n), ProblemConfig(tau, 0.3, monotone=False), g, w)
factors = guarantee_factors(0.3, monotone=False, algorithm=2)
verdict = check_bicriteria(result.solution, exact, factors, tau, g, w)
print(verdict.as_dict())

###############################################################################
# A small sweep. Reports are deterministic, so passing ``jobs > 1`` to
# ``run_bench`` changes only the speed.

instances = {f"cov{s}": generate_coverage(s, 6, 2, 6, 0.3) for s in range(3)}
instances["table"] = inst
cells = bench_cells(instances, epsilons=[0.1, 0.3, 0.5], algorithms=[1, 2, 3], permute_seeds=[None, 1, 2])
print(bench_table(run_bench(cells)))
