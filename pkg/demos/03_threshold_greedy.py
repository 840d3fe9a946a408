"""
One pass with a known budget
============================

When a guess of the optimal cost is available, a single threshold-greedy
pass suffices. Each arriving element either replaces the solution (if it
alone reaches the target), is added (if its gain per unit cost clears the
threshold and the budget allows), or is skipped.
"""

from pathlib import Path

from ksubcover import KSet, ProblemConfig, algorithm1, make_threshold_state, process_element
from ksubcover.instances import read_instance

inst = read_instance(Path(__file__).parent / "data" / "i0.ksc")
g, w = inst.oracle(), inst.weight_table()
cfg = ProblemConfig(tau=3, epsilon=0.5, monotone=True, guessed_opt=3)

state = make_threshold_state(cfg, guess=3, k=2)
print(f"threshold {state.theta}, budget {state.budget_A}")

trace = []
for x in range(inst.n):
    process_element(state, cfg, g, w, x, trace=trace)
for rec in trace:
    print(f"{inst.names[rec.element]}: {rec.branch} at position {rec.position}, gain {rec.gain}")
print("solution", state.solution, "weight", state.weight_so_far, "utility", state.utility)

###############################################################################
# The same run through the solver entry point, which also collects stats.

result = algorithm1(range(inst.n), cfg, g, w)
print("algorithm 1:", result.solution, "queries:", result.stats.oracle_queries)
assert result.solution == KSet(2, [(0, 1), (1, 1)])
