"""
Guessing the optimal cost
=========================

Without a guess, the solvers run one threshold instance per rung of a
geometric ladder of guesses and keep the cheapest candidate that reaches
the utility bar (1 - eps) * tau / r.

* The two-pass solver reads the weight range first, then runs every rung.
* The one-pass solver only needs an upper bound B; it opens lower rungs as
  it learns a lower bound and discards rungs above the best qualifying one.
"""

from ksubcover import ProblemConfig, algorithm2, algorithm3, build_guess_set
from ksubcover.instances import generate_coverage

print("ladder for w in [1, 2], n = 4, eps = 0.5:", build_guess_set(1, 2, 4, 0.5))

inst = generate_coverage(seed=7, n=8, k=2, universe_size=8, density=0.3)
g, w = inst.oracle(), inst.weight_table()
tau = 0.8 * float(g.value_table().max())
B = inst.n * max(inst.weights)
cfg = ProblemConfig(tau=tau, epsilon=0.3, monotone=True, upper_bound_B=B)
order = list(range(inst.n))

two = algorithm2(order, cfg, g, w)
print(f"two-pass: {len(two.ladder)} rungs, weight {two.weight}, utility {two.utility:.3g} (bar {cfg.utility_bar:.3g})")
for c in two.candidates:
    print(f"  guess {c.guess:7.3f}  weight {c.weight:4g}  utility {c.utility:5g}  qualifies {c.qualifies}")

###############################################################################
# The one-pass solver, with both final selection rules.

for selection in ("default", "max-utility"):
    one = algorithm3(order, cfg, g, w, selection=selection)
    print(
        f"one-pass ({selection}): weight {one.weight}, utility {one.utility:.3g}, "
        f"live rungs at most {one.stats.live_instances_max}, peak pairs {one.stats.peak_stored_pairs}"
    )
