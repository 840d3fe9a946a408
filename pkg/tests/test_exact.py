import itertools
import math

import numpy as np
import pytest

from ksubcover import BudgetExceededError, PreconditionError
from ksubcover.exact import (
    ExactSolution,
    check_bicriteria,
    exact_cover,
    exact_cover_dfs,
    max_utility,
    guarantee_factors,
)
from ksubcover.instances import generate_coverage, generate_nonmonotone_tabular, generate_separable
from ksubcover.kset import KSet, WeightTable
from ksubcover.oracles import CoverageFunction, TabularFunction


@pytest.fixture
def i0():
    return CoverageFunction(2, [1, 1, 1], [[{0, 1}, {0}], [{2}, {1, 2}]]), WeightTable([1, 2])


def test_exact_cover_examples(i0):
    g, w = i0
    sol = exact_cover(g, w, 3)
    assert sol.feasible and sol.weight == 3 and g(sol.solution) >= 3
    assert sol.solution == KSet(2, [(0, 1), (1, 1)])  # lexicographically first optimum
    empty = exact_cover(g, w, 0)
    assert empty.feasible and empty.weight == 0 and len(empty.solution) == 0
    bad = exact_cover(g, w, 3.5)
    assert not bad.feasible and bad.weight == math.inf


def test_max_utility_examples(i0):
    g, _ = i0
    assert max_utility(g) == 3
    assert max_utility(TabularFunction(2, 2, np.zeros(9))) == 0
    single = CoverageFunction(2, [1, 2, 4], [[{0}, {1, 2}]])
    assert max_utility(single) == max(single(KSet(2, [(0, 1)])), single(KSet(2, [(0, 2)])), 0)


def brute(g, w, tau):
    """Reference: plain Python scan over position vectors."""
    best = None
    for v in itertools.product(range(g.k + 1), repeat=g.n):
        s = KSet.from_vector(v, g.k)
        if g(s) >= tau:
            cost = sum(w[x] for x, _ in s)
            if best is None or cost < best:
                best = cost
    return best


def test_exact_agrees_with_independent_enumerators():
    insts = [generate_coverage(s, 4, 2, 5, 0.4) for s in range(4)]
    insts += [generate_separable(s, 4, 3, 5, 0.4) for s in range(3)]
    insts += [generate_nonmonotone_tabular(s, 4, 2) for s in range(3)]
    for inst in insts:
        g, w = inst.oracle(), inst.weight_table()
        top = max_utility(g)
        for frac in (0.3, 0.7, 1.0, 1.2):
            a, b = exact_cover(g, w, frac * top), exact_cover_dfs(g, w, frac * top)
            ref = brute(g, w, frac * top)
            assert a.feasible == b.feasible == (ref is not None)
            if a.feasible:
                assert a.weight == b.weight == ref
                assert g(a.solution) >= frac * top


def test_enumeration_budget():
    big = generate_coverage(0, 13, 2, 4, 0.3).oracle()
    with pytest.raises(BudgetExceededError):
        exact_cover(big, WeightTable([1] * 13), 1)
    with pytest.raises(BudgetExceededError):
        max_utility(big)


def test_guarantee_factors_examples():
    f = guarantee_factors(0.5, True, 2)
    assert (f.alpha, f.beta, f.reference) == (5, 0.25, "optimum")
    f = guarantee_factors(0.5, False, 1)
    assert f.alpha == pytest.approx(3.5 / 1.5) and f.beta == pytest.approx(1 / 6) and f.reference == "guess"
    assert guarantee_factors(1e-9, True, 3).beta == pytest.approx(0.5)
    assert guarantee_factors(0.3, False, 3).alpha == pytest.approx(3.7 / (0.9 * 0.7))


def test_check_bicriteria_examples(i0):
    g, w = i0
    exact = exact_cover(g, w, 3)
    f = guarantee_factors(0.5, True, 1)
    v = check_bicriteria(KSet(2, [(0, 1), (1, 1)]), exact, f, 3, g, w, guess=3)
    assert v.passed and v.weight_bound == 7.5 and v.utility_bound == 0.75
    assert v.as_dict()["pass"] is True
    low = check_bicriteria(KSet.empty(2), exact, f, 3, g, w, guess=3)
    assert not low.passed and low.utility_slack < 0
    opt = check_bicriteria(exact.solution, exact, guarantee_factors(0.3, True, 2), 3, g, w)
    assert opt.passed
    with pytest.raises(PreconditionError):
        check_bicriteria(KSet.empty(2), ExactSolution(KSet.empty(2), math.inf, 3, False), f, 4, g, w, guess=3)
