"""Brute-force ground truth for small instances and the bicriteria bound checker."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lattice
from .errors import ConfigError, PreconditionError
from .kset import KSet, WeightTable, kset_weight
from .oracles import UtilityOracle

TOLERANCE = 1e-9


@dataclass
class ExactSolution:
    solution: KSet
    weight: float
    utility: float
    feasible: bool


@dataclass(frozen=True)
class BoundFactors:
    alpha: float  # weight factor
    beta: float  # utility factor, fraction of tau
    reference: str  # "guess" for algorithm 1, "optimum" otherwise


@dataclass
class BicriteriaVerdict:
    weight: float
    weight_bound: float
    utility: float
    utility_bound: float

    @property
    def weight_slack(self) -> float:
        return self.weight_bound - self.weight

    @property
    def utility_slack(self) -> float:
        return self.utility - self.utility_bound

    @property
    def weight_ok(self) -> bool:
        return self.weight_slack >= -TOLERANCE

    @property
    def utility_ok(self) -> bool:
        return self.utility_slack >= -TOLERANCE

    @property
    def passed(self) -> bool:
        return self.weight_ok and self.utility_ok

    def as_dict(self) -> dict:
        return {
            "weight": self.weight,
            "weight_bound": self.weight_bound,
            "weight_slack": self.weight_slack,
            "utility": self.utility,
            "utility_bound": self.utility_bound,
            "utility_slack": self.utility_slack,
            "pass": self.passed,
        }


def _weights_per_code(w: WeightTable, digits: np.ndarray) -> np.ndarray:
    # fsum per k-set so that weights match kset_weight bit for bit
    wl = w.as_list()
    return np.array([math.fsum(wl[x] for x in np.flatnonzero(row)) for row in digits])


def exact_cover(g: UtilityOracle, w: WeightTable, tau: float, n: int | None = None, k: int | None = None) -> ExactSolution:
    """Minimum-weight k-set with ``g >= tau``, by enumerating all ``(k+1)^n`` k-sets.

    Ties go to the lexicographically smallest position vector (element 0 most
    significant).
    """
    n = g.n if n is None else n
    k = g.k if k is None else k
    if (n, k) != (g.n, g.k) or len(w) != n:
        raise ConfigError("instance size mismatch between oracle, weights and (n, k)")
    lattice.check_budget(n, k)
    vals = g.value_table()
    digits = lattice.all_vectors(n, k)
    weights = _weights_per_code(w, digits)
    feasible = np.flatnonzero(vals >= tau)
    if feasible.size == 0:
        return ExactSolution(KSet.empty(k), math.inf, float(vals.max()), False)
    best = feasible[np.argmin(weights[feasible])]  # argmin returns the first minimum
    sol = KSet.from_vector(digits[best], k)
    return ExactSolution(sol, kset_weight(w, sol), float(vals[best]), True)


def exact_cover_dfs(g: UtilityOracle, w: WeightTable, tau: float) -> ExactSolution:
    """Independent enumerator: depth-first from the last element, direct oracle queries.

    Used only to cross-check :func:`exact_cover`; returns some optimal k-set
    (no tie-break promise).
    """
    lattice.check_budget(g.n, g.k)
    n, k = g.n, g.k
    best: list = [math.inf, None, 0.0]
    pairs: dict[int, int] = {}

    def rec(x: int) -> None:
        if x < 0:
            s = KSet(k, pairs)
            val = g(s)
            if val >= tau:
                weight = kset_weight(w, s)
                if weight < best[0]:
                    best[:] = [weight, s, val]
            return
        rec(x - 1)
        for i in range(k, 0, -1):
            pairs[x] = i
            rec(x - 1)
            del pairs[x]

    rec(n - 1)
    if best[1] is None:
        return ExactSolution(KSet.empty(k), math.inf, 0.0, False)
    return ExactSolution(best[1], best[0], best[2], True)


def max_utility(g: UtilityOracle, n: int | None = None, k: int | None = None) -> float:
    if (n is not None and n != g.n) or (k is not None and k != g.k):
        raise ConfigError("instance size mismatch")
    lattice.check_budget(g.n, g.k)
    return float(g.value_table().max())


def guarantee_factors(epsilon: float, monotone: bool, algorithm: int) -> BoundFactors:
    """Weight and utility factors guaranteed by each algorithm.

    Algorithm 1 bounds the weight against its guess; algorithms 2 and 3
    against the true optimum, at an extra ``1/(1-ε)``.
    """
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    if algorithm not in (1, 2, 3):
        raise ConfigError(f"algorithm must be 1, 2 or 3, got {algorithm}")
    alpha = (3 - epsilon) / (2 * epsilon) if monotone else (4 - epsilon) / (3 * epsilon)
    beta = (1 - epsilon) / (2 if monotone else 3)
    if algorithm == 1:
        return BoundFactors(alpha, beta, "guess")
    return BoundFactors(alpha / (1 - epsilon), beta, "optimum")


def check_bicriteria(
    result: KSet,
    exact: ExactSolution,
    factors: BoundFactors,
    tau: float,
    g: UtilityOracle,
    w: WeightTable,
    guess: float | None = None,
) -> BicriteriaVerdict:
    """Measure ``w(result) <= α·ref`` and ``g(result) >= β·τ``.

    ``ref`` is ``guess`` when ``factors.reference == "guess"`` (algorithm 1),
    else ``w(v)`` from ``exact``.
    """
    if not exact.feasible:
        raise PreconditionError("bicriteria check needs a feasible exact solution")
    if factors.reference == "guess":
        if guess is None:
            raise ConfigError("algorithm 1 bounds are relative to the guess; pass guess=")
        ref = guess
    else:
        ref = exact.weight
    return BicriteriaVerdict(
        weight=kset_weight(w, result),
        weight_bound=factors.alpha * ref,
        utility=g(result),
        utility_bound=factors.beta * tau,
    )

