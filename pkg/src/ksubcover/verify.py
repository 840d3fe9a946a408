"""Exhaustive checks of the structural properties of a utility oracle.

Each verifier tabulates ``g`` once over all ``(k+1)**n`` k-sets and then
works on lattice codes with numpy; meet and join are computed digit-wise
here, independently of :mod:`ksubcover.kset`.

An inequality ``lhs >= rhs`` counts as violated only when
``lhs - rhs < -TOLERANCE``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lattice
from .errors import BudgetExceededError, PreconditionError
from .kset import KSet, insert, precedes
from .oracles import UtilityOracle

TOLERANCE = 1e-9

#: Cap on the number of (s, t) pairs a pairwise verifier will enumerate.
MAX_PAIRS = 5 * 10**7


@dataclass
class Violation:
    s: tuple[int, ...]
    t: tuple[int, ...] | None
    slack: float
    element: int | None = None
    positions: tuple[int, ...] = ()


@dataclass
class VerifierReport:
    prop: str
    n: int
    k: int
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def summary(self) -> str:
        verdict = "ok" if self.ok else f"{len(self.violations)} violation(s)"
        return f"{self.prop} (n={self.n}, k={self.k}): {self.checked} checks, {verdict}"


def _setup(oracle: UtilityOracle, n: int | None, k: int | None):
    n = oracle.n if n is None else n
    k = oracle.k if k is None else k
    if (n, k) != (oracle.n, oracle.k):
        raise PreconditionError(f"declared (n={n}, k={k}) differs from oracle (n={oracle.n}, k={oracle.k})")
    lattice.check_budget(n, k)
    return n, k, oracle.value_table(), lattice.all_vectors(n, k), lattice.place_values(n, k)


def _vec(code, n, k):
    return lattice.decode(int(code), n, k)


def verify_ksubmodular(
    oracle: UtilityOracle, n: int | None = None, k: int | None = None, max_pairs: int = MAX_PAIRS
) -> VerifierReport:
    """``g(s) + g(t) >= g(s ⊓ t) + g(s ⊔ t)`` over all unordered pairs."""
    n, k, vals, digits, pv = _setup(oracle, n, k)
    total = len(vals)
    if total * total > max_pairs:
        raise BudgetExceededError(f"{total}^2 pairs exceeds the pair budget {max_pairs}")
    report = VerifierReport("k-submodular", n, k)
    t_dig = digits.astype(np.int64)[None, :, :]
    chunk = max(1, 2_000_000 // max(1, total * max(n, 1)))
    for start in range(0, total, chunk):
        stop = min(total, start + chunk)
        s_dig = digits[start:stop].astype(np.int64)[:, None, :]
        same = s_dig == t_dig
        meet = np.where(same, s_dig, 0)
        join = np.where(s_dig == 0, t_dig, np.where((t_dig == 0) | same, s_dig, 0))
        meet_c = meet @ pv
        join_c = join @ pv
        s_idx = np.arange(start, stop)[:, None]
        t_idx = np.arange(total)[None, :]
        slack = vals[s_idx] + vals[t_idx] - vals[meet_c] - vals[join_c]
        upper = t_idx >= s_idx
        report.checked += int(upper.sum())
        bad = np.argwhere((slack < -TOLERANCE) & upper)
        for a, b in bad:
            report.violations.append(
                Violation(_vec(start + a, n, k), _vec(b, n, k), float(slack[a, b]))
            )
    return report


def _single_step(vals, digits, pv, k):
    """``D[c, x, i-1] = g(c with x at i) - g(c)``, NaN where ``x`` is assigned in ``c``."""
    total, n = digits.shape
    codes = np.arange(total)
    out = np.full((total, n, k), np.nan)
    for x in range(n):
        free = digits[:, x] == 0
        for i in range(1, k + 1):
            out[free, x, i - 1] = vals[codes[free] + i * pv[x]] - vals[free]
    return out


def verify_orthant_submodular(oracle: UtilityOracle, n: int | None = None, k: int | None = None) -> VerifierReport:
    """``Δ_{x,i} g(s) >= Δ_{x,i} g(t)`` for all ``s ⊑ t`` and ``x ∉ E(t)``."""
    n, k, vals, digits, pv = _setup(oracle, n, k)
    report = VerifierReport("orthant-submodular", n, k)
    gains = _single_step(vals, digits, pv, k)
    s_codes, t_codes = lattice.comparable_pairs(n, k)
    for x in range(n):
        free = digits[t_codes, x] == 0
        sc, tc = s_codes[free], t_codes[free]
        for i in range(1, k + 1):
            slack = gains[sc, x, i - 1] - gains[tc, x, i - 1]
            report.checked += len(slack)
            for j in np.flatnonzero(slack < -TOLERANCE):
                report.violations.append(
                    Violation(_vec(sc[j], n, k), _vec(tc[j], n, k), float(slack[j]), x, (i,))
                )
    return report


def verify_pairwise_monotone(oracle: UtilityOracle, n: int | None = None, k: int | None = None) -> VerifierReport:
    """``Δ_{x,i} g(s) + Δ_{x,j} g(s) >= 0`` for all ``x ∉ E(s)`` and ``i != j``."""
    n, k, vals, digits, pv = _setup(oracle, n, k)
    report = VerifierReport("pairwise-monotone", n, k)
    gains = _single_step(vals, digits, pv, k)
    for x in range(n):
        free = np.flatnonzero(digits[:, x] == 0)
        for i in range(1, k + 1):
            for j in range(i + 1, k + 1):
                slack = gains[free, x, i - 1] + gains[free, x, j - 1]
                report.checked += len(slack)
                for a in np.flatnonzero(slack < -TOLERANCE):
                    report.violations.append(
                        Violation(_vec(free[a], n, k), None, float(slack[a]), x, (i, j))
                    )
    return report


def verify_monotone(oracle: UtilityOracle, n: int | None = None, k: int | None = None) -> VerifierReport:
    """``g(s) <= g(t)`` for all ``s ⊑ t``; violations are witness pairs."""
    n, k, vals, _, _ = _setup(oracle, n, k)
    report = VerifierReport("monotone", n, k)
    s_codes, t_codes = lattice.comparable_pairs(n, k)
    slack = vals[t_codes] - vals[s_codes]
    report.checked = len(slack)
    for j in np.flatnonzero(slack < -TOLERANCE):
        report.violations.append(Violation(_vec(s_codes[j], n, k), _vec(t_codes[j], n, k), float(slack[j])))
    return report


def verify_all(oracle: UtilityOracle) -> dict[str, VerifierReport]:
    return {
        "k-submodular": verify_ksubmodular(oracle),
        "orthant-submodular": verify_orthant_submodular(oracle),
        "pairwise-monotone": verify_pairwise_monotone(oracle),
        "monotone": verify_monotone(oracle),
    }


def check_marginal_bound(oracle: UtilityOracle, s: KSet, t: KSet) -> bool:
    """Check ``g(t) <= g(s) + sum over x in E(t)\\E(s) of Δ_{x,t(x)} g(s)`` for ``s ⊑ t``.

    Uses direct oracle queries, not the tabulated lattice.
    """
    if not precedes(s, t):
        raise PreconditionError("check_marginal_bound requires s ⊑ t")
    base = oracle(s)
    bound = base
    for x, i in t.pairs():
        if x not in s:
            bound += oracle(insert(s, x, i)) - base
    return oracle(t) <= bound + TOLERANCE
