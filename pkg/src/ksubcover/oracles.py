"""Value oracles for k-submodular utility functions.

Every oracle maps a :class:`~ksubcover.kset.KSet` to a non-negative float
with ``g(0) = 0``. Three concrete families ship here:

* :class:`CoverageFunction` -- each pair ``(x, i)`` covers a subset of a
  weighted universe and ``g`` is the covered weight (monotone).
* :class:`SeparableFunction` -- ``g(s) = sum_i f_i(S_i)`` with each ``f_i`` a
  weighted coverage set function (monotone).
* :class:`TabularFunction` -- an explicit value per k-set, used for
  non-monotone and deliberately broken test functions.

:class:`CountingOracle` wraps any of them and counts queries.
"""

from __future__ import annotations

import itertools
import threading
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from . import lattice
from .errors import ConfigError, InstanceError, PreconditionError
from .kset import KSet, insert


class UtilityOracle:
    """Base class. Subclasses implement :meth:`_eval_pairs`."""

    def __init__(self, n: int, k: int):
        if n < 0 or k < 1:
            raise ConfigError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
        self.n = n
        self.k = k

    def _eval_pairs(self, pairs: Iterable[tuple[int, int]]) -> float:
        raise NotImplementedError

    def eval(self, s: KSet) -> float:
        if s.k != self.k:
            raise ConfigError(f"k-set arity {s.k} does not match oracle arity {self.k}")
        pairs = s.pairs()
        if pairs and pairs[-1][0] >= self.n:
            raise ConfigError(f"element {pairs[-1][0]} outside ground set of size {self.n}")
        return self._eval_pairs(pairs)

    __call__ = eval

    def eval_vector(self, vector: Sequence[int]) -> float:
        """Evaluate on a position vector of length ``n`` (no arity checks)."""
        return self._eval_pairs((x, int(i)) for x, i in enumerate(vector) if i)

    def value_table(self) -> np.ndarray:
        """``g`` on every k-set, indexed by lattice code."""
        lattice.check_budget(self.n, self.k)
        return np.fromiter(
            (self.eval_vector(v) for v in itertools.product(range(self.k + 1), repeat=self.n)),
            dtype=float,
            count=lattice.num_ksets(self.n, self.k),
        )


def _coverage_masks(covers, n_items: int, where: str) -> int:
    mask = 0
    for u in covers:
        if not 0 <= u < n_items:
            raise InstanceError(f"{where}: universe item {u} out of range 0..{n_items - 1}")
        mask |= 1 << u
    return mask


class _MaskWeigher:
    """Weight of a bitmask over a weighted universe, memoised."""

    def __init__(self, universe_weights: Sequence[float]):
        ws = [float(v) for v in universe_weights]
        for u, v in enumerate(ws):
            if v < 0:
                raise InstanceError(f"universe item {u} has negative weight {v}")
        self.weights = ws
        self._cache: dict[int, float] = {0: 0.0}

    def __call__(self, mask: int) -> float:
        val = self._cache.get(mask)
        if val is None:
            val = 0.0
            m, u = mask, 0
            while m:
                if m & 1:
                    val += self.weights[u]
                m >>= 1
                u += 1
            self._cache[mask] = val
        return val


class CoverageFunction(UtilityOracle):
    """``g(s)`` = total weight of the union of ``covers[(x, i)]`` over pairs of ``s``.

    Parameters
    ----------
    universe_weights
        Non-negative weight per universe item; items are ``0..m-1``.
    covers
        ``covers[x][i-1]`` is the iterable of items covered by pair ``(x, i)``.
    """

    def __init__(self, k: int, universe_weights: Sequence[float], covers: Sequence[Sequence[Iterable[int]]]):
        super().__init__(len(covers), k)
        self._weigh = _MaskWeigher(universe_weights)
        m = len(self._weigh.weights)
        masks = []
        for x, row in enumerate(covers):
            row = list(row)
            if len(row) != k:
                raise InstanceError(f"element {x}: expected {k} cover sets, got {len(row)}")
            masks.append([_coverage_masks(c, m, f"cover({x},{i + 1})") for i, c in enumerate(row)])
        self._masks = masks

    @property
    def universe_weights(self) -> list[float]:
        return list(self._weigh.weights)

    def cover(self, x: int, i: int) -> frozenset[int]:
        mask = self._masks[x][i - 1]
        return frozenset(u for u in range(mask.bit_length()) if mask >> u & 1)

    def _eval_pairs(self, pairs):
        mask = 0
        for x, i in pairs:
            mask |= self._masks[x][i - 1]
        return self._weigh(mask)


class SeparableFunction(UtilityOracle):
    """``g(s) = sum_i f_i(S_i)``, each ``f_i`` a weighted coverage set function.

    ``parts[i-1]`` is a pair ``(universe_weights, covers)`` with ``covers[x]``
    the items element ``x`` covers when placed at position ``i``.
    """

    def __init__(self, n: int, parts: Sequence[tuple[Sequence[float], Sequence[Iterable[int]]]]):
        super().__init__(n, len(parts))
        self._weighers = []
        self._masks = []
        for i, (uw, covers) in enumerate(parts, start=1):
            weigh = _MaskWeigher(uw)
            covers = list(covers)
            if len(covers) != n:
                raise InstanceError(f"position {i}: expected covers for {n} elements, got {len(covers)}")
            m = len(weigh.weights)
            self._weighers.append(weigh)
            self._masks.append([_coverage_masks(c, m, f"position {i}, element {x}") for x, c in enumerate(covers)])

    def _eval_pairs(self, pairs):
        acc = [0] * self.k
        for x, i in pairs:
            acc[i - 1] |= self._masks[i - 1][x]
        return sum(weigh(m) for weigh, m in zip(self._weighers, acc))


class TabularFunction(UtilityOracle):
    """Explicit value for each of the ``(k+1)**n`` k-sets, indexed by lattice code."""

    def __init__(self, n: int, k: int, values: Sequence[float] | np.ndarray):
        super().__init__(n, k)
        lattice.check_budget(n, k)
        table = np.asarray(values, dtype=float).copy()
        if table.shape != (lattice.num_ksets(n, k),):
            raise InstanceError(f"table needs {lattice.num_ksets(n, k)} entries, got {table.shape}")
        if table[0] != 0.0:
            raise InstanceError(f"table entry for the empty k-set must be 0, got {table[0]}")
        if np.any(table < 0) or not np.all(np.isfinite(table)):
            raise InstanceError("table values must be finite and non-negative")
        table.flags.writeable = False
        self.table = table
        self._pv = [int(p) for p in lattice.place_values(n, k)]

    @classmethod
    def from_oracle(cls, oracle: UtilityOracle) -> TabularFunction:
        return cls(oracle.n, oracle.k, oracle.value_table())

    @classmethod
    def from_mapping(cls, n: int, k: int, entries: Mapping[tuple[int, ...], float]) -> TabularFunction:
        values = np.full(lattice.num_ksets(n, k), np.nan)
        for vec, val in entries.items():
            values[lattice.encode(vec, k)] = val
        if np.isnan(values).any():
            missing = lattice.decode(int(np.flatnonzero(np.isnan(values))[0]), n, k)
            raise InstanceError(f"table has no entry for position vector {missing}")
        return cls(n, k, values)

    def _eval_pairs(self, pairs):
        pv = self._pv
        return float(self.table[sum(pv[x] * i for x, i in pairs)])

    def value_table(self) -> np.ndarray:
        return self.table.copy()


class CountingOracle(UtilityOracle):
    """Forwards every query to ``inner`` and counts it."""

    def __init__(self, inner: UtilityOracle):
        super().__init__(inner.n, inner.k)
        self.inner = inner
        self.queries = 0
        self._lock = threading.Lock()

    def _eval_pairs(self, pairs):
        with self._lock:
            self.queries += 1
        return self.inner._eval_pairs(pairs)

    def value_table(self) -> np.ndarray:
        table = self.inner.value_table()
        with self._lock:
            self.queries += table.size
        return table

    def reset(self) -> int:
        """Zero the counter, returning the old value."""
        with self._lock:
            old, self.queries = self.queries, 0
        return old


def unwrap(oracle: UtilityOracle) -> UtilityOracle:
    while isinstance(oracle, CountingOracle):
        oracle = oracle.inner
    return oracle


class Marginal(NamedTuple):
    position: int
    gain: float
    value: float  # g(s ⊔ (x, position))


def marginal_gain(oracle: UtilityOracle, s: KSet, x: int, i: int) -> float:
    """``g(s ⊔ (x, i)) - g(s)``; two queries."""
    if x in s:
        raise PreconditionError(f"element {x} already in the k-set")
    return oracle(insert(s, x, i)) - oracle(s)


def best_singleton(oracle: UtilityOracle, x: int) -> tuple[int, float]:
    """Position maximising ``g((x, i))`` (smallest index on ties) and its value; k queries."""
    best_i, best_v = 1, -np.inf
    for i in range(1, oracle.k + 1):
        v = oracle(KSet(oracle.k, ((x, i),)))
        if v > best_v:
            best_i, best_v = i, v
    return best_i, best_v


def best_marginal(oracle: UtilityOracle, s: KSet, x: int, base: float | None = None) -> Marginal:
    """Position maximising the marginal gain of ``x`` at ``s`` (smallest index on ties).

    Pass ``base = g(s)`` when it is already known; then exactly k queries are
    made. Otherwise ``g(s)`` costs one more query unless ``s`` is empty.
    """
    if x in s:
        raise PreconditionError(f"element {x} already in the k-set")
    if base is None:
        base = 0.0 if len(s) == 0 else oracle(s)
    best = None
    for i in range(1, oracle.k + 1):
        v = oracle(insert(s, x, i))
        if best is None or v - base > best.gain:
            best = Marginal(i, v - base, v)
    return best
