"""k-sets: partial assignments of ground-set elements to positions 1..k.

A k-set ``(S_1, ..., S_k)`` is stored as a map ``element -> position``.
Elements that are absent sit at position 0, so disjointness of the parts
is structural rather than checked.
"""

from __future__ import annotations

import math
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import ConfigError, InstanceError, PreconditionError


class KSet:
    """Immutable k-set over ground set ``{0, ..., n-1}``."""

    __slots__ = ("_assign", "_k", "_hash")

    def __init__(self, k: int, pairs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if k < 1:
            raise ConfigError(f"arity k must be >= 1, got {k}")
        assign: dict[int, int] = {}
        items = pairs.items() if isinstance(pairs, Mapping) else pairs
        for x, i in items:
            if not 1 <= i <= k:
                raise ConfigError(f"position {i} for element {x} outside 1..{k}")
            if x in assign:
                raise PreconditionError(f"element {x} assigned twice")
            assign[x] = i
        self._assign = assign
        self._k = k
        self._hash: int | None = None

    @classmethod
    def empty(cls, k: int) -> KSet:
        return cls(k)

    @classmethod
    def from_vector(cls, vector: Sequence[int], k: int) -> KSet:
        """Build from a position vector, ``vector[x]`` in 0..k (0 = unassigned)."""
        return cls(k, ((x, int(i)) for x, i in enumerate(vector) if i))

    @property
    def k(self) -> int:
        return self._k

    def position(self, x: int) -> int:
        """Position of ``x``, 0 when unassigned."""
        return self._assign.get(x, 0)

    def pairs(self) -> list[tuple[int, int]]:
        """Assigned ``(element, position)`` pairs sorted by element."""
        return sorted(self._assign.items())

    def to_vector(self, n: int) -> tuple[int, ...]:
        return tuple(self._assign.get(x, 0) for x in range(n))

    def part(self, i: int) -> frozenset[int]:
        """The set ``S_i``."""
        return frozenset(x for x, p in self._assign.items() if p == i)

    def __len__(self) -> int:
        return len(self._assign)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs())

    def __contains__(self, x: object) -> bool:
        return x in self._assign

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KSet):
            return NotImplemented
        return self._k == other._k and self._assign == other._assign

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._k, frozenset(self._assign.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"({x},{i})" for x, i in self.pairs())
        return f"KSet(k={self._k}, {{{body}}})"


def _check_arity(s: KSet, t: KSet) -> None:
    if s.k != t.k:
        raise ConfigError(f"arity mismatch: {s.k} vs {t.k}")


def meet(s: KSet, t: KSet) -> KSet:
    """Coordinate-wise intersection: keep ``x`` only where both agree on its position."""
    _check_arity(s, t)
    return KSet(s.k, ((x, i) for x, i in s._assign.items() if t._assign.get(x) == i))


def join(s: KSet, t: KSet) -> KSet:
    """Coordinate-wise union with cross-coordinate conflicts dropped.

    ``x`` lands in part ``i`` iff it is in ``S_i ∪ T_i`` and in no other
    ``S_j ∪ T_j``; an element placed at two different positions vanishes.
    """
    _check_arity(s, t)
    out = dict(s._assign)
    for x, i in t._assign.items():
        j = out.get(x)
        if j is None:
            out[x] = i
        elif j != i:
            out[x] = 0
    return KSet(s.k, ((x, i) for x, i in out.items() if i))


def insert(s: KSet, x: int, i: int) -> KSet:
    """Return ``s ⊔ (x, i)``; ``x`` must be unassigned in ``s``."""
    if x in s._assign:
        raise PreconditionError(f"element {x} already assigned to position {s._assign[x]}")
    if not 1 <= i <= s.k:
        raise ConfigError(f"position {i} outside 1..{s.k}")
    new = KSet.__new__(KSet)
    new._assign = {**s._assign, x: i}
    new._k = s.k
    new._hash = None
    return new


def precedes(s: KSet, t: KSet) -> bool:
    """Partial order: every pair of ``s`` also appears in ``t``."""
    _check_arity(s, t)
    return all(t._assign.get(x) == i for x, i in s._assign.items())


def support(s: KSet) -> frozenset[int]:
    return frozenset(s._assign)


class WeightTable:
    """Strictly positive per-element costs, indexed by element id."""

    def __init__(self, weights: Sequence[float] | Mapping[int, float]):
        if isinstance(weights, Mapping):
            n = len(weights)
            if set(weights) != set(range(n)):
                raise InstanceError("weight map keys must be 0..n-1")
            values = [weights[x] for x in range(n)]
        else:
            values = list(weights)
        for x, wx in enumerate(values):
            if not wx > 0:
                raise InstanceError(f"weight of element {x} must be > 0, got {wx}")
        self._w = [float(v) for v in values]

    def __getitem__(self, x: int) -> float:
        try:
            return self._w[x]
        except IndexError:
            raise InstanceError(f"no weight for element {x}") from None

    def __len__(self) -> int:
        return len(self._w)

    def as_list(self) -> list[float]:
        return list(self._w)

    def __repr__(self) -> str:
        return f"WeightTable({self._w})"


def kset_weight(w: WeightTable, s: KSet) -> float:
    """Total cost of the elements of ``s``, correctly rounded (order independent)."""
    return math.fsum(w[x] for x in s._assign)
