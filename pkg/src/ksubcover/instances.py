"""Instance files and seeded instance generators.

Instances are stored in a line-oriented text format (``.ksc``)::

    ksubcover 1
    kind coverage            # coverage | separable | tabular
    k 2
    monotone true            # optional declaration
    element a 1              # name and weight; file order is the stream order
    element b 2
    # coverage: one shared universe, then cover sets per (element, position)
    universe 1 1 1
    cover a 1 0 1
    cover a 2 0
    cover b 1 2
    cover b 2 1 2

``separable`` instances declare one universe per position
(``universe <pos> <weights...>``) and ``cover`` lines index into the
universe of their position. ``tabular`` instances list every position
vector::

    value 0,0 0
    value 1,0 2.5

A missing ``cover`` line means an empty cover set. ``#`` starts a comment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from os import PathLike
from pathlib import Path

import numpy as np

from . import lattice
from .errors import GenerationError, InstanceError, ParseError
from .kset import WeightTable
from .oracles import (
    CoverageFunction,
    SeparableFunction,
    TabularFunction,
    UtilityOracle,
)
from .verify import verify_ksubmodular, verify_monotone, verify_pairwise_monotone

KINDS = ("coverage", "separable", "tabular")
MAGIC = "ksubcover 1"


@dataclass
class InstanceFile:
    kind: str
    k: int
    names: list[str]
    weights: list[float]
    declared_monotone: bool | None = None
    # coverage: one universe; separable: one per position
    universes: list[list[float]] = field(default_factory=list)
    # covers[(x, i)] -> sorted tuple of universe items
    covers: dict[tuple[int, int], tuple[int, ...]] = field(default_factory=dict)
    table: np.ndarray | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    def weight_table(self) -> WeightTable:
        return WeightTable(self.weights)

    def oracle(self) -> UtilityOracle:
        n, k = self.n, self.k
        if self.kind == "coverage":
            rows = [[self.covers.get((x, i), ()) for i in range(1, k + 1)] for x in range(n)]
            return CoverageFunction(k, self.universes[0], rows)
        if self.kind == "separable":
            parts = [
                (self.universes[i - 1], [self.covers.get((x, i), ()) for x in range(n)])
                for i in range(1, k + 1)
            ]
            return SeparableFunction(n, parts)
        if self.kind == "tabular":
            return TabularFunction(n, k, self.table)
        raise InstanceError(f"unknown instance kind {self.kind!r}")

    def dumps(self) -> str:
        return dump_instance(self)


def _fmt(v: float) -> str:
    v = float(v)
    return str(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)


def dump_instance(inst: InstanceFile) -> str:
    """Serialise deterministically (same instance, same bytes)."""
    out = [MAGIC, f"kind {inst.kind}", f"k {inst.k}"]
    if inst.declared_monotone is not None:
        out.append(f"monotone {'true' if inst.declared_monotone else 'false'}")
    for name, wx in zip(inst.names, inst.weights):
        out.append(f"element {name} {_fmt(wx)}")
    if inst.kind == "coverage":
        out.append("universe " + " ".join(_fmt(u) for u in inst.universes[0]))
    elif inst.kind == "separable":
        for i, uw in enumerate(inst.universes, start=1):
            out.append(f"universe {i} " + " ".join(_fmt(u) for u in uw))
    if inst.kind in ("coverage", "separable"):
        for (x, i), items in sorted(inst.covers.items()):
            out.append(" ".join([f"cover {inst.names[x]} {i}", *map(str, items)]).rstrip())
    else:
        for code, vec in enumerate(itertools.product(range(inst.k + 1), repeat=inst.n)):
            out.append(f"value {','.join(map(str, vec))} {_fmt(inst.table[code])}")
    return "\n".join(out) + "\n"


def write_instance(inst: InstanceFile, path: str | PathLike) -> None:
    Path(path).write_text(dump_instance(inst))


def _num(tok: str, where: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", where) from None


def _int(tok: str, where: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", where) from None


def loads_instance(text: str, source: str = "<string>") -> InstanceFile:
    """Parse and validate instance text; errors carry ``source:line``."""
    kind = k = monotone = None
    names: list[str] = []
    weights: list[float] = []
    index: dict[str, int] = {}
    universe_lines: list[tuple[str, list[str]]] = []
    cover_lines: list[tuple[str, list[str]]] = []
    value_lines: list[tuple[str, list[str]]] = []
    seen_magic = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        where = f"{source}:{lineno}"
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if not seen_magic:
            if line != MAGIC:
                raise ParseError(f"expected header {MAGIC!r}", where)
            seen_magic = True
        elif head == "kind":
            if len(rest) != 1 or rest[0] not in KINDS:
                raise ParseError(f"kind must be one of {', '.join(KINDS)}", where)
            kind = rest[0]
        elif head == "k":
            if len(rest) != 1:
                raise ParseError("usage: k <arity>", where)
            k = _int(rest[0], where)
            if k < 1:
                raise InstanceError(f"{where}: k must be >= 1")
        elif head == "monotone":
            if rest not in (["true"], ["false"]):
                raise ParseError("usage: monotone true|false", where)
            monotone = rest[0] == "true"
        elif head == "element":
            if len(rest) != 2:
                raise ParseError("usage: element <name> <weight>", where)
            name, wx = rest[0], _num(rest[1], where)
            if name in index:
                raise InstanceError(f"{where}: duplicate element name {name!r}")
            if not wx > 0:
                raise InstanceError(f"{where}: weight of {name!r} must be > 0, got {rest[1]}")
            index[name] = len(names)
            names.append(name)
            weights.append(wx)
        elif head == "universe":
            universe_lines.append((where, rest))
        elif head == "cover":
            cover_lines.append((where, rest))
        elif head == "value":
            value_lines.append((where, rest))
        else:
            raise ParseError(f"unknown directive {head!r}", where)

    if not seen_magic:
        raise ParseError("empty file", source)
    if kind is None or k is None:
        raise InstanceError(f"{source}: missing 'kind' or 'k' line")
    inst = InstanceFile(kind, k, names, weights, monotone)
    n = len(names)

    if kind == "coverage":
        if len(universe_lines) != 1:
            raise InstanceError(f"{source}: coverage instances need exactly one 'universe' line")
        where, toks = universe_lines[0]
        inst.universes = [[_num(t, where) for t in toks]]
    elif kind == "separable":
        unis: dict[int, list[float]] = {}
        for where, toks in universe_lines:
            if not toks:
                raise ParseError("usage: universe <position> <weights...>", where)
            i = _int(toks[0], where)
            if not 1 <= i <= k or i in unis:
                raise InstanceError(f"{where}: bad or repeated universe position {i}")
            unis[i] = [_num(t, where) for t in toks[1:]]
        if set(unis) != set(range(1, k + 1)):
            raise InstanceError(f"{source}: separable instances need a universe for each position 1..{k}")
        inst.universes = [unis[i] for i in range(1, k + 1)]
    elif universe_lines or cover_lines:
        raise InstanceError(f"{source}: tabular instances take no universe/cover lines")

    for uw in inst.universes:
        if any(u < 0 for u in uw):
            raise InstanceError(f"{source}: universe weights must be >= 0")

    for where, toks in cover_lines:
        if len(toks) < 2:
            raise ParseError("usage: cover <element> <position> <items...>", where)
        if toks[0] not in index:
            raise InstanceError(f"{where}: unknown element {toks[0]!r}")
        x, i = index[toks[0]], _int(toks[1], where)
        if not 1 <= i <= k:
            raise InstanceError(f"{where}: position {i} outside 1..{k}")
        if (x, i) in inst.covers:
            raise InstanceError(f"{where}: repeated cover for ({toks[0]}, {i})")
        m = len(inst.universes[0] if kind == "coverage" else inst.universes[i - 1])
        items = tuple(sorted({_int(t, where) for t in toks[2:]}))
        if any(not 0 <= u < m for u in items):
            raise InstanceError(f"{where}: universe item out of range 0..{m - 1}")
        inst.covers[(x, i)] = items

    if kind == "tabular":
        lattice.check_budget(n, k)
        table = np.full(lattice.num_ksets(n, k), np.nan)
        for where, toks in value_lines:
            if len(toks) != 2:
                raise ParseError("usage: value <p1,...,pn> <value>", where)
            vec = tuple(_int(t, where) for t in toks[0].split(",")) if n else ()
            if len(vec) != n or any(not 0 <= p <= k for p in vec):
                raise InstanceError(f"{where}: position vector must have {n} entries in 0..{k}")
            code = lattice.encode(vec, k)
            if not np.isnan(table[code]):
                raise InstanceError(f"{where}: repeated table entry {toks[0]}")
            val = _num(toks[1], where)
            if val < 0:
                raise InstanceError(f"{where}: table values must be >= 0")
            table[code] = val
        if np.isnan(table).any():
            missing = lattice.decode(int(np.flatnonzero(np.isnan(table))[0]), n, k)
            raise InstanceError(f"{source}: table entry missing for vector {','.join(map(str, missing))}")
        if table[0] != 0:
            raise InstanceError(f"{source}: table value of the empty k-set must be 0")
        inst.table = table
    elif value_lines:
        raise InstanceError(f"{value_lines[0][0]}: 'value' lines only allowed in tabular instances")
    return inst


def read_instance(path: str | PathLike) -> InstanceFile:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    return loads_instance(text, str(path))


def parse_instance(path: str | PathLike) -> tuple[UtilityOracle, WeightTable, InstanceFile]:
    """Read a file and build its oracle and weight table."""
    inst = read_instance(path)
    return inst.oracle(), inst.weight_table(), inst


# -- generators ---------------------------------------------------------------


def _names(n: int) -> list[str]:
    return [f"e{x}" for x in range(n)]


def _random_covers(rng, m: int, density: float) -> tuple[int, ...]:
    if density >= 1:
        return tuple(range(m))
    return tuple(int(u) for u in np.flatnonzero(rng.random(m) < density))


def generate_coverage(
    seed: int, n: int, k: int, universe_size: int, density: float, max_weight: int = 4
) -> InstanceFile:
    """Random weighted coverage instance; integer weights keep sums exact."""
    if not 0 < density <= 1:
        raise InstanceError(f"density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    weights = [float(v) for v in rng.integers(1, max_weight + 1, size=n)]
    universe = [float(v) for v in rng.integers(1, 4, size=universe_size)]
    covers = {(x, i): _random_covers(rng, universe_size, density) for x in range(n) for i in range(1, k + 1)}
    return InstanceFile("coverage", k, _names(n), weights, True, [universe], covers)


def generate_separable(
    seed: int, n: int, k: int, universe_size: int, density: float, max_weight: int = 4
) -> InstanceFile:
    """Random ``sum_i f_i(S_i)`` instance, each ``f_i`` a coverage function."""
    if not 0 < density <= 1:
        raise InstanceError(f"density must lie in (0, 1], got {density}")
    rng = np.random.default_rng(seed)
    weights = [float(v) for v in rng.integers(1, max_weight + 1, size=n)]
    universes = [[float(v) for v in rng.integers(1, 4, size=universe_size)] for _ in range(k)]
    covers = {(x, i): _random_covers(rng, universe_size, density) for i in range(1, k + 1) for x in range(n)}
    return InstanceFile("separable", k, _names(n), weights, True, universes, covers)


def _candidate_table(rng, n: int, k: int) -> np.ndarray:
    """Coverage plus a signed per-pair modular term, on a 1/4 grid, sometimes with noise.

    Per element at most one position gets a negative modular term and the
    others get at least its magnitude, so the modular part alone satisfies
    pairwise monotonicity; the noise usually does not survive verification.
    """
    m = max(2, n)
    cov = CoverageFunction(
        k,
        rng.integers(1, 4, size=m).astype(float),
        [[tuple(np.flatnonzero(rng.random(m) < 0.4)) for _ in range(k)] for _ in range(n)],
    )
    table = cov.value_table()
    digits = lattice.all_vectors(n, k)
    for x in range(n):
        neg = int(rng.integers(1, k + 1))
        drop = int(rng.integers(0, 9))
        col = digits[:, x]
        for i in range(1, k + 1):
            c = -drop if i == neg else drop + int(rng.integers(0, 3))
            table[col == i] += c / 4.0
    if rng.random() < 0.25:
        bump = rng.random(table.size) < 0.05
        table[bump] += rng.integers(1, 3, size=int(bump.sum())) / 4.0
    table[0] = 0.0
    return table


def generate_nonmonotone_tabular(seed: int, n: int, k: int, max_attempts: int = 1000) -> InstanceFile:
    """Rejection-sample a non-negative, normalized, non-monotone k-submodular table.

    A candidate is kept only if the exhaustive verifiers confirm
    k-submodularity and pairwise monotonicity and find a monotonicity
    witness.
    """
    lattice.check_budget(n, k)
    rng = np.random.default_rng(seed)
    weights = [float(v) for v in rng.integers(1, 5, size=n)]
    for _ in range(max_attempts):
        table = _candidate_table(rng, n, k)
        if np.any(table < 0):
            continue
        g = TabularFunction(n, k, table)
        if verify_monotone(g).ok:
            continue
        if verify_ksubmodular(g).ok and verify_pairwise_monotone(g).ok:
            return InstanceFile("tabular", k, _names(n), weights, False, table=g.table.copy())
    raise GenerationError(f"no non-monotone k-submodular table found in {max_attempts} attempts (n={n}, k={k}, seed={seed})")


def perturbed_table(inst: InstanceFile, seed: int, magnitude: float = 100.0) -> InstanceFile:
    """Copy of ``inst`` as a table with one non-empty entry raised by ``magnitude``.

    For ``n >= 2`` and ``k >= 2`` the raised entry always breaks k-submodularity.
    """
    rng = np.random.default_rng(seed)
    table = inst.oracle().value_table()
    code = int(rng.integers(1, table.size))
    table[code] += magnitude
    return InstanceFile("tabular", inst.k, list(inst.names), list(inst.weights), None, table=table)
