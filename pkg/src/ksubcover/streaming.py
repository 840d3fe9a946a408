"""Streaming threshold-greedy solvers for weighted k-submodular cover.

* :func:`algorithm1` -- one pass, given a guess ``w̄ >= w(v)`` of the optimal cost.
* :func:`algorithm2` -- two passes; the first finds the weight range, the second
  runs one threshold instance per rung of a geometric guess ladder.
* :func:`algorithm3` -- one pass with an upper bound ``B``; the ladder grows
  downward as a lower bound ``L`` falls and is truncated from above at ``U``.

All threshold tests are exact float comparisons. Ties in ``argmax`` go to the
smallest position.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Literal

from .errors import ConfigError, InfeasibleError, InstanceError
from .kset import KSet, WeightTable, insert, kset_weight
from .oracles import CountingOracle, UtilityOracle, best_marginal, best_singleton

Branch = Literal["big", "insert", "skip"]
Selection = Literal["default", "max-utility"]


@dataclass(frozen=True)
class ProblemConfig:
    tau: float
    epsilon: float
    monotone: bool = True
    upper_bound_B: float | None = None
    guessed_opt: float | None = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.tau > 0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if self.upper_bound_B is not None and not self.upper_bound_B > 0:
            raise ConfigError(f"upper bound B must be > 0, got {self.upper_bound_B}")
        if self.guessed_opt is not None and not self.guessed_opt > 0:
            raise ConfigError(f"guessed optimum must be > 0, got {self.guessed_opt}")

    @property
    def r(self) -> int:
        return 2 if self.monotone else 3

    @property
    def utility_bar(self) -> float:
        """Minimum utility a candidate must reach: ``(1 - ε) τ / r``."""
        return (1 - self.epsilon) * self.tau / self.r

    def budget_factor(self) -> float:
        """``A / guess``: ``(3-ε)/(2ε)`` if monotone, else ``(4-ε)/(3ε)``."""
        eps = self.epsilon
        return (3 - eps) / (2 * eps) if self.monotone else (4 - eps) / (3 * eps)


@dataclass
class ThresholdState:
    """Running state of one threshold-greedy instance."""

    solution: KSet
    theta: float
    budget_A: float
    guess: float
    weight_so_far: float = 0.0
    utility: float = 0.0  # cached g(solution); g(0) = 0
    found_big: bool = False
    gains: list[float] = field(default_factory=list)


@dataclass
class TraceRecord:
    element: int
    guess: float
    branch: Branch
    position: int
    gain: float
    weight: float


@dataclass
class StreamStats:
    w_min: float = math.inf
    w_max: float = 0.0
    kappa: float = 0.0
    elements_seen: int = 0
    peak_stored_pairs: int = 0
    oracle_queries: int = 0
    live_instances_max: int = 0
    queries_per_element: list[int] = field(default_factory=list)
    live_per_element: list[int] = field(default_factory=list)

    @property
    def gamma(self) -> float:
        return self.w_min / self.w_max if self.w_max > 0 else math.nan

    def observe(self, wx: float, singleton_value: float) -> None:
        self.elements_seen += 1
        self.w_min = min(self.w_min, wx)
        self.w_max = max(self.w_max, wx)
        self.kappa = max(self.kappa, singleton_value / wx)


@dataclass
class Candidate:
    index: int
    guess: float
    solution: KSet
    weight: float
    utility: float
    qualifies: bool


@dataclass
class SolverResult:
    algorithm: int
    solution: KSet
    weight: float
    utility: float
    stats: StreamStats
    candidates: list[Candidate] = field(default_factory=list)
    selected: int | None = None
    ladder: list[float] = field(default_factory=list)
    trace: list[TraceRecord] | None = None

    def __iter__(self):
        # allows ``solution, stats = algorithm1(...)``
        return iter((self.solution, self.stats))


def make_threshold_state(cfg: ProblemConfig, guess: float, k: int = 1) -> ThresholdState:
    if not guess > 0:
        raise ConfigError(f"guess must be > 0, got {guess}")
    return ThresholdState(
        solution=KSet.empty(k),
        theta=cfg.epsilon * cfg.tau / guess,
        budget_A=cfg.budget_factor() * guess,
        guess=guess,
    )


def process_element(
    state: ThresholdState,
    cfg: ProblemConfig,
    g: UtilityOracle,
    w: WeightTable,
    x: int,
    singleton: tuple[int, float] | None = None,
    trace: list[TraceRecord] | None = None,
) -> ThresholdState:
    """Feed one element to a threshold instance, updating ``state`` in place.

    ``singleton`` is ``best_singleton(g, x)`` when the caller already has it;
    otherwise it is computed here (k queries). At most k further queries are
    made for the marginal step.
    """
    if x in state.solution:
        raise InstanceError(f"element {x} arrived twice")
    wx = w[x]
    if singleton is None:
        singleton = best_singleton(g, x)
    pos, value = singleton
    if wx <= state.budget_A and value >= cfg.tau:
        state.solution = KSet(g.k, ((x, pos),))
        state.weight_so_far = kset_weight(w, state.solution)
        state.utility = value
        state.found_big = True
        branch, gain = "big", value
    else:
        if len(state.solution) == 0 and state.solution.k != g.k:
            state.solution = KSet.empty(g.k)
        pos, gain, new_value = best_marginal(g, state.solution, x, base=state.utility)
        branch = "skip"
        if gain / wx >= state.theta:
            candidate = insert(state.solution, x, pos)
            new_weight = kset_weight(w, candidate)
            if new_weight <= state.budget_A:
                state.solution = candidate
                state.weight_so_far = new_weight
                state.utility = new_value
                state.gains.append(gain)
                branch = "insert"
    if trace is not None:
        trace.append(TraceRecord(x, state.guess, branch, pos, gain, state.weight_so_far))
    return state


def _checked_stream(stream: Iterable[int], n: int) -> Iterator[int]:
    seen: set[int] = set()
    for x in stream:
        if not 0 <= x < n:
            raise InstanceError(f"stream element {x} outside ground set 0..{n - 1}")
        if x in seen:
            raise InstanceError(f"element {x} appears twice in the stream")
        seen.add(x)
        yield x


def _counting(g: UtilityOracle) -> CountingOracle:
    return g if isinstance(g, CountingOracle) else CountingOracle(g)


def algorithm1(
    stream: Iterable[int],
    cfg: ProblemConfig,
    g: UtilityOracle,
    w: WeightTable,
    trace: bool = False,
) -> SolverResult:
    """Single threshold instance driven by ``cfg.guessed_opt``."""
    if cfg.guessed_opt is None:
        raise ConfigError("algorithm 1 needs a guessed optimum (guessed_opt)")
    counter = _counting(g)
    q0 = counter.queries
    stats = StreamStats()
    records: list[TraceRecord] | None = [] if trace else None
    state = make_threshold_state(cfg, cfg.guessed_opt, g.k)
    for x in _checked_stream(stream, g.n):
        before = counter.queries
        single = best_singleton(counter, x)
        stats.observe(w[x], single[1])
        process_element(state, cfg, counter, w, x, single, records)
        stats.peak_stored_pairs = max(stats.peak_stored_pairs, len(state.solution))
        stats.live_instances_max = 1
        stats.queries_per_element.append(counter.queries - before)
        stats.live_per_element.append(1)
    stats.oracle_queries = counter.queries - q0
    return SolverResult(
        algorithm=1,
        solution=state.solution,
        weight=state.weight_so_far,
        utility=state.utility,
        stats=stats,
        ladder=[cfg.guessed_opt],
        trace=records,
    )


def weight_extremes(stream: Iterable[int], w: WeightTable) -> tuple[float, float]:
    w_min, w_max, seen = math.inf, -math.inf, False
    for x in stream:
        seen = True
        wx = w[x]
        w_min = min(w_min, wx)
        w_max = max(w_max, wx)
    if not seen:
        raise InstanceError("cannot take weight extremes of an empty stream")
    return w_min, w_max


def ladder_value(base: float, epsilon: float, j: int) -> float:
    """Rung ``j`` of a guess ladder: ``(1 - ε)^j · base``."""
    return base * (1 - epsilon) ** j


def build_guess_set(w_min: float, w_max: float, n: int, epsilon: float) -> list[float]:
    """Rungs ``(1-ε)^j · n · w_max`` from ``j = 0`` down to the first one ``<= w_min``."""
    if not 0 < w_min <= w_max:
        raise ConfigError(f"need 0 < w_min <= w_max, got {w_min}, {w_max}")
    if n < 1:
        raise ConfigError("ladder needs n >= 1")
    if not 0 < epsilon < 1:
        raise ConfigError(f"epsilon must lie in (0, 1), got {epsilon}")
    base = n * w_max
    rungs = []
    j = 0
    while True:
        lam = ladder_value(base, epsilon, j)
        rungs.append(lam)
        if lam <= w_min:
            return rungs
        j += 1


def _select(cands: list[Candidate], mode: Selection) -> Candidate | None:
    qualifying = [c for c in cands if c.qualifies]
    if not qualifying:
        return None
    if mode == "max-utility":
        return min(qualifying, key=lambda c: (-c.utility, c.index))
    return min(qualifying, key=lambda c: (c.weight, c.index))


def _feed_ladder(states, indices, cfg, counter, w, x, single, records) -> None:
    for j in indices:
        process_element(states[j], cfg, counter, w, x, single, records)


def algorithm2(
    stream: Sequence[int] | Callable[[], Iterable[int]],
    cfg: ProblemConfig,
    g: UtilityOracle,
    w: WeightTable,
    trace: bool = False,
) -> SolverResult:
    """Two-pass ladder over guesses ``(1-ε)^j · n · w_max``.

    ``stream`` is either a re-iterable sequence or a zero-argument factory
    returning a fresh iterator; both passes must yield the same order.
    """
    if callable(stream):
        factory = stream
    else:
        if iter(stream) is stream:
            raise ConfigError("algorithm 2 needs a replayable stream (sequence or factory)")
        factory = lambda: iter(stream)  # noqa: E731

    counter = _counting(g)
    q0 = counter.queries
    n = 0

    def counted(it):
        nonlocal n
        for x in it:
            n += 1
            yield x

    w_min, w_max = weight_extremes(counted(_checked_stream(factory(), g.n)), w)
    rungs = build_guess_set(w_min, w_max, n, cfg.epsilon)

    stats = StreamStats(live_instances_max=len(rungs))
    records: list[TraceRecord] | None = [] if trace else None
    states = [make_threshold_state(cfg, lam, g.k) for lam in rungs]
    indices = range(len(states))
    for x in _checked_stream(factory(), g.n):
        before = counter.queries
        single = best_singleton(counter, x)
        stats.observe(w[x], single[1])
        _feed_ladder(states, indices, cfg, counter, w, x, single, records)
        stats.peak_stored_pairs = max(stats.peak_stored_pairs, sum(len(s.solution) for s in states))
        stats.queries_per_element.append(counter.queries - before)
        stats.live_per_element.append(len(states))
    if stats.elements_seen != n:
        raise InstanceError(f"second pass saw {stats.elements_seen} elements, first pass {n}")
    stats.oracle_queries = counter.queries - q0

    bar = cfg.utility_bar
    cands = [
        Candidate(j, s.guess, s.solution, s.weight_so_far, s.utility, s.utility >= bar)
        for j, s in enumerate(states)
    ]
    return _finish(2, cands, "default", stats, rungs, records)


def _finish(algorithm, cands, mode, stats, rungs, records) -> SolverResult:
    chosen = _select(cands, mode)
    result = SolverResult(
        algorithm=algorithm,
        solution=chosen.solution if chosen else KSet.empty(cands[0].solution.k if cands else 1),
        weight=chosen.weight if chosen else 0.0,
        utility=chosen.utility if chosen else 0.0,
        stats=stats,
        candidates=cands,
        selected=chosen.index if chosen else None,
        ladder=rungs,
        trace=records,
    )
    if chosen is None:
        err = InfeasibleError(
            f"no ladder instance reached the utility bar ({len(cands)} candidate(s))", len(cands)
        )
        err.result = result
        raise err
    return result


@dataclass
class GuessLadder:
    """Live guesses ``λ_j = (1-ε)^j · base`` with ``L <= λ_j <= U``.

    ``lower_L is None`` stands for the initial ``L = -∞``; until the first
    update the ladder holds no rungs. ``U`` is kept as its rung index.
    """

    base: float
    epsilon: float
    lower_L: float | None = None
    upper_index: int = 0
    instances: dict[int, ThresholdState] = field(default_factory=dict)

    @property
    def upper_U(self) -> float:
        return ladder_value(self.base, self.epsilon, self.upper_index)

    def live_indices(self) -> list[int]:
        """Indices ``j >= upper_index`` whose rung is ``>= L``, ascending."""
        if self.lower_L is None:
            return []
        out = []
        j = self.upper_index
        while ladder_value(self.base, self.epsilon, j) >= self.lower_L:
            out.append(j)
            j += 1
        return out

    def regenerate(self, cfg: ProblemConfig, k: int) -> list[int]:
        """Drop rungs above ``U``, open empty instances for new rungs, return live indices."""
        live = self.live_indices()
        for j in [j for j in self.instances if j < self.upper_index]:
            del self.instances[j]
        for j in live:
            if j not in self.instances:
                self.instances[j] = make_threshold_state(cfg, ladder_value(self.base, self.epsilon, j), k)
        return live

    def stored_pairs(self) -> int:
        return sum(len(s.solution) for s in self.instances.values())


def update_lower_bound(
    ladder: GuessLadder, cfg: ProblemConfig, g: UtilityOracle, x: int, w: WeightTable,
    singleton: tuple[int, float] | None = None,
) -> GuessLadder:
    """Lower ``L`` to ``ετ w(x) / g((x, i'))`` when ``g((x, i')) / w(x) > ετ / L``."""
    _, value = best_singleton(g, x) if singleton is None else singleton
    wx = w[x]
    if ladder.lower_L is None:
        passes = value > 0
    else:
        passes = value / wx > cfg.epsilon * cfg.tau / ladder.lower_L
    if passes:
        ladder.lower_L = cfg.epsilon * cfg.tau * wx / value
    return ladder


def algorithm3(
    stream: Iterable[int],
    cfg: ProblemConfig,
    g: UtilityOracle,
    w: WeightTable,
    selection: Selection = "default",
    trace: bool = False,
) -> SolverResult:
    """Single pass with dynamic guesses under the upper bound ``cfg.upper_bound_B``."""
    if cfg.upper_bound_B is None:
        raise ConfigError("algorithm 3 needs an upper bound B on the optimal cost")
    if selection not in ("default", "max-utility"):
        raise ConfigError(f"unknown selection mode {selection!r}")
    counter = _counting(g)
    q0 = counter.queries
    stats = StreamStats()
    records: list[TraceRecord] | None = [] if trace else None
    ladder = GuessLadder(cfg.upper_bound_B, cfg.epsilon)
    bar = cfg.utility_bar
    for x in _checked_stream(stream, g.n):
        before = counter.queries
        single = best_singleton(counter, x)
        stats.observe(w[x], single[1])
        update_lower_bound(ladder, cfg, counter, x, w, single)
        live = ladder.regenerate(cfg, g.k)
        for j in live:
            state = ladder.instances[j]
            process_element(state, cfg, counter, w, x, single, records)
            if state.utility >= bar:
                ladder.upper_index = max(ladder.upper_index, j)
        stats.live_instances_max = max(stats.live_instances_max, len(live))
        stats.peak_stored_pairs = max(stats.peak_stored_pairs, ladder.stored_pairs())
        stats.queries_per_element.append(counter.queries - before)
        stats.live_per_element.append(len(live))
    stats.oracle_queries = counter.queries - q0

    live = ladder.regenerate(cfg, g.k)
    cands = []
    for j in live:
        s = ladder.instances[j]
        cands.append(Candidate(j, s.guess, s.solution, s.weight_so_far, s.utility, s.utility >= bar))
    rungs = [ladder_value(ladder.base, cfg.epsilon, j) for j in live]
    if not cands:
        result = SolverResult(3, KSet.empty(g.k), 0.0, 0.0, stats, [], None, rungs, records)
        err = InfeasibleError("no live guesses at end of stream", 0)
        err.result = result
        raise err
    return _finish(3, cands, selection, stats, rungs, records)
