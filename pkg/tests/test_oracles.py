import numpy as np
import pytest

from ksubcover import ConfigError, InstanceError, PreconditionError
from ksubcover.kset import KSet
from ksubcover.oracles import (
    CountingOracle,
    CoverageFunction,
    SeparableFunction,
    TabularFunction,
    best_marginal,
    best_singleton,
    marginal_gain,
    unwrap,
)

A, B = 0, 1


@pytest.fixture
def cov():
    # a -> topic1 {1,2}, topic2 {1}; b -> topic1 {3}, topic2 {2,3} (items renumbered from 0)
    return CoverageFunction(2, [1, 1, 1], [[{0, 1}, {0}], [{2}, {1, 2}]])


def covered(pairs, covers):
    """Independent reference: size of the union of the chosen cover sets."""
    items = set()
    for x, i in pairs:
        items |= set(covers[x][i - 1])
    return len(items)


def test_eval_examples(cov):
    assert cov(KSet.empty(2)) == 0
    assert cov(KSet(2, [(A, 1)])) == 2
    assert cov(KSet(2, [(A, 1), (B, 1)])) == 3


def test_eval_matches_set_union_everywhere(cov):
    covers = [[{0, 1}, {0}], [{2}, {1, 2}]]
    for va in range(3):
        for vb in range(3):
            s = KSet.from_vector([va, vb], 2)
            assert cov(s) == covered(s.pairs(), covers)


def test_eval_rejects_bad_kset(cov):
    with pytest.raises(ConfigError):
        cov(KSet.empty(3))
    with pytest.raises(ConfigError):
        cov(KSet(2, [(5, 1)]))


def test_marginal_gain_examples(cov):
    assert marginal_gain(cov, KSet.empty(2), A, 2) == cov(KSet(2, [(A, 2)]))
    assert marginal_gain(cov, KSet(2, [(A, 1)]), B, 1) == 1
    with pytest.raises(PreconditionError):
        marginal_gain(cov, KSet(2, [(A, 1)]), A, 2)


def test_best_singleton_examples(cov):
    assert best_singleton(cov, A) == (1, 2)
    sym = CoverageFunction(3, [1, 1], [[{0}, {1}, {0}]])
    assert best_singleton(sym, 0) == (1, 1)
    k1 = CoverageFunction(1, [2.5], [[{0}]])
    assert best_singleton(k1, 0) == (1, 2.5)


def test_best_marginal_examples(cov):
    assert best_marginal(cov, KSet.empty(2), A)[:2] == best_singleton(cov, A)
    m = best_marginal(cov, KSet(2, [(A, 1)]), B)
    assert (m.position, m.gain, m.value) == (1, 1, 3)
    with pytest.raises(PreconditionError):
        best_marginal(cov, KSet(2, [(A, 1)]), A)


def test_best_marginal_negative_gain_table():
    # n=2, k=2: g((a,1)) = 1; adding b at 1 loses 0.2, at 2 gains 0.5
    entries = {v: 0.0 for v in np.ndindex(3, 3)}
    entries[(1, 0)] = 1.0
    entries[(0, 1)] = 0.5
    entries[(0, 2)] = 0.5
    entries[(2, 0)] = 1.0
    entries[(1, 1)] = 0.8
    entries[(1, 2)] = 1.5
    entries[(2, 1)] = 1.5
    entries[(2, 2)] = 1.5
    g = TabularFunction.from_mapping(2, 2, entries)
    m = best_marginal(g, KSet(2, [(A, 1)]), B)
    assert m.position == 2
    assert m.gain == pytest.approx(0.5)
    assert marginal_gain(g, KSet(2, [(A, 1)]), B, 1) == pytest.approx(-0.2)


def test_counting_oracle_query_costs(cov):
    c = CountingOracle(cov)
    best_singleton(c, A)
    assert c.queries == 2
    s = KSet(2, [(A, 1)])
    best_marginal(c, s, B, base=2.0)
    assert c.queries == 4
    best_marginal(c, s, B)  # g(s) costs one more
    assert c.queries == 7
    assert c.reset() == 7 and c.queries == 0
    c.value_table()
    assert c.queries == 9
    assert unwrap(CountingOracle(c)) is cov


def test_separable_is_sum_of_per_position_coverage():
    g = SeparableFunction(2, [([1, 2], [{0}, {1}]), ([3], [{0}, {0}])])
    assert g(KSet(2, [(0, 1)])) == 1
    assert g(KSet(2, [(0, 1), (1, 1)])) == 3
    assert g(KSet(2, [(0, 2), (1, 2)])) == 3
    assert g(KSet(2, [(0, 1), (1, 2)])) == 4


def test_tabular_validation():
    with pytest.raises(InstanceError):
        TabularFunction(1, 1, [1.0, 2.0])
    with pytest.raises(InstanceError):
        TabularFunction(1, 1, [0.0, -1.0])
    with pytest.raises(InstanceError):
        TabularFunction(1, 1, [0.0])
    with pytest.raises(InstanceError):
        TabularFunction.from_mapping(1, 2, {(0,): 0.0, (1,): 1.0})


def test_tabular_from_oracle_roundtrip(cov):
    t = TabularFunction.from_oracle(cov)
    assert np.array_equal(t.value_table(), cov.value_table())
    for v in np.ndindex(3, 3):
        assert t.eval_vector(v) == cov.eval_vector(v)
