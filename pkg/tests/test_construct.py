"""Plan builders: the support-interval plan and the certified-bound plan."""

from fractions import Fraction

import pytest

from bonuslab import (
    DegenerateSupport,
    ExpectationNotUnique,
    OptimalityVerdict,
    build_bounded_linear,
    build_m_linear,
    build_market,
    check_optimal,
    find_bounding_m,
    two_bond_market,
    support_bound,
)
from conftest import random_market

F = Fraction


def test_support_bound():
    market = build_market(["A", "B"], [("1/2", ("-3", "1")), ("1/2", ("2", "0"))])
    assert support_bound(market) == F(3)


def test_interval_plan_uses_support_interval_and_bound():
    plan = build_m_linear(two_bond_market(), 2)
    assert (plan.bound, plan.lo, plan.hi) == (F(1051, 1000), F(1), F(1051, 1000))
    assert plan.evaluate(("1051/1000", "1")) == (F(2153, 4204), F(2051, 4204))


def test_interval_plan_handles_negative_support():
    market = build_market(["A", "B"], [("1/2", ("-5", "-1")), ("1/2", ("-2", "-4"))])
    plan = build_m_linear(market, 3)
    assert (plan.bound, plan.lo, plan.hi) == (F(5), F(-5), F(-1))


def test_interval_plan_needs_a_scale():
    flat = build_market(["A", "B"], [("1", ("0", "0"))])
    with pytest.raises(DegenerateSupport):
        build_m_linear(flat, 2)


def test_bound_search_on_the_two_bond_market():
    result = find_bounding_m(two_bond_market(), 10)
    assert result.bound == F(1, 20)
    assert result.min_gap == F(97, 50000)
    assert result.best_action == 0
    assert result.grid_resolution == 10
    # ten grid points besides the best action's vertex
    assert len(result.witnesses) == 10
    tightest = min(result.witnesses, key=lambda w: w.gap)
    assert tightest.weights == (F(9, 10), F(1, 10))


def test_bound_search_requires_unique_best():
    tied = build_market(["A", "B"], [("1/2", ("1", "0")), ("1/2", ("0", "1"))])
    with pytest.raises(ExpectationNotUnique):
        find_bounding_m(tied, 4)


def _difference_distribution(market, weights, best):
    dist = {}
    for atom in market.atoms:
        value = sum(w * x for w, x in zip(weights, atom.outcomes))
        diff = value - atom.outcomes[best]
        dist[diff] = dist.get(diff, F(0)) + atom.probability
    return dist


def _passes_truncation_tests(dist, gap, m):
    drift = sum(l * p for l, p in dist.items() if abs(l) <= m)
    tail = sum(abs(l) * p for l, p in dist.items() if abs(l) > m)
    return drift < -gap / 2 and tail < gap / 2


def _check_witness(market, best, witness):
    """Recompute everything the witness certifies from scratch."""
    dist = _difference_distribution(market, witness.weights, best)
    gap = -sum(l * p for l, p in dist.items())
    assert gap == witness.gap
    assert gap > 0
    magnitudes = sorted({abs(l) for l in dist if l != 0})
    assert witness.tail_empty_at == magnitudes[-1]
    assert witness.threshold in magnitudes
    for m in magnitudes:
        if m >= witness.threshold:
            assert _passes_truncation_tests(dist, gap, m)
    below = [m for m in magnitudes if m < witness.threshold]
    if below:
        # minimality: one step lower the suffix property already fails
        assert not _passes_truncation_tests(dist, gap, below[-1])


def test_witness_invariants_recompute():
    market = two_bond_market()
    result = find_bounding_m(market, 10)
    for witness in result.witnesses:
        _check_witness(market, result.best_action, witness)
    assert result.bound == max(
        max(w.threshold, w.tail_empty_at) for w in result.witnesses
    )
    assert result.min_gap == min(w.gap for w in result.witnesses)


def test_witness_invariants_on_random_markets(rng):
    for _ in range(15):
        market = random_market(rng)
        result = find_bounding_m(market, 4)
        for witness in result.witnesses:
            _check_witness(market, result.best_action, witness)


def test_refining_the_grid_tightens_the_gap_not_the_bound():
    """Coarse grids embed in finer ones, so the minimum gap cannot rise."""
    market = two_bond_market()
    results = {d: find_bounding_m(market, d) for d in (2, 4, 8)}
    assert results[4].min_gap <= results[2].min_gap
    assert results[8].min_gap <= results[4].min_gap
    assert results[2].bound <= results[4].bound <= results[8].bound
    # on this market the bound is pinned by the pure risky-bond vertex
    assert {r.bound for r in results.values()} == {F(1, 20)}


def test_bounded_plan_passes_optimality():
    market = two_bond_market()
    plan = build_bounded_linear(market, 2, 10)
    assert plan.bound == F(1, 20)
    report = check_optimal(market, plan)
    assert report.verdict is OptimalityVerdict.OPTIMAL


def test_certified_bound_can_be_far_below_the_support_bound():
    """Outliers shared by both actions cancel in the differences.

    Both actions pay about a million on the rare atom, so the support bound
    is huge; their pointwise difference never exceeds 1/10, and the
    certified bound sees only that.
    """
    market = build_market(
        ["A", "B"],
        [
            ("999999/1000000", ("1", "9/10")),
            ("1/1000000", ("1000000", "9999999/10")),
        ],
    )
    assert support_bound(market) == F(1000000)
    result = find_bounding_m(market, 6)
    assert result.bound == F(1, 10)
    plan = build_bounded_linear(market, 2, 6)
    assert check_optimal(market, plan).verdict is OptimalityVerdict.OPTIMAL
