"""Greedy partition data: exact conditions and weight behavior."""

from fractions import Fraction

import pytest

from idealbench.construction import (
    PartitionData,
    build_partition,
    degenerate_prefix_weight,
    interval_weight,
    verify_partition,
    weight_fn,
)
from idealbench.errors import HorizonExhausted, StructuralError
from idealbench.sets import Finite, Progression, full_set


def test_greedy_hand_run_depth_three():
    p = build_partition(3)
    assert p.starts == (0, 1, 3)
    assert p.lengths == (1, 2, 24)
    assert p.rationals == (
        Fraction(1),
        Fraction(1, 2),
        Fraction(1, 8),
        Fraction(1, 192),
    )
    # decay condition is tight at the last interval: 24 * 1/192 = 1/8
    assert p.lengths[2] * p.rationals[3] == Fraction(1, 8)


def test_greedy_depth_four_interval():
    p = build_partition(4)
    assert p.starts[3] == 27
    assert p.lengths[3] == 27 * 192
    assert p.rationals[4] == Fraction(1, 16 * 5184)


def independent_condition_check(p):
    """Conditions re-derived from scratch, not through verify_partition."""
    assert p.lengths[0] == 1 and p.starts[0] == 0 and p.rationals[0] == 1
    covered = 0
    for n in range(p.depth):
        assert p.starts[n] == covered
        covered += p.lengths[n]
        if n >= 1:
            assert Fraction(p.starts[n]) <= p.rationals[n] * p.lengths[n]
        assert p.lengths[n] * p.rationals[n + 1] <= Fraction(1, 2 ** (n + 1))
    for a, b in zip(p.rationals, p.rationals[1:]):
        assert a > b


@pytest.mark.parametrize("depth", [1, 2, 3, 5, 8, 12, 16])
def test_verify_matches_independent_check(depth):
    p = build_partition(depth)
    independent_condition_check(p)
    report = verify_partition(p)
    assert report.passed
    assert not report.failures()


def test_greedy_conditions_are_equality_tight():
    # the greedy rule spends no slack: growth holds with equality at every
    # index and decay with equality wherever the halving arm is not binding
    p = build_partition(10)
    report = verify_partition(p)
    by_check = {(r.name, r.index): r for r in report.reports}
    for n in range(1, p.depth):
        assert by_check[("growth", n)].slack == 0
    for n in range(p.depth):
        assert by_check[("decay", n)].slack == 0


def test_depth_one_is_vacuous():
    report = verify_partition(build_partition(1))
    assert report.passed


def test_tampered_rational_fails_decay_and_descent():
    p = build_partition(3)
    rationals = list(p.rationals)
    rationals[2] = Fraction(1)
    tampered = PartitionData(p.starts, p.lengths, tuple(rationals))
    report = verify_partition(tampered)
    assert not report.passed
    failing = {(r.name, r.index) for r in report.failures()}
    assert ("decay", 1) in failing       # 2 * 1 > 1/4
    assert ("descending", 1) in failing  # 1/2 < 1


def test_non_contiguous_intervals_rejected():
    p = build_partition(3)
    broken = PartitionData((0, 2, 4), p.lengths, p.rationals)
    with pytest.raises(StructuralError):
        verify_partition(broken)


def test_weight_function_values():
    p = build_partition(4)
    empty = weight_fn(Finite(()), p)
    assert empty(0) == 1
    assert empty(1) == Fraction(1, 2)
    assert empty(3) == Fraction(1, 8)

    on_one = weight_fn(Finite({1}), p)
    assert on_one(1) == Fraction(1, 8)
    assert on_one(0) == 1

    with pytest.raises(HorizonExhausted):
        empty(p.coverage_end)


def test_degenerate_weight_against_full_enumeration():
    # independent oracle: pointwise evaluation over the whole prefix
    p = build_partition(4)
    w = weight_fn(full_set(), p)
    upto = p.coverage_end - 1
    direct = sum((w(m) for m in range(upto)), Fraction(0))
    assert direct == degenerate_prefix_weight(p, upto)
    assert direct < 1
    # the bound holds at every intermediate horizon as well
    for horizon in (1, 2, 3, 10, 100, 5000):
        assert degenerate_prefix_weight(p, horizon) < 1


@pytest.mark.parametrize("depth", [4, 8, 12, 16])
def test_degenerate_weight_stays_below_one(depth):
    p = build_partition(depth)
    total = degenerate_prefix_weight(p, p.coverage_end - 1)
    assert total < 1
    # closed form: every full interval contributes exactly 2^-(n+1) here
    for n in range(depth - 1):
        assert p.rationals[n + 1] * p.lengths[n] == Fraction(1, 2 ** (n + 1))


def test_coinfinite_selector_divergence_prefix_bound():
    p = build_partition(10)
    evens = Progression(0, 2)
    # every index off the selector contributes at least the covered prefix
    for n in range(2, p.depth):
        total = Fraction(0)
        off_selector = 0
        for j in range(n):
            total += interval_weight(evens, p, j)
            if not evens.contains(j) and j >= 1:
                off_selector += 1
        assert total >= off_selector


def test_positive_direction_weights_dominated():
    p = build_partition(10)
    q_set = Progression(0, 2)
    p_set = Progression(0, 4)  # nested: P subset of Q at every index
    wq = weight_fn(q_set, p)
    wp = weight_fn(p_set, p)
    for n in range(p.depth):
        point = p.starts[n]
        assert wq(point) <= wp(point)


def test_interval_of_bisection():
    p = build_partition(6)
    for n in range(p.depth):
        assert p.interval_of(p.starts[n]) == n
        assert p.interval_of(p.end(n) - 1) == n
    with pytest.raises(HorizonExhausted):
        p.interval_of(p.coverage_end)


def test_partition_serialization_roundtrip():
    p = build_partition(5)
    back = PartitionData.from_json(p.to_json())
    assert back == p
