"""Time-expanded oracle, witnesses, quickest transshipment, arrival patterns."""

import math
from fractions import Fraction as F

import pytest

from tempoflow import (
    FlowOverTime,
    Piece,
    ValidationError,
    build_directed,
    build_undirected,
    check_feasibility,
    earliest_arrival_pattern,
    flow_value_at,
    gen_eaf,
    max_flow_over_time,
    quickest_transshipment_time,
)


def test_single_edge_rate_bound(single_edge_directed):
    # capacity bounds the rate, so at most 2 per unit time for T - tau = 2 steps
    value, flow = max_flow_over_time(single_edge_directed(100), 3)
    assert value == F(4)
    assert flow.value == F(4)
    assert check_feasibility(flow).ok


def test_single_edge_supply_bound(single_edge_directed):
    # supply 3 binds before the rate bound of 4
    value, _ = max_flow_over_time(single_edge_directed(3), 3)
    assert value == F(3)


def test_undirected_edge_shares_capacity(single_edge_undirected):
    value, flow = max_flow_over_time(single_edge_undirected, 3)
    assert value == F(2)
    assert check_feasibility(flow).ok


def test_fig1_values(fig1):
    assert max_flow_over_time(fig1, 4, witness=False)[0] == F(2)
    assert max_flow_over_time(fig1, 3, witness=False)[0] == F(3, 4)


def test_fig1_witness_feasible(fig1):
    value, flow = max_flow_over_time(fig1, 4)
    assert value == F(2)
    report = flow.check_feasibility()
    assert report.ok, report.problems
    # arrivals are monotone in time
    vals = [flow.value_at(th) for th in range(5)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert flow_value_at(flow, 4) == F(2)


def test_tampered_witness_detected(single_edge_directed):
    net = single_edge_directed(100)
    bad = FlowOverTime(net, 3, {0: (Piece(0, 2, F(3)),)})  # rate above capacity
    report = check_feasibility(bad)
    assert not report.ok
    assert any("capacity" in p for p in report.problems)


def test_flow_after_horizon_rejected(single_edge_directed):
    net = single_edge_directed(100)
    # departing at time 2 arrives at 4 > T = 3
    bad = FlowOverTime(net, 3, {0: (Piece(2, 3, F(1)),)})
    assert not check_feasibility(bad).ok


def test_zero_horizon(fig1):
    value, flow = max_flow_over_time(fig1, 0)
    assert value == F(0)
    assert flow.value == F(0)


def test_bad_horizon_rejected(fig1):
    with pytest.raises(ValidationError):
        max_flow_over_time(fig1, -1)


def test_quickest_single_edge():
    net = build_directed(
        ("s", "t"), (("s", "t", F(1), 2),), {"s": 3, "t": -3}, None
    )
    assert quickest_transshipment_time(net) == 5


def test_quickest_is_minimal():
    net = build_directed(
        ("s", "t"), (("s", "t", F(1), 2),), {"s": 3, "t": -3}, None
    )
    assert max_flow_over_time(net, 5, witness=False)[0] == F(3)
    assert max_flow_over_time(net, 4, witness=False)[0] < F(3)


def test_quickest_unreachable_is_infinite():
    net = build_directed(
        ("s", "t", "z"), (("s", "z", F(1), 0),), {"s": 1, "t": -1}, None
    )
    assert math.isinf(quickest_transshipment_time(net))


def test_quickest_undirected(fig1):
    assert quickest_transshipment_time(fig1) == 4


def test_pattern_matches_pointwise_maxima(single_edge_directed):
    net = single_edge_directed(100)
    pattern = earliest_arrival_pattern(net, 3)
    assert pattern == {0: F(0), 1: F(0), 2: F(2), 3: F(4)}
    for theta, value in pattern.items():
        assert value == max_flow_over_time(net, theta, witness=False)[0]


def test_pattern_monotone_and_capped():
    net = gen_eaf(36, 4)
    pattern = earliest_arrival_pattern(net, 12)
    vals = [pattern[th] for th in range(13)]
    assert all(a <= b for a, b in zip(vals, vals[1:]))
    assert vals[-1] == net.total_supply()


def test_eaf_pattern_frozen():
    pattern = earliest_arrival_pattern(gen_eaf(36, 4), 12)
    expected = {0: 0, 1: 0, 2: 0, 3: 1, 4: 2, 5: 39, 6: 76, 7: 113}
    expected.update({th: 148 for th in range(8, 13)})
    assert pattern == {th: F(v) for th, v in expected.items()}


def test_directed_supplies_bound_totals():
    # two sources feeding one sink through a shared arc: balances cap the
    # per-source contribution even when the rate bound would allow more
    net = build_directed(
        ("s1", "s2", "a", "t"),
        (
            ("s1", "a", F(5), 0),
            ("s2", "a", F(5), 0),
            ("a", "t", F(5), 1),
        ),
        {"s1": 1, "s2": 2, "t": -3},
        3,
    )
    value, flow = max_flow_over_time(net, 3)
    assert value == F(3)
    assert check_feasibility(flow).ok
