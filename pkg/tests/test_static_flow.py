"""Static min-cost flow machinery behind temporally repeated flows."""

from fractions import Fraction as F

import pytest

from tempoflow import (
    ValidationError,
    build_directed,
    max_flow_over_time,
    max_temporally_repeated_static_flow,
    path_decomposition,
    static_max_flow_value,
)
from tempoflow.static_flow import shortest_path_deterministic


def test_static_max_flow_diamond(diamond):
    assert static_max_flow_value(diamond) == F(2)


def test_tr_value_formula(two_path):
    # paths: direct (transit 3, rate 1) and two-hop (transit 0, rate 1)
    res = max_temporally_repeated_static_flow(two_path, 4, source=0, sink=2)
    assert res.static_value == F(2)
    assert res.value == F(5)
    assert res.value == sum((4 - p.transit) * p.amount for p in res.paths)
    assert res.value == max_flow_over_time(two_path, 4, witness=False)[0]


def test_tr_skips_too_slow_paths():
    # at T=3 the direct edge contributes nothing: 3 - 3 = 0
    net = build_directed(
        ("s", "t"), (("s", "t", F(1), 3),), {"s": 10, "t": -10}, 3
    )
    res = max_temporally_repeated_static_flow(net, 3, source=0, sink=1)
    assert res.value == F(0)


def test_tr_single_path():
    net = build_directed(
        ("s", "a", "t"),
        (("s", "a", F(2), 1), ("a", "t", F(2), 1)),
        {"s": 100, "t": -100},
        4,
    )
    res = max_temporally_repeated_static_flow(net, 4, source=0, sink=2)
    assert res.static_value == F(2)
    assert res.value == F(4)  # (4 - 2) * 2
    (p,) = res.paths
    assert p.nodes == (0, 1, 2)
    assert p.transit == 2


def test_path_decomposition_diamond(diamond):
    paths = path_decomposition([F(1), F(1), F(1), F(1)], diamond, 0, 3)
    assert [(p.nodes, p.amount) for p in paths] == [
        ((0, 1, 3), F(1)),
        ((0, 2, 3), F(1)),
    ]
    # deterministic: a second run gives the identical decomposition
    assert path_decomposition([F(1), F(1), F(1), F(1)], diamond, 0, 3) == paths


def test_path_decomposition_rejects_imbalance(diamond):
    with pytest.raises(ValidationError, match="conservation"):
        path_decomposition([F(1), F(0), F(0), F(0)], diamond, 0, 3)


def test_path_decomposition_rejects_overflow(diamond):
    with pytest.raises(ValidationError, match="capacity"):
        path_decomposition([F(3), F(0), F(0), F(0)], diamond, 0, 3)


def test_path_decomposition_rejects_cycles():
    net = build_directed(
        ("s", "a", "b", "t"),
        (
            ("s", "a", F(1), 0),
            ("a", "b", F(2), 0),
            ("b", "a", F(2), 0),
            ("a", "t", F(1), 0),
        ),
        {"s": 1, "t": -1},
        None,
    )
    with pytest.raises(ValidationError):
        path_decomposition([F(1), F(1), F(1), F(1)], net, 0, 3)


def test_shortest_path_tie_break(diamond):
    # both paths have transit 0; the lowest-arc-id one wins
    p = shortest_path_deterministic(diamond, 0, 3)
    assert p.nodes == (0, 1, 3)
    assert p.arcs == (0, 2)
    assert p.transit == 0


def test_shortest_path_disconnected():
    net = build_directed(
        ("s", "t", "z"), (("s", "z", F(1), 0),), {"s": 1, "t": -1}, None
    )
    assert shortest_path_deterministic(net, 0, 1) is None


def test_shortest_path_respects_transits():
    net = build_directed(
        ("s", "a", "t"),
        (("s", "t", F(1), 5), ("s", "a", F(1), 1), ("a", "t", F(1), 1)),
        {"s": 1, "t": -1},
        None,
    )
    p = shortest_path_deterministic(net, 0, 2)
    assert p.nodes == (0, 1, 2)
    assert p.transit == 2
