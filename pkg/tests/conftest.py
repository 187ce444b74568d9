"""Shared fixtures: small hand-checkable networks used across test modules."""

from fractions import Fraction

import pytest

from tempoflow import build_directed, build_undirected, gen_fig1


@pytest.fixture
def fig1():
    return gen_fig1(4)


@pytest.fixture
def diamond():
    """Directed diamond with static max-flow value 2 (all transits 0)."""
    return build_directed(
        ("s", "a", "b", "t"),
        (
            ("s", "a", Fraction(2), 0),
            ("s", "b", Fraction(1), 0),
            ("a", "t", Fraction(1), 0),
            ("b", "t", Fraction(2), 0),
        ),
        {"s": 5, "t": -5},
        None,
    )


@pytest.fixture
def two_path():
    """Direct slow edge plus a fast two-hop path; TR optimum at T=4 is 5."""
    return build_directed(
        ("s", "a", "t"),
        (
            ("s", "t", Fraction(1), 3),
            ("s", "a", Fraction(1), 0),
            ("a", "t", Fraction(1), 0),
        ),
        {"s": 100, "t": -100},
        4,
    )


@pytest.fixture
def single_edge_directed():
    """One arc, capacity 2, transit 1; value at T=3 is 4 when supply allows."""

    def make(balance):
        return build_directed(
            ("s", "t"), (("s", "t", Fraction(2), 1),), {"s": balance, "t": -balance}, 3
        )

    return make


@pytest.fixture
def single_edge_undirected():
    return build_undirected(
        ("s", "t"), (("s", "t", Fraction(1), 1),), {"s": 10, "t": -10}, 3
    )
