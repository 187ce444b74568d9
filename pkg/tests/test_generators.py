"""Instance families, CNF/PARTITION parsing, and orientation helpers."""

import math
from fractions import Fraction as F

import pytest

from tempoflow import (
    CnfFormula,
    Commodity,
    CommoditySet,
    PartitionInstance,
    ValidationError,
    apply_orientation,
    assignment_orientation,
    build_directed,
    canonical_orientation,
    dpll_assignment,
    gen_eaf,
    gen_fig1,
    gen_flow_price_lb,
    gen_single_sink_lb,
    gen_single_source_lb,
    gen_time_price_single_sink,
    gen_time_price_single_source,
    gen_time_price_tree,
    gen_unit_capacity_tree,
    max_concurrent_lambda,
    parse_dimacs,
    parse_partition,
    point_mass_feasible,
    quickest_unbounded_infimum,
    reduce_3sat_quickest,
    restricted_orientations,
    static_mc_feasibility,
    validate,
    variable_edge_pairs,
)


# --- family shapes ----------------------------------------------------------

FAMILY_SHAPES = [
    # (factory, n, m, horizon, total supply)
    (lambda: gen_fig1(4), 5, 5, 4, F(2)),
    (lambda: gen_flow_price_lb(8, F(1, 4), 1), 10, 10, 9, F(3)),
    (lambda: gen_single_sink_lb(8, F(1, 4)), 5, 5, 8, F(2)),
    (lambda: gen_single_source_lb(8, F(1, 4)), 5, 5, 8, F(2)),
    (lambda: gen_time_price_single_sink(2, 2), 9, 9, None, F(19)),
    (lambda: gen_time_price_single_source(2, 2), 9, 9, None, F(19)),
    (lambda: gen_time_price_tree(2, 2), 8, 7, None, F(19)),
    (lambda: gen_unit_capacity_tree(2, 2), 6, 5, None, F(2)),
    (lambda: gen_unit_capacity_tree(1, 2), 2, 1, None, F(1)),
    (lambda: gen_eaf(36, 4), 4, 5, 4, F(148)),
]


@pytest.mark.parametrize("factory,n,m,horizon,supply", FAMILY_SHAPES)
def test_family_shape(factory, n, m, horizon, supply):
    net = factory()
    assert validate(net) == []
    assert (net.n, net.m, net.horizon) == (n, m, horizon)
    assert net.total_supply() == supply


@pytest.mark.parametrize(
    "factory",
    [
        lambda: gen_fig1(1),
        lambda: gen_flow_price_lb(8, F(1, 3), 1),  # delta*T not integral
        lambda: gen_single_sink_lb(8, F(1, 3)),
        lambda: gen_single_source_lb(8, F(1, 3)),
        lambda: gen_eaf(36, 3),  # odd horizon
        lambda: gen_eaf(0, 4),
        lambda: gen_unit_capacity_tree(0, 2),
    ],
)
def test_family_preconditions(factory):
    with pytest.raises(ValidationError):
        factory()


# --- CNF and PARTITION parsing ----------------------------------------------


def test_parse_dimacs_round_trip():
    phi = parse_dimacs("c comment\np cnf 3 2\n1 -2 3 0\n-1 2 -3 0\n")
    assert phi.k == 3
    assert phi.clauses == (
        ((1, False), (2, True), (3, False)),
        ((1, True), (2, False), (3, True)),
    )
    assert phi.num_clauses == 2


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("", "header"),
        ("1 2 3 0\n", "header"),
        ("p cnf 2 1\n1 2 0\n", "exactly 3 literals"),
        ("p cnf 1 1\n1 1 2 0\n", "outside"),
        ("p cnf 2 2\n1 2 -1 0\n", "declares 2 clauses"),
    ],
)
def test_parse_dimacs_errors(text, fragment):
    with pytest.raises(ValidationError, match=fragment):
        parse_dimacs(text)


def test_cnf_satisfaction_helpers():
    phi = parse_dimacs("p cnf 2 2\n1 2 2 0\n-1 -2 -2 0\n")
    assert phi.has_repeated_variable()
    assert phi.is_satisfied((True, False))
    assert not phi.is_satisfied((True, True))


def test_dpll_finds_assignment():
    phi = parse_dimacs("p cnf 3 1\n1 2 -3 0\n")
    assignment = dpll_assignment(phi)
    assert assignment is not None
    assert phi.is_satisfied(assignment)


def test_dpll_detects_unsat():
    phi = parse_dimacs("p cnf 1 2\n1 1 1 0\n-1 -1 -1 0\n")
    assert dpll_assignment(phi) is None


def test_partition_parse_and_subset_sum():
    p = parse_partition(" 1 1  2 \n")
    assert p.values == (1, 1, 2)
    assert p.half == 2
    assert p.has_solution()
    assert not PartitionInstance((1, 1, 4)).has_solution()


@pytest.mark.parametrize("text", ["", "1 2", "0 2"])
def test_partition_parse_errors(text):
    with pytest.raises(ValidationError):
        parse_partition(text)


# --- orientation helpers ----------------------------------------------------


def test_canonical_orientation_points_at_terminals(fig1):
    o = canonical_orientation(fig1)
    names = fig1.names
    arcs = {(names[a], names[b]) for a, b in o.arcs}
    assert ("s1", "i") in arcs  # away from the source
    assert ("i", "t") in arcs  # toward the sink


def test_canonical_orientation_respects_choices(fig1):
    o = canonical_orientation(fig1, {0: True})
    e = fig1.edges[0]
    assert o.arcs[0] == (e.v, e.u)


def test_assignment_orientation_directions():
    phi = parse_dimacs("p cnf 1 1\n1 1 1 0\n")
    net = reduce_3sat_quickest(phi, 2, 0)
    pairs = variable_edge_pairs(net, 1)
    assert len(pairs) == 1
    pos, neg = pairs[0]

    def arc_names(orientation, eid):
        a, b = orientation.arcs[eid]
        return net.names[a], net.names[b]

    o_true = assignment_orientation(net, phi, (True,))
    assert arc_names(o_true, pos) == ("x1^1", "x1^2")
    assert arc_names(o_true, neg) == ("~x1^2", "~x1^1")
    o_false = assignment_orientation(net, phi, (False,))
    assert arc_names(o_false, pos) == ("x1^2", "x1^1")
    assert arc_names(o_false, neg) == ("~x1^1", "~x1^2")


def test_assignment_orientation_length_check():
    phi = parse_dimacs("p cnf 2 1\n1 2 2 0\n")
    net = reduce_3sat_quickest(phi, 2, 0)
    with pytest.raises(ValidationError):
        assignment_orientation(net, phi, (True,))


def test_variable_edge_pairs_missing():
    phi = parse_dimacs("p cnf 1 1\n1 1 1 0\n")
    net = reduce_3sat_quickest(phi, 2, 0)
    with pytest.raises(ValidationError):
        variable_edge_pairs(net, 2)


def test_restricted_orientations_enumeration(fig1):
    free = [0, 2]
    orientations = list(restricted_orientations(fig1, free))
    assert len(orientations) == 4
    base = canonical_orientation(fig1)
    for o in orientations:
        for e in fig1.edges:
            if e.id not in free:
                assert o.arcs[e.id] == base.arcs[e.id]
    assert len({o.arcs for o in orientations}) == 4


# --- point-mass and multicommodity oracles ----------------------------------


def test_point_mass_single_edge():
    net = build_directed(
        ("s", "t"), (("s", "t", math.inf, 2),), {"s": 1, "t": -1}, None
    )
    assert point_mass_feasible(net, 2)
    assert not point_mass_feasible(net, 1)
    assert quickest_unbounded_infimum(net) == 2


def test_point_mass_needs_matching():
    # two units must leave s but only one admissible sink pair exists at T=2
    net = build_directed(
        ("s", "t1", "t2"),
        (("s", "t1", math.inf, 2), ("s", "t2", math.inf, 3)),
        {"s": 2, "t1": -1, "t2": -1},
        None,
    )
    assert not point_mass_feasible(net, 2)
    assert point_mass_feasible(net, 3)
    assert quickest_unbounded_infimum(net) == 3


def test_max_concurrent_single_commodity():
    net = build_directed(
        ("s", "t"), (("s", "t", F(1), 0),), {"s": 0, "t": 0}, None
    )
    coms = CommoditySet((Commodity(0, (F(1), F(-1))),))
    assert max_concurrent_lambda(net, coms) == F(1)
    assert static_mc_feasibility(net, coms, F(1))
    assert not static_mc_feasibility(net, coms, F(2), proportional=True)


def test_max_concurrent_shared_capacity():
    # two commodities share one unit of capacity: each routes half
    net = build_directed(
        ("s", "t"), (("s", "t", F(1), 0),), {"s": 0, "t": 0}, None
    )
    coms = CommoditySet(
        (Commodity(0, (F(1), F(-1))), Commodity(1, (F(1), F(-1))))
    )
    assert max_concurrent_lambda(net, coms) == F(1, 2)


def test_quickest_mc_unbounded_capacity():
    from tempoflow import quickest_mc_time

    net = build_directed(
        ("s", "t"), (("s", "t", math.inf, 0),), {"s": 0, "t": 0}, None
    )
    coms = CommoditySet((Commodity(0, (F(1), F(-1))),))
    # no finite capacity binds, so full delivery happens arbitrarily fast
    assert quickest_mc_time(net, coms) == F(0)


def test_quickest_mc_undeliverable():
    from tempoflow import quickest_mc_time

    net = build_directed(
        ("t", "s"), (("t", "s", F(1), 0),), {"s": 0, "t": 0}, None
    )
    coms = CommoditySet((Commodity(0, (F(-1), F(1))),))
    assert quickest_mc_time(net, coms) is None
