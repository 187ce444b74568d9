"""Orientation engine: fixed point, certificates, bicriteria, brute force, EAF."""

import math
from fractions import Fraction as F

import pytest

from tempoflow import (
    CapExceeded,
    FixedPointDivergence,
    FlowOverTime,
    Piece,
    PreconditionError,
    apply_orientation,
    gen_eaf,
    gen_fig1,
    gen_flow_price_lb,
    gen_single_sink_lb,
    gen_single_source_lb,
    gen_time_price_single_sink,
    gen_time_price_single_source,
    gen_time_price_tree,
    gen_unit_capacity_tree,
    max_flow_over_time,
)
from tempoflow.orient import (
    add_super_terminals,
    aux_capacity_bound,
    bicriteria_orient,
    brute_force_best_orientation,
    check_alpha_time_approx,
    check_beta_value_approx,
    eaf_contraflow_experiment,
    fixed_point_capacity_iteration,
    orient_one_third,
    partition_report,
)


# --- super terminals and the fixed point -------------------------------------


def test_add_super_terminals(fig1):
    from tempoflow import is_infinite

    sup = add_super_terminals(fig1)
    assert sup.network.n == fig1.n + 2
    # one auxiliary edge per terminal, appended after the original edges
    assert sup.network.m == fig1.m + 3
    assert set(sup.aux_edge_of) == {0, 1, 4}
    assert sup.original_balances == fig1.balances
    # N' itself is balance-free; the auxiliary edges start unbounded
    assert all(b == 0 for b in sup.network.balances)
    assert all(is_infinite(sup.network.edges[e].capacity) for e in sup.aux_edge_of.values())
    assert sup.network.horizon == fig1.horizon


def test_aux_capacity_bound_fig1(fig1):
    # sum of capacities incident to the two sources: 1 + 1/4
    assert aux_capacity_bound(fig1) == F(5, 4)


def test_fixed_point_fig1_certificate(fig1):
    sup = add_super_terminals(fig1)
    fp = fixed_point_capacity_iteration(sup, 4)
    assert fp.status == "converged"
    assert fp.certificate_ok
    assert fp.iterations == 43
    assert fp.gap <= F(1, 10**6)
    # both certificate bullets, checked from the raw result:
    # a terminal either keeps capacity U or moves its balance, and never more
    tol = F(1, 10**6)
    for v, cap in fp.caps.items():
        b = abs(sup.original_balances[v])
        assert fp.aux_totals[v] <= b + tol
        assert cap >= fp.U - tol or abs(fp.aux_totals[v] - b) <= tol


def test_fixed_point_flow_lb_certificate():
    net = gen_flow_price_lb(8, F(1, 4), 1)
    sup = add_super_terminals(net)
    fp = fixed_point_capacity_iteration(sup, net.horizon)
    assert fp.status == "converged"
    assert fp.certificate_ok
    assert fp.iterations == 33


def test_fixed_point_heavy_damping_hits_max_iter(fig1):
    sup = add_super_terminals(fig1)
    fp = fixed_point_capacity_iteration(sup, 4, damping=F(1, 1000))
    assert fp.status == "max-iter"
    assert fp.iterations == 200


def test_partition_report_requires_convergence(fig1):
    sup = add_super_terminals(fig1)
    fp = fixed_point_capacity_iteration(sup, 4, damping=F(1, 1000))
    with pytest.raises(PreconditionError):
        partition_report(fp, sup, 4)


def test_partition_report_fig1(fig1):
    sup = add_super_terminals(fig1)
    fp = fixed_point_capacity_iteration(sup, 4)
    part = partition_report(fp, sup, 4)
    assert part.certified_bound == F(1)
    assert part.bound_source == "b(S+1)"
    assert part.certified_bound >= F(fig1.total_supply(), 3)


# --- constructive orientations ------------------------------------------------


def test_orient_one_third_fig1(fig1):
    res = orient_one_third(fig1, 4)
    assert res.value == F(1250000917, 1000000917)
    assert res.value >= F(fig1.total_supply(), 3)
    assert res.flow.check_feasibility().ok
    assert res.fixed_point.status == "converged"
    assert res.partition.certified_bound == F(1)
    # the oriented flow really fits the claimed orientation
    oriented = apply_orientation(fig1, res.orientation)
    assert max_flow_over_time(oriented, 4, witness=False)[0] >= res.value


def test_orient_one_third_flow_lb():
    net = gen_flow_price_lb(8, F(1, 4), 1)
    res = orient_one_third(net, net.horizon)
    assert res.value == F(1532407495, 1000000791)
    assert res.value >= F(net.total_supply(), 3)
    assert res.partition.certified_bound == F(9, 8)
    assert res.partition.bound_source == "N'(S2)"


def test_orient_one_third_requires_full_delivery(fig1):
    # at T=3 the undirected optimum is 3/4 < B = 2
    with pytest.raises(PreconditionError):
        orient_one_third(fig1, 3)


def test_orient_one_third_divergence(fig1):
    with pytest.raises(FixedPointDivergence):
        orient_one_third(fig1, 4, damping=F(1, 1000))


def test_bicriteria_fig1(fig1):
    res = bicriteria_orient(fig1, 4)
    assert res.value == F(13, 8)
    assert res.value >= F(fig1.total_supply(), 2)
    assert res.flow.horizon == 8
    assert res.flow.check_feasibility().ok


def test_bicriteria_requires_full_delivery(fig1):
    with pytest.raises(PreconditionError):
        bicriteria_orient(fig1, 3)


# --- brute force price reports -------------------------------------------------


def test_brute_force_fig1_flow(fig1):
    rep = brute_force_best_orientation(fig1, "flow", jobs=1)
    assert rep.undirected == F(2)
    assert rep.oriented == F(5, 4)
    assert rep.witness_bits == 16
    assert rep.ratio == F(8, 5)
    oriented = apply_orientation(fig1, rep.witness)
    assert max_flow_over_time(oriented, 4, witness=False)[0] == rep.oriented


def test_brute_force_fig1_quickest(fig1):
    rep = brute_force_best_orientation(fig1, "quickest", jobs=1)
    assert rep.undirected == 4
    assert rep.oriented == 6
    assert rep.witness_bits == 16
    assert rep.ratio == F(3, 2)


def test_brute_force_flow_price_families():
    sink = brute_force_best_orientation(gen_single_sink_lb(8, F(1, 4)), "flow", jobs=1)
    assert (sink.undirected, sink.oriented, sink.witness_bits) == (F(2), F(5, 4), 0)
    assert sink.ratio == F(8, 5)
    source = brute_force_best_orientation(
        gen_single_source_lb(8, F(1, 4)), "flow", jobs=1
    )
    assert (source.undirected, source.oriented) == (F(2), F(2))
    assert source.ratio == F(1)


@pytest.mark.parametrize(
    "factory,bits",
    [
        (lambda: gen_time_price_single_sink(2, 2), 80),
        (lambda: gen_time_price_single_source(2, 2), 240),
        (lambda: gen_time_price_tree(2, 2), 48),
    ],
)
def test_brute_force_time_price_families(factory, bits):
    rep = brute_force_best_orientation(factory(), "quickest", jobs=1)
    assert rep.undirected == 3
    assert rep.oriented == 5
    assert rep.witness_bits == bits
    assert rep.ratio == F(5, 3)


def test_brute_force_unit_capacity_tree():
    rep = brute_force_best_orientation(gen_unit_capacity_tree(2, 2), "quickest", jobs=1)
    assert (rep.undirected, rep.oriented, rep.witness_bits) == (3, 5, 0)
    trivial = brute_force_best_orientation(
        gen_unit_capacity_tree(1, 2), "quickest", jobs=1
    )
    assert (trivial.undirected, trivial.oriented, trivial.ratio) == (3, 3, F(1))


def test_brute_force_cap(fig1):
    with pytest.raises(CapExceeded):
        brute_force_best_orientation(fig1, "flow", cap=3)


def test_brute_force_needs_horizon_for_flow():
    with pytest.raises(PreconditionError):
        brute_force_best_orientation(gen_unit_capacity_tree(2, 2), "flow")


# --- earliest arrival approximation checks -------------------------------------


def test_alpha_beta_checks(single_edge_directed):
    net = single_edge_directed(100)
    pattern = {0: F(0), 1: F(0), 2: F(2), 3: F(4)}
    fast = FlowOverTime(net, 3, {0: (Piece(0, 2, F(2)),)})
    assert check_alpha_time_approx(fast, pattern, 1)
    assert check_beta_value_approx(fast, pattern, 1)
    # half rate: one unit behind the pattern at all times, so beta 2 suffices
    half = FlowOverTime(net, 3, {0: (Piece(0, 2, F(1)),)})
    assert not check_beta_value_approx(half, pattern, 1)
    assert check_beta_value_approx(half, pattern, 2)
    # delayed start: empty at time 2, so only a time stretch rescues it
    slow = FlowOverTime(net, 3, {0: (Piece(1, 2, F(2)),)})
    assert not check_alpha_time_approx(slow, pattern, 1)
    assert check_alpha_time_approx(slow, pattern, 3)
    assert not check_beta_value_approx(slow, pattern, 2)


def test_eaf_experiment_frozen_report():
    rep = eaf_contraflow_experiment(gen_eaf(36, 4), 12)
    assert len(rep.rows) == 32
    assert rep.best_beta == F(74, 5)
    assert rep.best_beta_bits == 0
    assert rep.best_alpha == F(1)
    assert rep.best_alpha_bits == 4

    by_bits = {r.bits: r for r in rep.rows}
    assert by_bits[0].alpha == F(12, 5)
    assert not by_bits[0].alpha_attained
    assert by_bits[0].beta == F(74, 5)
    assert by_bits[1].beta == F(74, 3)
    assert math.isinf(by_bits[2].beta)
    # orientations using {v1,v2} toward v1 keep the early trickle alive
    assert sorted(r.bits for r in rep.rows if r.alpha is not None and r.alpha <= 2) == [
        4,
        6,
        12,
        14,
    ]
    # no orientation matches the undirected pattern by value: beta > 2 always
    assert all(r.beta > 2 for r in rep.rows)
