"""Orientation algorithms: brute force, fixed-point capacity tuning, bicriteria.

The constructive results work on a super-terminal network N': original graph
plus a super source s and super sink t joined to every terminal by a
zero-transit auxiliary edge.  Tuning the auxiliary capacities (a Brouwer
fixed-point argument; realized here as an honest Picard iteration) yields a
temporally repeated flow that respects the original balances and orients
every edge, losing at most two thirds of the flow value.  A simpler
averaging construction halves the value at twice the horizon.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    INF,
    Orientation,
    UEdge,
    UndirectedNetworkOverTime,
    apply_orientation,
    is_infinite,
    to_bidirected,
)
from .static_flow import StaticFlowResult, max_temporally_repeated_static_flow
from .temporal import (
    FlowOverTime,
    Piece,
    TemporallyRepeatedFlow,
    max_flow_over_time,
    quickest_transshipment_time,
    temporally_repeated_from_static,
)

DEFAULT_TOL = Fraction(1, 10**6)
DEFAULT_MAX_ITER = 200
DEFAULT_BRUTE_FORCE_CAP = 20
_QUANT = 10**9  # iterates are floored to this denominator to keep rationals small


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold."""


class CapExceeded(RuntimeError):
    """Enumeration size exceeds the configured guard."""


class FixedPointDivergence(RuntimeError):
    """The capacity iteration did not reach a certified fixed point."""


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("TEMPOFLOW_JOBS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# Super terminals


@dataclass(frozen=True)
class SuperTerminalNetwork:
    """N' = original network plus super terminals s and t.

    Original edges keep their ids; auxiliary edges follow, sources ascending
    then sinks ascending.  The original balances are kept for later
    enforcement; N' itself carries no balances (unbounded s and t).
    """

    network: UndirectedNetworkOverTime
    source: int
    sink: int
    original_balances: tuple[Fraction, ...]
    aux_edge_of: dict[int, int]  # original terminal node -> auxiliary edge id


def add_super_terminals(net: UndirectedNetworkOverTime) -> SuperTerminalNetwork:
    """Attach a super source/sink by infinite-capacity zero-transit edges."""
    names = list(net.names)
    s_name, t_name = "s*", "t*"
    while s_name in names:
        s_name += "*"
    while t_name in names:
        t_name += "*"
    s_id, t_id = len(names), len(names) + 1
    names += [s_name, t_name]
    edges = list(net.edges)
    aux_edge_of = {}
    for v in net.sources():
        aux_edge_of[v] = len(edges)
        edges.append(UEdge(len(edges), s_id, v, INF, 0))
    for v in net.sinks():
        aux_edge_of[v] = len(edges)
        edges.append(UEdge(len(edges), v, t_id, INF, 0))
    balances = tuple([Fraction(0)] * len(names))
    nprime = UndirectedNetworkOverTime(tuple(names), tuple(edges), balances, net.horizon)
    return SuperTerminalNetwork(nprime, s_id, t_id, net.balances, aux_edge_of)


def _with_aux_caps(sup: SuperTerminalNetwork, caps: dict[int, Fraction | float]) -> UndirectedNetworkOverTime:
    """Copy of N' with the auxiliary capacities set per terminal node."""
    net = sup.network
    edges = list(net.edges)
    for v, e_id in sup.aux_edge_of.items():
        e = edges[e_id]
        edges[e_id] = UEdge(e.id, e.u, e.v, caps[v], e.transit)
    return UndirectedNetworkOverTime(net.names, tuple(edges), net.balances, net.horizon)


def aux_capacity_bound(net: UndirectedNetworkOverTime) -> Fraction:
    """U = sum over sources of their incident edge capacities.

    An auxiliary capacity of U never binds for the static machinery, because
    a temporally repeated flow pushes through a terminal at most the combined
    rate of its real incident edges.  Infinite incident capacities contribute
    the total supply B instead: on the unit time grid no balance-respecting
    flow ever needs a higher rate than its node's total amount.
    """
    B = net.total_supply()
    total = Fraction(0)
    for v in net.sources():
        for e in net.incident(v):
            total += B if is_infinite(e.capacity) else e.capacity
    return total


# ---------------------------------------------------------------------------
# Fixed-point capacity iteration (Lemma 1)


@dataclass
class FixedPointResult:
    caps: dict[int, Fraction]  # terminal node -> auxiliary capacity u''
    U: Fraction
    flow: StaticFlowResult  # temporally repeated optimum at u'' on bidirected N'
    aux_totals: dict[int, Fraction]  # |f_v|: amount through v's auxiliary edge
    status: str  # "converged" | "max-iter"
    certificate_ok: bool
    iterations: int
    gap: Fraction


def _aux_flow_totals(sup: SuperTerminalNetwork, result: StaticFlowResult, T: int) -> dict[int, Fraction]:
    """Amount through each terminal's auxiliary edge in the repeated flow."""
    totals = {v: Fraction(0) for v in sup.aux_edge_of}
    for p in result.paths:
        amount = p.amount * (T - p.transit)
        totals[p.nodes[1]] += amount
        totals[p.nodes[-2]] += amount
    return totals


def _solve_nprime(sup: SuperTerminalNetwork, caps: dict[int, Fraction], T: int) -> StaticFlowResult:
    net = _with_aux_caps(sup, caps)
    return max_temporally_repeated_static_flow(
        to_bidirected(net), T, source=sup.source, sink=sup.sink
    )


def _quantize(x: Fraction) -> Fraction:
    return Fraction(math.floor(x * _QUANT), _QUANT)


def fixed_point_capacity_iteration(
    sup: SuperTerminalNetwork,
    T: int,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: Fraction = DEFAULT_TOL,
    damping: Fraction = Fraction(1),
) -> FixedPointResult:
    """Picard iteration of h(u)_v = min(U, |b_v| / |f_v(u)| * u_v) from u = U.

    |f_v(u)| is the amount sent through v's auxiliary edge by the
    deterministic temporally repeated maximum flow at capacities u; a zero
    auxiliary flow maps to U.  Iterates are floored to a fixed denominator
    grid so exact rationals stay small; convergence and the certificate are
    still checked exactly.  The certificate holds when every terminal either
    keeps capacity U or moves an amount within tol of its balance, and no
    terminal exceeds its balance by more than tol.
    """
    terminals = sorted(sup.aux_edge_of)
    bal = {v: abs(sup.original_balances[v]) for v in terminals}
    U = aux_capacity_bound(
        UndirectedNetworkOverTime(
            sup.network.names[:-2],
            sup.network.edges[: sup.network.m - len(terminals)],
            sup.original_balances,
            T,
        )
    )
    u = {v: U for v in terminals}
    flow = _solve_nprime(sup, u, T)
    totals = _aux_flow_totals(sup, flow, T)
    iterations = 0
    gap = Fraction(0)
    status = "max-iter"

    def certified() -> bool:
        return all(totals[v] <= bal[v] + tol for v in terminals) and all(
            u[v] >= U - tol or abs(totals[v] - bal[v]) <= tol for v in terminals
        )

    while True:
        h = {}
        for v in terminals:
            fv = totals[v]
            h[v] = U if fv == 0 else min(U, bal[v] / fv * u[v])
        gap = max((abs(h[v] - u[v]) for v in terminals), default=Fraction(0))
        if gap <= tol and certified():
            status = "converged"
            break
        if iterations >= max_iter:
            break
        u = {
            v: min(U, max(Fraction(0), _quantize((1 - damping) * u[v] + damping * h[v])))
            for v in terminals
        }
        flow = _solve_nprime(sup, u, T)
        totals = _aux_flow_totals(sup, flow, T)
        iterations += 1
    cert = certified()
    return FixedPointResult(
        caps=dict(u),
        U=U,
        flow=flow,
        aux_totals=totals,
        status=status,
        certificate_ok=cert,
        iterations=iterations,
        gap=gap,
    )


# ---------------------------------------------------------------------------
# Terminal partition and the B/3 certificate (Theorem 1)


@dataclass
class PartitionReport:
    s_plus_1: tuple[int, ...]
    s_plus_2: tuple[int, ...]
    s_minus_1: tuple[int, ...]
    s_minus_2: tuple[int, ...]
    b_s_plus_1: Fraction
    b_s_minus_1: Fraction
    value_s2: Fraction
    certified_bound: Fraction
    bound_source: str  # "b(S+1)" | "b(S-1)" | "N'(S2)"


def partition_report(
    fp: FixedPointResult, sup: SuperTerminalNetwork, T: int, tol: Fraction = DEFAULT_TOL
) -> PartitionReport:
    """Split terminals by finite vs effectively infinite tuned capacity.

    The certified lower bound on the tuned flow's value is the maximum of
    b(S+_1), b(S-_1) and the temporally repeated optimum that uses only the
    capacity-U terminals of both sides.
    """
    if fp.status != "converged" or not fp.certificate_ok:
        raise PreconditionError("partition requires a converged, certified fixed point")
    net0_balances = sup.original_balances
    sources = [v for v in sup.aux_edge_of if net0_balances[v] > 0]
    sinks = [v for v in sup.aux_edge_of if net0_balances[v] < 0]
    s_plus_2 = tuple(v for v in sorted(sources) if fp.caps[v] >= fp.U - tol)
    s_plus_1 = tuple(v for v in sorted(sources) if v not in s_plus_2)
    s_minus_2 = tuple(v for v in sorted(sinks) if fp.caps[v] >= fp.U - tol)
    s_minus_1 = tuple(v for v in sorted(sinks) if v not in s_minus_2)
    b1p = sum((net0_balances[v] for v in s_plus_1), Fraction(0))
    b1m = sum((-net0_balances[v] for v in s_minus_1), Fraction(0))
    # N'(S+2, S-2): auxiliary edges only to the capacity-U terminals, at U.
    caps = {v: fp.U for v in sup.aux_edge_of}
    for v in s_plus_1 + s_minus_1:
        caps[v] = Fraction(0)
    value_s2 = _solve_nprime(sup, caps, T).value
    certified = max(b1p, b1m, value_s2)
    if certified == b1p:
        source = "b(S+1)"
    elif certified == b1m:
        source = "b(S-1)"
    else:
        source = "N'(S2)"
    return PartitionReport(
        s_plus_1, s_plus_2, s_minus_1, s_minus_2, b1p, b1m, value_s2, certified, source
    )


# ---------------------------------------------------------------------------
# Orientation extraction


def orientation_from_flow(x, network: UndirectedNetworkOverTime) -> Orientation:
    """Orient each edge along its (single) used direction.

    x may be a StaticFlowResult on to_bidirected(network), a
    TemporallyRepeatedFlow, or a FlowOverTime with reverse-flagged pieces.
    Unused edges are oriented from their lower to their higher node id.
    Bidirectional use violates the precondition and raises.
    """
    used: dict[int, set[bool]] = {}
    if isinstance(x, StaticFlowResult):
        for a, f in enumerate(x.arc_flow):
            if f > 0:
                used.setdefault(a // 2, set()).add(a % 2 == 1)
    else:
        flow = x.flow if isinstance(x, TemporallyRepeatedFlow) else x
        for e_id, ps in flow.pieces.items():
            for p in ps:
                if p.rate > 0:
                    used.setdefault(e_id, set()).add(p.reverse)
    arcs = []
    for e in network.edges:
        dirs = used.get(e.id, set())
        if len(dirs) > 1:
            raise PreconditionError(f"edge {e.id} is used in both directions")
        if dirs == {False}:
            arcs.append((e.u, e.v))
        elif dirs == {True}:
            arcs.append((e.v, e.u))
        else:
            lo, hi = sorted((e.u, e.v))
            arcs.append((lo, hi))
    return Orientation(tuple(arcs))


def _cut_to_oriented(
    flow_pieces: dict[int, tuple[Piece, ...]],
    net: UndirectedNetworkOverTime,
    orientation: Orientation,
    horizon: int,
    scale: Fraction = Fraction(1),
) -> FlowOverTime:
    """Restrict an N'-flow to the original edges, re-keyed to the oriented net."""
    oriented = apply_orientation(net, orientation)
    pieces: dict[int, tuple[Piece, ...]] = {}
    for e in net.edges:
        ps = flow_pieces.get(e.id)
        if not ps:
            continue
        flipped = orientation.arcs[e.id] != (e.u, e.v)
        out = []
        for p in ps:
            assert p.reverse == flipped, "flow direction disagrees with the orientation"
            out.append(Piece(p.start, p.end, p.rate * scale, False))
        pieces[e.id] = tuple(out)
    return FlowOverTime(oriented, horizon, pieces)


@dataclass
class OrientationResult:
    orientation: Orientation
    flow: FlowOverTime
    value: Fraction
    fixed_point: FixedPointResult | None = None
    partition: PartitionReport | None = None


def orient_one_third(
    net: UndirectedNetworkOverTime,
    T: int,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: Fraction = DEFAULT_TOL,
    damping: Fraction = Fraction(1),
) -> OrientationResult:
    """Orientation whose flow value keeps at least a third of the supply.

    Requires an instance whose undirected maximum flow over time at T equals
    the total supply B.  Tunes auxiliary capacities to a fixed point, takes
    the resulting balance-respecting temporally repeated flow, and reads the
    orientation off its single-direction edge usage.
    """
    B = net.total_supply()
    und_value = max_flow_over_time(net, T, witness=False)[0]
    if und_value != B:
        raise PreconditionError(
            f"undirected instance sends {und_value} at horizon {T}, not its supply {B}"
        )
    sup = add_super_terminals(net)
    fp = fixed_point_capacity_iteration(sup, T, max_iter=max_iter, tol=tol, damping=damping)
    if fp.status != "converged" or not fp.certificate_ok:
        raise FixedPointDivergence(
            f"capacity iteration stopped with status {fp.status} after "
            f"{fp.iterations} iterations (gap {float(fp.gap):.2e}); no certificate"
        )
    part = partition_report(fp, sup, T, tol=tol)
    assert fp.flow.value + tol * len(sup.aux_edge_of) >= part.certified_bound, (
        "tuned flow value fell below its own certificate"
    )
    nprime = sup.network
    tr = temporally_repeated_from_static(fp.flow, nprime, T)
    full = orientation_from_flow(fp.flow, nprime)
    orientation = Orientation(full.arcs[: net.m])
    # the certificate allows a tol-sized balance overshoot; scale it away
    scale = min(
        (
            abs(sup.original_balances[v]) / t
            for v, t in fp.aux_totals.items()
            if t > abs(sup.original_balances[v])
        ),
        default=Fraction(1),
    )
    flow = _cut_to_oriented(
        {e: ps for e, ps in tr.flow.pieces.items() if e < net.m},
        net,
        orientation,
        T,
        scale=scale,
    )
    value = fp.flow.value * scale
    report = flow.check_feasibility()
    assert report.ok, f"one-third flow infeasible: {report.problems[:3]}"
    assert flow.value == value, "cut flow value disagrees with the scaled optimum"
    return OrientationResult(orientation, flow, value, fp, part)


# ---------------------------------------------------------------------------
# Bicriteria orientation (Theorem 4)


def bicriteria_orient(net: UndirectedNetworkOverTime, T: int) -> OrientationResult:
    """Orientation sending at least B/2 within horizon 2T.

    Builds N' with auxiliary capacities b_v/T (their demand analogues for
    sinks) and horizon 2T, computes the temporally repeated optimum, cuts
    the auxiliary edges and halves the flow.  The result respects the
    original balances and uses every edge in one direction; all of this is
    re-checked before returning.
    """
    B = net.total_supply()
    und_value = max_flow_over_time(net, T, witness=False)[0]
    if und_value != B:
        raise PreconditionError(
            f"undirected instance sends {und_value} at horizon {T}, not its supply {B}"
        )
    sup = add_super_terminals(net)
    caps = {v: abs(sup.original_balances[v]) / T for v in sup.aux_edge_of}
    result = _solve_nprime(sup, caps, 2 * T)
    tr = temporally_repeated_from_static(result, sup.network, 2 * T)
    full = orientation_from_flow(result, sup.network)
    orientation = Orientation(full.arcs[: net.m])
    flow = _cut_to_oriented(
        {e: ps for e, ps in tr.flow.pieces.items() if e < net.m},
        net,
        orientation,
        2 * T,
        scale=Fraction(1, 2),
    )
    value = result.value / 2
    assert value >= Fraction(B, 2), "averaged flow lost more than half the supply"
    report = flow.check_feasibility()
    assert report.ok, f"bicriteria flow infeasible: {report.problems[:3]}"
    assert flow.value == value, "cut flow value disagrees with the halved optimum"
    return OrientationResult(orientation, flow, value)


# ---------------------------------------------------------------------------
# Brute force and price reports


@dataclass
class PriceReport:
    objective: str  # "flow" | "quickest"
    undirected: Fraction | float
    oriented: Fraction | float
    witness: Orientation
    witness_bits: int
    ratio: Fraction | float
    horizon: int | None = None

    def __post_init__(self):
        assert self.ratio == 1 or self.ratio > 1


def _eval_flow(net: UndirectedNetworkOverTime, bits: int, T: int) -> Fraction:
    oriented = apply_orientation(net, Orientation.from_bits(net, bits))
    return max_flow_over_time(oriented, T, witness=False)[0]


def _eval_quickest(net: UndirectedNetworkOverTime, bits: int):
    oriented = apply_orientation(net, Orientation.from_bits(net, bits))
    return quickest_transshipment_time(oriented)


def _chunk_worker(args):
    net, objective, T, start, stop = args
    best_bits = None
    best = None
    for bits in range(start, stop):
        if objective == "flow":
            val = _eval_flow(net, bits, T)
            better = best is None or val > best
        else:
            val = _eval_quickest(net, bits)
            better = best is None or val < best
        if better:
            best, best_bits = val, bits
    return best, best_bits


def _ratio(undirected, oriented, objective: str):
    if objective == "flow":
        hi, lo = undirected, oriented
    else:
        hi, lo = oriented, undirected
    if hi == lo:
        return Fraction(1)
    if is_infinite(hi):
        return INF
    if lo == 0:
        return INF
    return Fraction(hi) / Fraction(lo)


def brute_force_best_orientation(
    net: UndirectedNetworkOverTime,
    objective: str = "flow",
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
    jobs: int | None = None,
) -> PriceReport:
    """Exact optimum over all 2^m orientations, with deterministic witness.

    The witness is the lexicographically smallest optimal orientation in the
    bitmask encoding (bit e set = edge e flipped against its stored order).
    objective "flow" maximizes the value at the network's horizon; objective
    "quickest" minimizes the quickest transshipment time.
    """
    if objective not in ("flow", "quickest"):
        raise PreconditionError(f"unknown objective {objective!r}")
    if net.m > cap:
        raise CapExceeded(f"{net.m} edges exceed the enumeration cap of {cap}")
    T = net.horizon
    if objective == "flow":
        if T is None:
            raise PreconditionError("flow objective requires a network horizon")
        undirected = max_flow_over_time(net, T, witness=False)[0]
    else:
        undirected = quickest_transshipment_time(net)
    count = 1 << net.m
    jobs = default_jobs() if jobs is None else max(1, jobs)
    jobs = min(jobs, count)
    if jobs == 1:
        best, best_bits = _chunk_worker((net, objective, T, 0, count))
    else:
        step = -(-count // jobs)
        tasks = [
            (net, objective, T, lo, min(lo + step, count)) for lo in range(0, count, step)
        ]
        best, best_bits = None, None
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for val, bits in pool.map(_chunk_worker, tasks):
                if bits is None:
                    continue
                if best is None or (objective == "flow" and val > best) or (
                    objective == "quickest" and val < best
                ):
                    best, best_bits = val, bits
    witness = Orientation.from_bits(net, best_bits)
    return PriceReport(
        objective=objective,
        undirected=undirected,
        oriented=best,
        witness=witness,
        witness_bits=best_bits,
        ratio=_ratio(undirected, best, objective),
        horizon=T,
    )


# ---------------------------------------------------------------------------
# Earliest arrival approximation checks


def check_alpha_time_approx(f: FlowOverTime, pattern: dict[int, Fraction], alpha) -> bool:
    """True iff |f|_theta >= p(floor(theta/alpha)) at every integer theta."""
    if alpha < 1:
        raise PreconditionError("alpha must be at least 1")
    T = f.horizon
    for theta in range(T + 1):
        key = int(Fraction(theta) / alpha)
        if key not in pattern:
            raise PreconditionError(f"pattern does not cover time {key}")
        if f.value_at(theta) < pattern[key]:
            return False
    return True


def check_beta_value_approx(f: FlowOverTime, pattern: dict[int, Fraction], beta) -> bool:
    """True iff |f|_theta >= p(theta)/beta at every integer theta."""
    if beta < 1:
        raise PreconditionError("beta must be at least 1")
    T = f.horizon
    for theta in range(T + 1):
        if theta not in pattern:
            raise PreconditionError(f"pattern does not cover time {theta}")
        if f.value_at(theta) < Fraction(pattern[theta]) / beta:
            return False
    return True


def _alpha_beta_frontier(oriented_pattern: dict[int, Fraction], pattern: dict[int, Fraction]):
    """Minimal alpha and beta for which the oriented value curve dominates.

    Works against the pointwise envelope q(theta) of per-horizon optima: if
    even the envelope fails a bound, no single flow in that orientation can
    meet it.  alpha threshold: the least alpha >= 1 with
    q(theta) >= p(floor(theta/alpha)) for all theta; when no finite alpha
    attains it exactly, the infimum is reported with attained=False
    (feasible for every alpha strictly above it).  beta threshold:
    max_theta p(theta)/q(theta), infinite if q vanishes where p does not.
    """
    thetas = sorted(oriented_pattern)
    alpha_inf = Fraction(1)
    attainable = True
    for theta in thetas:
        q = oriented_pattern[theta]
        # largest pattern index whose requirement q still meets
        m = -1
        for j in sorted(pattern):
            if pattern[j] <= q:
                m = j
            else:
                break
        if m >= theta:
            continue  # alpha = 1 suffices at this theta
        if m < 0:
            attainable = False
            alpha_inf = INF
            break
        alpha_inf = max(alpha_inf, Fraction(theta, m + 1))
    beta_min: Fraction | float = Fraction(1)
    for theta in thetas:
        p = pattern[theta]
        q = oriented_pattern[theta]
        if p == 0:
            continue
        if q == 0:
            beta_min = INF
            break
        beta_min = max(beta_min, p / q)
    if is_infinite(alpha_inf):
        return alpha_inf, False, beta_min
    # the threshold itself may or may not pass the floor-based check
    attained = all(
        oriented_pattern[theta] >= pattern[int(Fraction(theta) / alpha_inf)]
        for theta in thetas
    )
    return alpha_inf, attained, beta_min


@dataclass
class EafRow:
    bits: int
    pattern: dict[int, Fraction]
    alpha: Fraction | float
    alpha_attained: bool
    beta: Fraction | float


@dataclass
class EafReport:
    undirected_pattern: dict[int, Fraction]
    rows: list[EafRow]
    best_alpha: Fraction | float
    best_alpha_bits: int
    best_beta: Fraction | float
    best_beta_bits: int


def _eaf_worker(args):
    net, T_max, start, stop = args
    from .temporal import earliest_arrival_pattern

    rows = []
    for bits in range(start, stop):
        oriented = apply_orientation(net, Orientation.from_bits(net, bits))
        rows.append((bits, earliest_arrival_pattern(oriented, T_max)))
    return rows


def eaf_contraflow_experiment(
    net: UndirectedNetworkOverTime,
    T_max: int,
    cap: int = DEFAULT_BRUTE_FORCE_CAP,
    jobs: int | None = None,
) -> EafReport:
    """Per-orientation earliest-arrival approximation table.

    For every orientation, computes its value curve q(theta) for theta up to
    T_max and the minimal alpha (time approximation) and beta (value
    approximation) against the undirected earliest arrival pattern.
    """
    from .temporal import earliest_arrival_pattern

    if net.m > cap:
        raise CapExceeded(f"{net.m} edges exceed the enumeration cap of {cap}")
    pattern = earliest_arrival_pattern(net, T_max)
    count = 1 << net.m
    jobs = default_jobs() if jobs is None else max(1, jobs)
    jobs = min(jobs, count)
    if jobs == 1:
        raw = _eaf_worker((net, T_max, 0, count))
    else:
        step = -(-count // jobs)
        tasks = [(net, T_max, lo, min(lo + step, count)) for lo in range(0, count, step)]
        raw = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for chunk in pool.map(_eaf_worker, tasks):
                raw.extend(chunk)
    rows = []
    for bits, q in raw:
        alpha, attained, beta = _alpha_beta_frontier(q, pattern)
        rows.append(EafRow(bits, q, alpha, attained, beta))
    best_alpha = min((r.alpha for r in rows), default=INF)
    best_alpha_bits = next(r.bits for r in rows if r.alpha == best_alpha)
    best_beta = min((r.beta for r in rows), default=INF)
    best_beta_bits = next(r.bits for r in rows if r.beta == best_beta)
    return EafReport(pattern, rows, best_alpha, best_alpha_bits, best_beta, best_beta_bits)
