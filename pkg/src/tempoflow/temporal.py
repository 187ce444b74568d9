"""Exact flow-over-time oracles.

The oracle is a unit-step time expansion: with integer transit times and an
integer horizon, a maximum flow over time is attained by rates that are
constant on unit intervals, so a static max-flow over the expanded graph is
exact.  Undirected networks first pass through gadget_transform, which
realises the shared per-instant capacity of an undirected edge.

All capacities are scaled to integers before running the max-flow, so the
computation is exact; infinite capacities are replaced by the total supply,
which no single arc can exceed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .model import (
    DEdge,
    DirectedNetworkOverTime,
    Network,
    UndirectedNetworkOverTime,
    ValidationError,
    gadget_transform,
    is_infinite,
    to_bidirected,
    validate,
)
from .static_flow import StaticFlowResult, static_max_flow_value


@dataclass(frozen=True)
class Piece:
    """Constant rate on [start, end); reverse marks head-to-tail use of an
    undirected edge (always False on directed networks)."""

    start: int
    end: int
    rate: Fraction
    reverse: bool = False


@dataclass
class FeasibilityReport:
    ok: bool
    problems: list[str]


class FlowOverTime:
    """Piecewise-constant flow rates per edge, with the owning network."""

    def __init__(self, network: Network, horizon: int, pieces: dict[int, tuple[Piece, ...]]):
        self.network = network
        self.horizon = horizon
        self.pieces = {e: tuple(ps) for e, ps in pieces.items() if ps}

    def rate_total(self, edge_id: int, theta) -> Fraction:
        """Sum of both direction rates during [theta, theta+1)."""
        total = Fraction(0)
        for p in self.pieces.get(edge_id, ()):
            if p.start <= theta < p.end:
                total += p.rate
        return total

    def _cumulative(self, edge_id: int, theta, reverse: bool, shift: int) -> Fraction:
        """Flow through the edge in the given direction up to time theta,
        measured at departure (shift=0) or arrival (shift=transit)."""
        total = Fraction(0)
        for p in self.pieces.get(edge_id, ()):
            if p.reverse != reverse:
                continue
            lo, hi = p.start + shift, p.end + shift
            span = min(theta, hi) - lo
            if span > 0:
                total += p.rate * span
        return total

    def excess(self, v: int, theta) -> Fraction:
        """Flow that has reached v minus flow that has left it by theta."""
        net = self.network
        total = Fraction(0)
        undirected = isinstance(net, UndirectedNetworkOverTime)
        for e in net.edges:
            tail, head = (e.u, e.v) if undirected else (e.tail, e.head)
            if v == tail:
                total -= self._cumulative(e.id, theta, False, 0)
                if undirected:
                    total += self._cumulative(e.id, theta, True, e.transit)
            if v == head:
                total += self._cumulative(e.id, theta, False, e.transit)
                if undirected:
                    total -= self._cumulative(e.id, theta, True, 0)
        return total

    def value_at(self, theta) -> Fraction:
        """Flow that has reached the sinks by theta."""
        if not (0 <= theta <= self.horizon):
            raise ValidationError(f"theta {theta} outside [0, {self.horizon}]")
        return sum((self.excess(v, theta) for v in self.network.sinks()), Fraction(0))

    @property
    def value(self) -> Fraction:
        return self.value_at(self.horizon)

    def check_feasibility(self, network: Network | None = None) -> FeasibilityReport:
        """Verify capacities, the tail condition, and all excess constraints.

        Rates are piecewise constant with integer breakpoints and transits
        are integers, so excess is piecewise linear with integer breakpoints;
        checking the interval constraints at integer times is exact.
        """
        net = network if network is not None else self.network
        T = self.horizon
        problems: list[str] = []
        undirected = isinstance(net, UndirectedNetworkOverTime)
        for e_id, ps in self.pieces.items():
            if not (0 <= e_id < net.m):
                problems.append(f"flow on unknown edge {e_id}")
                continue
            e = net.edges[e_id]
            for p in ps:
                if p.rate < 0:
                    problems.append(f"edge {e_id}: negative rate on [{p.start},{p.end})")
                if not (0 <= p.start < p.end <= T):
                    problems.append(f"edge {e_id}: piece [{p.start},{p.end}) outside [0,{T}]")
                if p.end > T - e.transit:
                    problems.append(
                        f"edge {e_id}: flow enters during [{p.start},{p.end}) "
                        f"but must be 0 from {T - e.transit} on"
                    )
                if p.reverse and not undirected:
                    problems.append(f"edge {e_id}: reverse piece on a directed edge")
            for theta in range(T):
                total = self.rate_total(e_id, theta)
                if not is_infinite(e.capacity) and total > e.capacity:
                    problems.append(
                        f"edge {e_id}: rate {total} exceeds capacity {e.capacity} at {theta}"
                    )
        for v in range(net.n):
            b = net.balances[v]
            for theta in range(T + 1):
                x = self.excess(v, theta)
                if b > 0:
                    if not (-b <= x <= 0):
                        problems.append(f"source {v}: excess {x} at {theta} outside [-{b},0]")
                elif b < 0:
                    if not (0 <= x <= -b):
                        problems.append(f"sink {v}: excess {x} at {theta} outside [0,{-b}]")
                else:
                    if x < 0:
                        problems.append(f"node {v}: negative excess {x} at {theta}")
                    if theta == T and x != 0:
                        problems.append(f"node {v}: excess {x} left at horizon")
        return FeasibilityReport(not problems, problems)


def flow_value_at(f: FlowOverTime, theta) -> Fraction:
    return f.value_at(theta)


def excess(f: FlowOverTime, v: int, theta) -> Fraction:
    return f.excess(v, theta)


def check_feasibility(f: FlowOverTime, network: Network | None = None) -> FeasibilityReport:
    return f.check_feasibility(network)


# ---------------------------------------------------------------------------
# Time expansion


@dataclass
class TimeExpandedGraph:
    """Static expansion of a directed network over T unit steps.

    Node (v, theta) has index theta*n + v (layer-major); the super source
    and super sink follow at n*T and n*T+1.  Arcs are listed movement arcs
    first (by layer, then edge id), then holdover arcs (by layer, then
    node), then hookup arcs (supplies ascending, then demands ascending).
    """

    n_base: int
    horizon: int
    source: int
    sink: int
    tails: list[int] = field(default_factory=list)
    heads: list[int] = field(default_factory=list)
    caps: list = field(default_factory=list)
    kinds: list[str] = field(default_factory=list)  # "move" | "hold" | "hookup"
    meta: list[tuple] = field(default_factory=list)

    @property
    def node_count(self) -> int:
        return self.n_base * self.horizon + 2

    @property
    def arc_count(self) -> int:
        return len(self.tails)

    def index(self, v: int, theta: int) -> int:
        return theta * self.n_base + v


def build_time_expanded(net: DirectedNetworkOverTime, T: int) -> TimeExpandedGraph:
    if not isinstance(T, int) or T < 0:
        raise ValidationError("horizon must be a nonnegative integer")
    for e in net.edges:
        if not isinstance(e.transit, int):
            raise ValidationError(f"edge {e.id} has a non-integer transit")
    n = net.n
    g = TimeExpandedGraph(n_base=n, horizon=T, source=n * T, sink=n * T + 1)

    def add(u, v, cap, kind, meta):
        g.tails.append(u)
        g.heads.append(v)
        g.caps.append(cap)
        g.kinds.append(kind)
        g.meta.append(meta)

    for theta in range(T):
        for e in net.edges:
            if theta + e.transit <= T - 1:
                add(g.index(e.tail, theta), g.index(e.head, theta + e.transit),
                    e.capacity, "move", (e.id, theta))
    for theta in range(T - 1):
        for v in range(n):
            add(g.index(v, theta), g.index(v, theta + 1), math.inf, "hold", (v, theta))
    if T > 0:
        for v, b in enumerate(net.balances):
            if b > 0:
                add(g.source, g.index(v, 0), b, "hookup", (v, "supply"))
        for v, b in enumerate(net.balances):
            if b < 0:
                add(g.index(v, T - 1), g.sink, -b, "hookup", (v, "demand"))
    terminals = len(net.sources()) + len(net.sinks())
    assert g.arc_count <= net.m * T + n * max(T - 1, 0) + terminals
    return g


class _Dinic:
    """Standard Dinic max-flow on integer capacities."""

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add_edge(self, u: int, v: int, c: int) -> int:
        i = len(self.to)
        self.to.append(v)
        self.cap.append(c)
        self.adj[u].append(i)
        self.to.append(u)
        self.cap.append(0)
        self.adj[v].append(i + 1)
        return i

    def max_flow(self, s: int, t: int) -> int:
        flow = 0
        while True:
            level = [-1] * self.n
            level[s] = 0
            queue = [s]
            for v in queue:
                for i in self.adj[v]:
                    if self.cap[i] > 0 and level[self.to[i]] < 0:
                        level[self.to[i]] = level[v] + 1
                        queue.append(self.to[i])
            if level[t] < 0:
                return flow
            it = [0] * self.n
            nodes = [s]
            path: list[int] = []
            while True:
                v = nodes[-1]
                if v == t:
                    delta = min(self.cap[i] for i in path)
                    for i in path:
                        self.cap[i] -= delta
                        self.cap[i ^ 1] += delta
                    flow += delta
                    # retreat to the tail of the first saturated arc
                    cut = next(k for k, i in enumerate(path) if self.cap[i] == 0)
                    del nodes[cut + 1:]
                    del path[cut:]
                    continue
                advanced = False
                while it[v] < len(self.adj[v]):
                    i = self.adj[v][it[v]]
                    w = self.to[i]
                    if self.cap[i] > 0 and level[w] == level[v] + 1:
                        nodes.append(w)
                        path.append(i)
                        advanced = True
                        break
                    it[v] += 1
                if not advanced:
                    level[v] = -1  # dead for the rest of this phase
                    if v == s:
                        break
                    nodes.pop()
                    path.pop()
                    it[nodes[-1]] += 1  # skip the arc that led to the dead node


def _scaled_expansion(net: DirectedNetworkOverTime, g: TimeExpandedGraph):
    """Integer-capacity Dinic instance for the expansion, plus the scale.

    Infinite capacities become the total supply: no arc can ever carry more,
    so the substitution is exact.
    """
    denoms = [net.balances[v].denominator for v in range(net.n) if net.balances[v] != 0]
    for e in net.edges:
        if not is_infinite(e.capacity):
            denoms.append(Fraction(e.capacity).denominator)
    scale = math.lcm(*denoms) if denoms else 1
    supply_int = int(net.total_supply() * scale)
    dinic = _Dinic(g.node_count)
    arc_ids = []
    caps_int = []
    for a in range(g.arc_count):
        c = g.caps[a]
        ci = supply_int if is_infinite(c) else int(Fraction(c) * scale)
        caps_int.append(ci)
        arc_ids.append(dinic.add_edge(g.tails[a], g.heads[a], ci))
    return dinic, arc_ids, caps_int, scale


def _movement_flows(g, dinic, arc_ids, caps_int, scale):
    """Per (edge id, layer) rates from the solved expansion."""
    orig = {}
    for a in range(g.arc_count):
        if g.kinds[a] == "move":
            e_id, theta = g.meta[a]
            sent = caps_int[a] - dinic.cap[arc_ids[a]]
            if sent:
                orig[(e_id, theta)] = Fraction(sent, scale)
    return orig


def _pieces_from_rates(rates_by_theta: dict[int, Fraction], reverse: bool) -> list[Piece]:
    """Merge equal consecutive unit-interval rates into pieces."""
    out: list[Piece] = []
    for theta in sorted(rates_by_theta):
        r = rates_by_theta[theta]
        if r == 0:
            continue
        if out and out[-1].end == theta and out[-1].rate == r:
            out[-1] = Piece(out[-1].start, theta + 1, r, reverse)
        else:
            out.append(Piece(theta, theta + 1, r, reverse))
    return out


def _gadget_witness(unet: UndirectedNetworkOverTime, T: int, move: dict) -> dict[int, tuple[Piece, ...]]:
    """Map gadget movement flows back to directed use of the original edges.

    Entry arcs record which endpoint fed the middle arc; waiting inside the
    gadget is reattributed to waiting at the entry node (first-in-first-out),
    which is storage at that node and changes no excess constraint.
    """
    pieces: dict[int, tuple[Piece, ...]] = {}
    for e in unet.edges:
        avail_f = Fraction(0)
        avail_r = Fraction(0)
        fwd: dict[int, Fraction] = {}
        rev: dict[int, Fraction] = {}
        for theta in range(T):
            avail_f += move.get((5 * e.id, theta), Fraction(0))
            avail_r += move.get((5 * e.id + 1, theta), Fraction(0))
            q = move.get((5 * e.id + 2, theta), Fraction(0))
            take_f = min(q, avail_f)
            take_r = q - take_f
            assert take_r <= avail_r, "gadget entries cannot cover the middle arc"
            avail_f -= take_f
            avail_r -= take_r
            if take_f:
                fwd[theta] = take_f
            if take_r:
                rev[theta] = take_r
        assert avail_f == 0 and avail_r == 0, "flow left inside a gadget"
        ps = _pieces_from_rates(fwd, False) + _pieces_from_rates(rev, True)
        if ps:
            pieces[e.id] = tuple(ps)
    return pieces


def max_flow_over_time(net: Network, T: int, witness: bool = True):
    """Exact maximum flow over time value, with a checkable witness.

    Undirected networks are interpreted via gadget_transform, so an edge's
    two directions share its capacity at every instant.  Returns
    (value, FlowOverTime) — the witness is None when witness=False.
    """
    problems = validate(net)
    if problems:
        raise ValidationError("; ".join(problems))
    if not isinstance(T, int) or T < 0:
        raise ValidationError("horizon must be a nonnegative integer")
    undirected = isinstance(net, UndirectedNetworkOverTime)
    if T == 0 or net.total_supply() == 0:
        return Fraction(0), (FlowOverTime(net, T, {}) if witness else None)
    dnet = gadget_transform(net) if undirected else net
    g = build_time_expanded(dnet, T)
    dinic, arc_ids, caps_int, scale = _scaled_expansion(dnet, g)
    value = Fraction(dinic.max_flow(g.source, g.sink), scale)
    if not witness:
        return value, None
    move = _movement_flows(g, dinic, arc_ids, caps_int, scale)
    if undirected:
        pieces = _gadget_witness(net, T, move)
    else:
        pieces = {}
        for e in net.edges:
            rates = {th: r for (eid, th), r in move.items() if eid == e.id}
            ps = _pieces_from_rates(rates, False)
            if ps:
                pieces[e.id] = tuple(ps)
    flow = FlowOverTime(net, T, pieces)
    assert flow.value == value, "witness value disagrees with the oracle"
    return value, flow


# ---------------------------------------------------------------------------
# Temporally repeated flows


@dataclass
class TemporallyRepeatedFlow:
    paths: list
    horizon: int
    flow: FlowOverTime
    value: Fraction


def temporally_repeated_from_static(
    x: StaticFlowResult, network: Network, T: int
) -> TemporallyRepeatedFlow:
    """Send x_P along each decomposition path P during [0, T - tau_P).

    network is the original network; for an undirected one, x must have been
    computed on to_bidirected(network), whose twin arc ids 2e / 2e+1 map back
    to edge e forward / reverse.
    """
    undirected = isinstance(network, UndirectedNetworkOverTime)
    intervals: dict[tuple[int, bool], list[tuple[int, int, Fraction]]] = {}
    value = Fraction(0)
    for p in x.paths:
        if p.transit >= T:
            raise ValidationError(f"decomposition path with transit {p.transit} >= horizon {T}")
        span = T - p.transit
        value += p.amount * span
        offset = 0
        for a in p.arcs:
            if undirected:
                key = (a // 2, a % 2 == 1)
                tau = network.edges[a // 2].transit
            else:
                key = (a, False)
                tau = network.edges[a].transit
            intervals.setdefault(key, []).append((offset, offset + span, p.amount))
            offset += tau
    pieces: dict[int, list[Piece]] = {}
    for (e_id, rev), ivs in sorted(intervals.items()):
        points = sorted({q for s, e, _ in ivs for q in (s, e)})
        for a, b in zip(points, points[1:]):
            r = sum((rate for s, e, rate in ivs if s <= a and b <= e), Fraction(0))
            if r == 0:
                continue
            prior = pieces.setdefault(e_id, [])
            if prior and prior[-1].reverse == rev and prior[-1].end == a and prior[-1].rate == r:
                prior[-1] = Piece(prior[-1].start, b, r, rev)
            else:
                prior.append(Piece(a, b, r, rev))
    flow = FlowOverTime(network, T, {e: tuple(ps) for e, ps in pieces.items()})
    if x.value is not None:
        assert value == x.value, "temporally repeated value disagrees with the static objective"
    return TemporallyRepeatedFlow(list(x.paths), T, flow, value)


# ---------------------------------------------------------------------------
# Quickest transshipment and arrival patterns


def _oracle_value(net: Network, T: int) -> Fraction:
    # The time expansion is the only oracle that treats supplies and demands
    # as bounds on total amounts; the static reduction bounds rates instead.
    return max_flow_over_time(net, T, witness=False)[0]


def quickest_transshipment_time(net: Network):
    """Minimal integer T fulfilling all supplies and demands, or math.inf.

    A continuous optimum lies in (T-1, T]; generators are parameterized so
    optima are integral.  Exponential search brackets the answer, binary
    search pins it down.
    """
    B = net.total_supply()
    if B == 0:
        return 0
    dnet = to_bidirected(net) if isinstance(net, UndirectedNetworkOverTime) else net
    # Structural feasibility: amounts are unbounded over a long enough horizon,
    # so only zero-capacity edges restrict which demands a supply can reach.
    reach = DirectedNetworkOverTime(
        dnet.names,
        tuple(
            DEdge(e.id, e.tail, e.head, math.inf if e.capacity > 0 else Fraction(0), 0)
            for e in dnet.edges
        ),
        dnet.balances,
        None,
    )
    if static_max_flow_value(reach) < B:
        return math.inf
    hi = 1
    while _oracle_value(net, hi) < B:
        hi *= 2
    lo = hi // 2  # value at lo (if lo >= 1) is known to be < B
    if hi == 1:
        return 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _oracle_value(net, mid) < B:
            lo = mid
        else:
            hi = mid
    return hi


def earliest_arrival_pattern(net: Network, T_max: int) -> dict[int, Fraction]:
    """p(theta) = maximum flow-over-time value at horizon theta, theta <= T_max."""
    if T_max < 0:
        raise ValidationError("T_max must be nonnegative")
    pattern: dict[int, Fraction] = {}
    prev = Fraction(0)
    for theta in range(T_max + 1):
        v = _oracle_value(net, theta) if theta else Fraction(0)
        assert v >= prev, "arrival pattern must be nondecreasing"
        pattern[theta] = v
        prev = v
    return pattern
