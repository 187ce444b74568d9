"""Deterministic static min-cost flow machinery.

A flow over time with fixed horizon T reduces to a static problem: maximise
T*|x| - cost(x) over static source-sink flows x, where cost is total transit
(Ford and Fulkerson's temporally repeated flows).  The optimum is reached by
augmenting along shortest transit paths while their length stays below T.

Everything here uses exact Fraction arithmetic and is fully deterministic:
Dijkstra distances are unique, and the augmenting path among all shortest
ones is the one found by depth-first search expanding forward residual arcs
in ascending arc-id order before reverse residual arcs in ascending order.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .model import DirectedNetworkOverTime, ValidationError

_INF = float("inf")


@dataclass(frozen=True)
class PathFlow:
    """One source-sink chain of a flow decomposition."""

    nodes: tuple[int, ...]
    arcs: tuple[int, ...]
    amount: Fraction
    transit: int


@dataclass
class StaticFlowResult:
    arc_flow: list[Fraction]
    static_value: Fraction
    static_cost: Fraction
    horizon: int | None
    value: Fraction | None  # horizon * static_value - static_cost when horizon given
    paths: list[PathFlow]


class _Residual:
    """Arc-indexed residual network.

    With source=None, super terminals are appended: arc ids 0..m-1 are the
    network's own arcs, then one hookup arc per supply node (capacity b_v,
    transit 0) in ascending node order, then one per demand node.  With an
    explicit source/sink pair no hookups are added and the source supplies
    unbounded flow.
    """

    def __init__(self, net: DirectedNetworkOverTime, source: int | None = None, sink: int | None = None):
        self.m_net = net.m
        self.n_net = net.n
        self.tail = [e.tail for e in net.edges]
        self.head = [e.head for e in net.edges]
        self.cap = [e.capacity for e in net.edges]
        self.cost = [e.transit for e in net.edges]
        if source is None:
            self.n = net.n + 2
            self.source = net.n
            self.sink = net.n + 1
            for v, b in enumerate(net.balances):
                if b > 0:
                    self.tail.append(self.source)
                    self.head.append(v)
                    self.cap.append(b)
                    self.cost.append(0)
            for v, b in enumerate(net.balances):
                if b < 0:
                    self.tail.append(v)
                    self.head.append(self.sink)
                    self.cap.append(-b)
                    self.cost.append(0)
        else:
            self.n = net.n
            self.source = source
            self.sink = sink
        self.m = len(self.tail)
        self.flow = [Fraction(0)] * self.m
        self.out: list[list[int]] = [[] for _ in range(self.n)]
        self.inn: list[list[int]] = [[] for _ in range(self.n)]
        for a in range(self.m):
            self.out[self.tail[a]].append(a)
            self.inn[self.head[a]].append(a)

    def forward_residual(self, a: int):
        return self.cap[a] - self.flow[a]


def _dijkstra_forward(res: _Residual, pi: list) -> list:
    """Shortest reduced-cost distances from the source."""
    dist = [_INF] * res.n
    dist[res.source] = 0
    heap = [(0, res.source)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist[v]:
            continue
        for a in res.out[v]:
            if res.forward_residual(a) > 0:
                w = res.head[a]
                nd = d + res.cost[a] + pi[v] - pi[w]
                if nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        for a in res.inn[v]:
            if res.flow[a] > 0:
                w = res.tail[a]
                nd = d - res.cost[a] + pi[v] - pi[w]
                if nd < dist[w]:
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
    return dist


def _dijkstra_backward(res: _Residual, pi: list) -> list:
    """Shortest reduced-cost distances to the sink (reverse traversal)."""
    dist = [_INF] * res.n
    dist[res.sink] = 0
    heap = [(0, res.sink)]
    while heap:
        d, w = heapq.heappop(heap)
        if d > dist[w]:
            continue
        for a in res.inn[w]:
            if res.forward_residual(a) > 0:
                v = res.tail[a]
                nd = d + res.cost[a] + pi[v] - pi[w]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        for a in res.out[w]:
            if res.flow[a] > 0:
                v = res.head[a]
                nd = d - res.cost[a] + pi[v] - pi[w]
                if nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
    return dist


def _useful_adjacency(res: _Residual, pi: list, dfwd: list, dbwd: list):
    """Residual arcs lying on some shortest source-sink path, keyed by tail.

    Per node, all forward residual arcs come first (ascending arc id), then
    all reverse residual arcs (ascending arc id); a DFS over this adjacency
    therefore realises the deterministic tie-breaking rule.
    """
    target_dist = dfwd[res.sink]
    adj_f: list[list] = [[] for _ in range(res.n)]
    adj_r: list[list] = [[] for _ in range(res.n)]
    for a in range(res.m):
        v, w = res.tail[a], res.head[a]
        if res.forward_residual(a) > 0:
            rc = res.cost[a] + pi[v] - pi[w]
            if dfwd[v] + rc + dbwd[w] == target_dist:
                adj_f[v].append((a, w, False))
        if res.flow[a] > 0:
            rc = -res.cost[a] + pi[w] - pi[v]
            if dfwd[w] + rc + dbwd[v] == target_dist:
                adj_r[w].append((a, v, True))
    return [adj_f[v] + adj_r[v] for v in range(res.n)]


def _reaches(adj, start: int, target: int, used: set[int]) -> bool:
    if start == target:
        return True
    seen = set(used)
    seen.add(start)
    stack = [start]
    while stack:
        v = stack.pop()
        for _a, w, _rev in adj[v]:
            if w == target:
                return True
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return False


def _select_path(res: _Residual, adj) -> list[tuple[int, bool]]:
    """First path of the ascending-id DFS through the shortest-path subgraph.

    Equivalently: at each node take the first usable adjacency entry whose
    target still reaches the sink, which is exactly where the DFS first
    arrives without backtracking past it.
    """
    cur = res.source
    used = {cur}
    chosen: list[tuple[int, bool]] = []
    while cur != res.sink:
        for a, w, rev in adj[cur]:
            if w in used:
                continue
            if _reaches(adj, w, res.sink, used):
                chosen.append((a, rev))
                used.add(w)
                cur = w
                break
        else:
            raise AssertionError("shortest-path subgraph lost its source-sink path")
    return chosen


def _augment(res: _Residual, steps: list[tuple[int, bool]]) -> Fraction:
    delta = min((res.flow[a] if rev else res.forward_residual(a)) for a, rev in steps)
    if delta == _INF:
        raise ValidationError("unbounded flow: all-infinite augmenting path")
    assert delta > 0
    for a, rev in steps:
        if rev:
            res.flow[a] -= delta
        else:
            res.flow[a] += delta
    return delta


def _find_cycle(res: _Residual) -> list[int] | None:
    """A directed cycle of positive-flow network arcs, or None. Deterministic."""
    state = [0] * res.n  # 0 unseen, 1 on stack, 2 done
    via: dict[int, int] = {}  # node -> arc that entered it on the current path
    for root in range(res.n):
        if state[root] != 0:
            continue
        stack: list[tuple[int, int]] = [(root, 0)]
        state[root] = 1
        while stack:
            v, idx = stack[-1]
            arcs = res.out[v]
            advanced = False
            while idx < len(arcs):
                a = arcs[idx]
                idx += 1
                if a >= res.m_net or res.flow[a] <= 0:
                    continue
                w = res.head[a]
                if state[w] == 1:
                    cycle = [a]
                    node = v
                    while node != w:
                        back = via[node]
                        cycle.append(back)
                        node = res.tail[back]
                    cycle.reverse()
                    return cycle
                if state[w] == 0:
                    stack[-1] = (v, idx)
                    via[w] = a
                    state[w] = 1
                    stack.append((w, 0))
                    advanced = True
                    break
            if not advanced:
                state[v] = 2
                stack.pop()
    return None


def _strip_cycles(res: _Residual) -> None:
    """Cancel flow cycles; an optimal flow only carries zero-transit cycles."""
    while True:
        cycle = _find_cycle(res)
        if cycle is None:
            return
        if sum(res.cost[a] for a in cycle) != 0:
            raise AssertionError("positive-transit flow cycle in an optimal flow")
        delta = min(res.flow[a] for a in cycle)
        for a in cycle:
            res.flow[a] -= delta


def _greedy_paths(
    tails, heads, costs, out_lists, flow_rem, supply_rem, absorb_rem
) -> list[PathFlow]:
    """Decompose by repeated ascending-id walks, removing each bottleneck.

    The flow must be cycle-free and conserve (supply - absorb) divergences;
    each walk starts at the lowest supplying node and repeatedly follows the
    lowest-id positive arc, stopping at the first node with remaining
    absorption, which is where an ascending-id DFS would first stop too.
    """
    paths: list[PathFlow] = []
    for s in range(len(supply_rem)):
        while supply_rem[s] > 0:
            nodes = [s]
            arcs: list[int] = []
            v = s
            while not (v != s and absorb_rem[v] > 0):
                for a in out_lists[v]:
                    if flow_rem[a] > 0:
                        arcs.append(a)
                        v = heads[a]
                        nodes.append(v)
                        break
                else:
                    raise ValidationError("flow decomposition stranded at a non-sink")
                if len(arcs) > len(flow_rem):
                    raise ValidationError("flow contains a cycle; cannot decompose into paths")
            amount = min(supply_rem[s], absorb_rem[v], min(flow_rem[a] for a in arcs))
            supply_rem[s] -= amount
            absorb_rem[v] -= amount
            for a in arcs:
                flow_rem[a] -= amount
            transit = sum(costs[a] for a in arcs)
            paths.append(PathFlow(tuple(nodes), tuple(arcs), amount, transit))
    if any(x != 0 for x in flow_rem):
        raise ValidationError("flow contains a cycle; cannot decompose into paths")
    assert all(x == 0 for x in absorb_rem), "absorption left over after decomposition"
    return paths


def _decompose_residual(res: _Residual, horizon: int | None) -> list[PathFlow]:
    """Decompose the network-arc flow held in res, with terminal bookkeeping.

    In horizon mode, degenerate zero-contribution paths (transit exactly T,
    possible when augmentations cross) are cancelled from the flow itself and
    the decomposition is redone, so that every returned path has transit < T.
    """
    n = res.n_net
    out_net: list[list[int]] = [[] for _ in range(n)]
    for a in range(res.m_net):
        out_net[res.tail[a]].append(a)

    def terminal_usage():
        supply = [Fraction(0)] * n
        absorb = [Fraction(0)] * n
        if res.m > res.m_net:
            for a in range(res.m_net, res.m):
                if res.tail[a] == res.source:
                    supply[res.head[a]] = res.flow[a]
                else:
                    absorb[res.tail[a]] = res.flow[a]
        else:
            total_out = sum((res.flow[a] for a in out_net[res.source]), Fraction(0))
            total_in = sum(
                (res.flow[a] for a in range(res.m_net) if res.head[a] == res.source),
                Fraction(0),
            )
            supply[res.source] = total_out - total_in
            absorb[res.sink] = supply[res.source]
        return supply, absorb

    for _round in range(res.m + 2):
        supply, absorb = terminal_usage()
        flow_rem = [res.flow[a] for a in range(res.m_net)]
        paths = _greedy_paths(res.tail, res.head, res.cost, out_net, flow_rem, supply, absorb)
        if horizon is None:
            return paths
        too_long = [p for p in paths if p.transit >= horizon]
        if not too_long:
            return paths
        for p in too_long:
            if p.transit > horizon:
                raise AssertionError("decomposition path longer than the horizon")
            # transit == horizon: worthless for temporal repetition; cancel it
            for a in p.arcs:
                res.flow[a] -= p.amount
            if res.m > res.m_net:
                for a in range(res.m_net, res.m):
                    if res.tail[a] == res.source and res.head[a] == p.nodes[0]:
                        res.flow[a] -= p.amount
                    if res.head[a] == res.sink and res.tail[a] == p.nodes[-1]:
                        res.flow[a] -= p.amount
    raise AssertionError("path cancellation failed to converge")


def max_temporally_repeated_static_flow(
    net: DirectedNetworkOverTime,
    horizon: int | None = None,
    source: int | None = None,
    sink: int | None = None,
) -> StaticFlowResult:
    """Static flow maximising horizon*|x| - transit_cost(x).

    Augments along deterministic shortest paths while their true length is
    below the horizon.  By default the balances become super-terminal hookup
    arcs of capacity |b_v|, which in the temporally repeated interpretation
    bound the *rate* into and out of each terminal, not the total amount
    (the supply-bounded oracle is temporal.max_flow_over_time).  Passing an
    explicit source and sink instead treats that pair as the unbounded
    terminals, as used for networks that carry their own super terminals.

    With horizon None, runs to saturation and returns a min-cost maximum
    flow (`value` is then None).  The returned arc_flow is cycle-free, so
    for networks derived by to_bidirected it never uses both twin arcs of an
    undirected edge.
    """
    if horizon is not None and horizon < 0:
        raise ValidationError("horizon must be nonnegative")
    res = _Residual(net, source, sink)
    pi = [0] * res.n
    while True:
        dist = _dijkstra_forward(res, pi)
        d_sink = dist[res.sink]
        if d_sink == _INF:
            break
        if horizon is not None and d_sink + pi[res.sink] >= horizon:
            break
        dbwd = _dijkstra_backward(res, pi)
        adj = _useful_adjacency(res, pi, dist, dbwd)
        steps = _select_path(res, adj)
        _augment(res, steps)
        for v in range(res.n):
            pi[v] += min(dist[v], d_sink)
    _strip_cycles(res)
    paths = _decompose_residual(res, horizon)
    static_value = sum((p.amount for p in paths), Fraction(0))
    static_cost = sum(
        (res.flow[a] * res.cost[a] for a in range(res.m_net)), Fraction(0)
    )
    value = None
    if horizon is not None:
        value = horizon * static_value - static_cost
        check = sum(((horizon - p.transit) * p.amount for p in paths), Fraction(0))
        assert check == value, "path decomposition disagrees with the flow value"
    return StaticFlowResult(
        arc_flow=[res.flow[a] for a in range(res.m_net)],
        static_value=static_value,
        static_cost=static_cost,
        horizon=horizon,
        value=value,
        paths=paths,
    )


def shortest_path_deterministic(
    net: DirectedNetworkOverTime, source: int, sink: int
) -> PathFlow | None:
    """Shortest transit path, deterministically tie-broken; None if disconnected.

    Among all transit-shortest source-sink paths, returns the one found by a
    depth-first search over the shortest-path subgraph that expands arcs in
    ascending id order.  Arcs of zero capacity are unusable.
    """
    if not (0 <= source < net.n and 0 <= sink < net.n):
        raise ValidationError("source or sink not in network")
    res = _Residual(net, source, sink)
    pi = [0] * res.n
    dist = _dijkstra_forward(res, pi)
    if dist[res.sink] == _INF:
        return None
    dbwd = _dijkstra_backward(res, pi)
    adj = _useful_adjacency(res, pi, dist, dbwd)
    steps = _select_path(res, adj)
    nodes = [source]
    arcs = []
    for a, rev in steps:
        assert not rev
        arcs.append(a)
        nodes.append(res.head[a])
    return PathFlow(tuple(nodes), tuple(arcs), Fraction(0), dist[res.sink])


def path_decomposition(
    arc_flow: list[Fraction],
    net: DirectedNetworkOverTime,
    source: int,
    sink: int,
) -> list[PathFlow]:
    """Decompose a conservative cycle-free source-sink flow into paths.

    Repeatedly walks from the source following the lowest-id positive arc
    and removes the bottleneck.  Raises if the flow violates conservation at
    non-terminals or contains cycles.
    """
    if len(arc_flow) != net.m:
        raise ValidationError("flow vector length differs from edge count")
    flow = [Fraction(f) for f in arc_flow]
    div = [Fraction(0)] * net.n
    out_lists: list[list[int]] = [[] for _ in range(net.n)]
    for e in net.edges:
        f = flow[e.id]
        if f < 0 or f > e.capacity:
            raise ValidationError(f"flow on edge {e.id} outside [0, capacity]")
        div[e.tail] += f
        div[e.head] -= f
        out_lists[e.tail].append(e.id)
    for v in range(net.n):
        if v not in (source, sink) and div[v] != 0:
            raise ValidationError(f"flow violates conservation at node {v}")
    if div[source] < 0 or div[source] != -div[sink]:
        raise ValidationError("flow violates conservation at the terminals")
    supply = [Fraction(0)] * net.n
    absorb = [Fraction(0)] * net.n
    supply[source] = div[source]
    absorb[sink] = div[source]
    costs = [e.transit for e in net.edges]
    heads = [e.head for e in net.edges]
    tails = [e.tail for e in net.edges]
    return _greedy_paths(tails, heads, costs, out_lists, flow, supply, absorb)


def static_max_flow_value(net: DirectedNetworkOverTime) -> Fraction:
    """Maximum static source-sink flow value (transits ignored)."""
    return max_temporally_repeated_static_flow(net, horizon=None).static_value
