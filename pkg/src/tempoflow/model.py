"""Core domain types for flow-over-time networks.

Networks come in an undirected and a directed flavour.  Both carry per-edge
capacities (inflow rate bounds, possibly infinite), integer transit times,
per-node balances (supplies positive, demands negative) and an optional
integer time horizon.  Node and edge ids are dense integers assigned in
input order; every algorithm in this package breaks ties by those ids, so
id assignment is part of the contract.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

INF = math.inf

Capacity = Fraction | float  # float is only ever INF, never used for finite values


class ValidationError(ValueError):
    """Instance violates a structural precondition."""


def is_infinite(x: Capacity) -> bool:
    return isinstance(x, float) and math.isinf(x)


def parse_rational(text: str | int) -> Capacity:
    """Parse "p/q", "n" or "inf" into a Fraction (or INF)."""
    if isinstance(text, int):
        return Fraction(text)
    s = text.strip()
    if s in ("inf", "+inf", "Infinity"):
        return INF
    return Fraction(s)


def format_rational(x: Capacity) -> str:
    if is_infinite(x):
        return "inf"
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


@dataclass(frozen=True)
class UEdge:
    """Undirected edge between nodes u and v (stored order is only a label)."""

    id: int
    u: int
    v: int
    capacity: Capacity
    transit: int

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class DEdge:
    """Directed edge (arc).  parent/flipped track the undirected origin, if any."""

    id: int
    tail: int
    head: int
    capacity: Capacity
    transit: int
    parent: int | None = None
    flipped: bool = False


def _check_common(names, edges, balances, horizon, kind: str) -> list[str]:
    problems: list[str] = []
    n = len(names)
    if len(set(names)) != n:
        problems.append("duplicate node names")
    if len(balances) != n:
        problems.append("balance vector length differs from node count")
    for i, e in enumerate(edges):
        if e.id != i:
            problems.append(f"edge {i} carries id {e.id}; ids must be dense in input order")
        ends = (e.u, e.v) if kind == "undirected" else (e.tail, e.head)
        for w in ends:
            if not (0 <= w < n):
                problems.append(f"edge {e.id} references unknown node {w}")
        if not is_infinite(e.capacity) and e.capacity < 0:
            problems.append(f"edge {e.id} has negative capacity")
        if e.transit < 0 or not isinstance(e.transit, int):
            problems.append(f"edge {e.id} has non-integer or negative transit")
    total = sum(balances, Fraction(0))
    if total != 0:
        problems.append(f"balances sum to {total}, expected 0")
    if horizon is not None and (horizon < 0 or not isinstance(horizon, int)):
        problems.append("horizon must be a nonnegative integer or absent")
    return problems


@dataclass(frozen=True)
class UndirectedNetworkOverTime:
    names: tuple[str, ...]
    edges: tuple[UEdge, ...]
    balances: tuple[Fraction, ...]
    horizon: int | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.edges)

    def sources(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b > 0]

    def sinks(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b < 0]

    def total_supply(self) -> Fraction:
        return sum((b for b in self.balances if b > 0), Fraction(0))

    def incident(self, v: int) -> list[UEdge]:
        return [e for e in self.edges if v in (e.u, e.v)]

    def node_id(self, name: str) -> int:
        return self.names.index(name)


@dataclass(frozen=True)
class DirectedNetworkOverTime:
    names: tuple[str, ...]
    edges: tuple[DEdge, ...]
    balances: tuple[Fraction, ...]
    horizon: int | None = None
    # None for natively directed networks, else the construction that produced
    # this network from an undirected one ("bidirected" or "gadget").
    derived: str | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.edges)

    def sources(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b > 0]

    def sinks(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b < 0]

    def total_supply(self) -> Fraction:
        return sum((b for b in self.balances if b > 0), Fraction(0))

    def out_edges(self, v: int) -> list[DEdge]:
        return [e for e in self.edges if e.tail == v]

    def in_edges(self, v: int) -> list[DEdge]:
        return [e for e in self.edges if e.head == v]

    def node_id(self, name: str) -> int:
        return self.names.index(name)


Network = UndirectedNetworkOverTime | DirectedNetworkOverTime


@dataclass(frozen=True)
class Commodity:
    id: int
    balances: tuple[Fraction, ...]

    def total_supply(self) -> Fraction:
        return sum((b for b in self.balances if b > 0), Fraction(0))

    def sources(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b > 0]

    def sinks(self) -> list[int]:
        return [v for v, b in enumerate(self.balances) if b < 0]


@dataclass(frozen=True)
class CommoditySet:
    commodities: tuple[Commodity, ...]

    def __iter__(self):
        return iter(self.commodities)

    def __len__(self) -> int:
        return len(self.commodities)


@dataclass(frozen=True)
class Orientation:
    """Total orientation: edge id -> directed (tail, head) node pair."""

    arcs: tuple[tuple[int, int], ...]

    @classmethod
    def from_bits(cls, net: UndirectedNetworkOverTime, bits: int) -> "Orientation":
        """Bit e set means edge e runs v->u instead of the stored u->v."""
        arcs = []
        for e in net.edges:
            if bits >> e.id & 1:
                arcs.append((e.v, e.u))
            else:
                arcs.append((e.u, e.v))
        return cls(tuple(arcs))

    def bits(self, net: UndirectedNetworkOverTime) -> int:
        mask = 0
        for e in net.edges:
            if self.arcs[e.id] == (e.v, e.u):
                mask |= 1 << e.id
        return mask


def build_undirected(
    node_names: Sequence[str],
    edge_specs: Iterable[tuple[str, str, Capacity, int]],
    balances: Mapping[str, Fraction | int] | None = None,
    horizon: int | None = None,
) -> UndirectedNetworkOverTime:
    """Convenience constructor working with node names instead of ids."""
    names = tuple(node_names)
    index = {name: i for i, name in enumerate(names)}
    edges = tuple(
        UEdge(i, index[a], index[b], cap if is_infinite(cap) else Fraction(cap), int(tau))
        for i, (a, b, cap, tau) in enumerate(edge_specs)
    )
    bal = [Fraction(0)] * len(names)
    for name, b in (balances or {}).items():
        bal[index[name]] = Fraction(b)
    net = UndirectedNetworkOverTime(names, edges, tuple(bal), horizon)
    problems = validate(net)
    if problems:
        raise ValidationError("; ".join(problems))
    return net


def build_directed(
    node_names: Sequence[str],
    edge_specs: Iterable[tuple[str, str, Capacity, int]],
    balances: Mapping[str, Fraction | int] | None = None,
    horizon: int | None = None,
) -> DirectedNetworkOverTime:
    names = tuple(node_names)
    index = {name: i for i, name in enumerate(names)}
    edges = tuple(
        DEdge(i, index[a], index[b], cap if is_infinite(cap) else Fraction(cap), int(tau))
        for i, (a, b, cap, tau) in enumerate(edge_specs)
    )
    bal = [Fraction(0)] * len(names)
    for name, b in (balances or {}).items():
        bal[index[name]] = Fraction(b)
    net = DirectedNetworkOverTime(names, edges, tuple(bal), horizon)
    problems = validate(net)
    if problems:
        raise ValidationError("; ".join(problems))
    return net


def validate(net: Network) -> list[str]:
    """Return a list of structural problems; empty means the instance is sound."""
    kind = "undirected" if isinstance(net, UndirectedNetworkOverTime) else "directed"
    return _check_common(net.names, net.edges, net.balances, net.horizon, kind)


def apply_orientation(
    net: UndirectedNetworkOverTime, orientation: Orientation
) -> DirectedNetworkOverTime:
    """Turn every undirected edge into a single arc as dictated by orientation.

    Node ids, edge ids, capacities, transits, balances and horizon all carry
    over unchanged; only direction is added.
    """
    if len(orientation.arcs) != net.m:
        raise ValidationError(
            f"orientation covers {len(orientation.arcs)} edges, network has {net.m}"
        )
    arcs = []
    for e in net.edges:
        tail, head = orientation.arcs[e.id]
        if {tail, head} != {e.u, e.v}:
            raise ValidationError(
                f"orientation of edge {e.id} is ({tail},{head}), not a permutation of its endpoints"
            )
        arcs.append(DEdge(e.id, tail, head, e.capacity, e.transit, parent=e.id, flipped=(tail != e.u)))
    return DirectedNetworkOverTime(net.names, tuple(arcs), net.balances, net.horizon)


def to_bidirected(net: UndirectedNetworkOverTime) -> DirectedNetworkOverTime:
    """Antiparallel-arc relaxation: each edge becomes two opposite arcs.

    Arc ids are 2e and 2e+1 for edge e, forward copy first.  The shared
    capacity of the undirected edge is restored afterwards by cancelling
    twin flows (see static_flow); a minimum-cost flow never keeps both
    twins positive except across zero-transit edges, where the cancellation
    is cost-neutral.
    """
    arcs = []
    for e in net.edges:
        arcs.append(DEdge(2 * e.id, e.u, e.v, e.capacity, e.transit, parent=e.id, flipped=False))
        arcs.append(DEdge(2 * e.id + 1, e.v, e.u, e.capacity, e.transit, parent=e.id, flipped=True))
    return DirectedNetworkOverTime(net.names, tuple(arcs), net.balances, net.horizon, derived="bidirected")


def gadget_transform(net: UndirectedNetworkOverTime) -> DirectedNetworkOverTime:
    """Directed gadget that realises undirected flow-over-time semantics.

    Edge e = {v, w} becomes nodes e_mid, e_mid' and five arcs
    (v,e_mid), (w,e_mid), (e_mid,e_mid'), (e_mid',v), (e_mid',w); the middle
    arc carries the edge's capacity and transit, the rest are free.  The sum
    of both direction rates through e is therefore capped by u_e at every
    instant.  Result has n + 2m nodes and 5m arcs; arc ids are 5e..5e+4 in
    the order above, so id % 5 < 2 identifies direction-tracking entry arcs.
    """
    names = list(net.names)
    balances = list(net.balances)
    arcs: list[DEdge] = []
    for e in net.edges:
        mid = len(names)
        mid2 = mid + 1
        names.append(f"g{e.id}")
        names.append(f"g{e.id}'")
        balances.extend([Fraction(0), Fraction(0)])
        base = 5 * e.id
        arcs.append(DEdge(base, e.u, mid, INF, 0, parent=e.id, flipped=False))
        arcs.append(DEdge(base + 1, e.v, mid, INF, 0, parent=e.id, flipped=True))
        arcs.append(DEdge(base + 2, mid, mid2, e.capacity, e.transit, parent=e.id))
        arcs.append(DEdge(base + 3, mid2, e.u, INF, 0, parent=e.id))
        arcs.append(DEdge(base + 4, mid2, e.v, INF, 0, parent=e.id))
    return DirectedNetworkOverTime(
        tuple(names), tuple(arcs), tuple(balances), net.horizon, derived="gadget"
    )


# ---------------------------------------------------------------------------
# JSON instance format


def network_to_dict(net: Network, commodities: CommoditySet | None = None) -> dict:
    undirected = isinstance(net, UndirectedNetworkOverTime)
    edges = []
    for e in net.edges:
        tail, head = (e.u, e.v) if undirected else (e.tail, e.head)
        edges.append(
            {
                "id": e.id,
                "tail": net.names[tail],
                "head": net.names[head],
                "undirected": undirected,
                "capacity": format_rational(e.capacity),
                "transit": e.transit,
            }
        )
    data: dict = {
        "nodes": list(net.names),
        "edges": edges,
        "balances": {
            net.names[v]: format_rational(b) for v, b in enumerate(net.balances) if b != 0
        },
        "horizon": net.horizon,
    }
    if commodities is not None:
        data["commodities"] = [
            {
                "id": c.id,
                "balances": {
                    net.names[v]: format_rational(b) for v, b in enumerate(c.balances) if b != 0
                },
            }
            for c in commodities
        ]
    return data


def network_from_dict(data: dict) -> tuple[Network, CommoditySet | None]:
    names = tuple(data["nodes"])
    index = {name: i for i, name in enumerate(names)}
    flags = {bool(e.get("undirected", False)) for e in data["edges"]}
    if len(flags) > 1:
        raise ValidationError("mixed directed and undirected edges are not supported")
    undirected = flags == {True}
    bal = [Fraction(0)] * len(names)
    for name, v in data.get("balances", {}).items():
        b = parse_rational(v)
        if is_infinite(b):
            raise ValidationError("balances must be finite")
        bal[index[name]] = b
    horizon = data.get("horizon")
    edges_u: list[UEdge] = []
    edges_d: list[DEdge] = []
    for e in data["edges"]:
        cap = parse_rational(e["capacity"])
        tau = int(e["transit"])
        if undirected:
            edges_u.append(UEdge(int(e["id"]), index[e["tail"]], index[e["head"]], cap, tau))
        else:
            edges_d.append(DEdge(int(e["id"]), index[e["tail"]], index[e["head"]], cap, tau))
    net: Network
    if undirected:
        net = UndirectedNetworkOverTime(names, tuple(edges_u), tuple(bal), horizon)
    else:
        net = DirectedNetworkOverTime(names, tuple(edges_d), tuple(bal), horizon)
    problems = validate(net)
    if problems:
        raise ValidationError("; ".join(problems))
    commodities = None
    if "commodities" in data:
        items = []
        for c in data["commodities"]:
            cbal = [Fraction(0)] * len(names)
            for name, v in c.get("balances", {}).items():
                cbal[index[name]] = Fraction(parse_rational(v))
            items.append(Commodity(int(c["id"]), tuple(cbal)))
        commodities = CommoditySet(tuple(items))
    return net, commodities


def save_instance(path, net: Network, commodities: CommoditySet | None = None, extra: dict | None = None) -> None:
    data = network_to_dict(net, commodities)
    if extra:
        data.update(extra)
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_instance(path) -> tuple[Network, CommoditySet | None]:
    with open(path) as fh:
        return network_from_dict(json.load(fh))
