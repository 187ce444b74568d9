"""Instance families and hardness-reduction gadgets.

Each generator builds one of the undirected flow-over-time families used
by the tightness and hardness arguments; the reductions additionally
return commodity structure or encode the decision gap in balances and
horizon.  All numeric data is exact: fractional capacities stay
``Fraction`` and transits stay integral thanks to the divisibility
preconditions.
"""

from __future__ import annotations

import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Sequence

from .lp import OPTIMAL, UNBOUNDED, solve_lp
from .model import (
    INF,
    Commodity,
    CommoditySet,
    DirectedNetworkOverTime,
    Orientation,
    UndirectedNetworkOverTime,
    ValidationError,
    apply_orientation,
    build_undirected,
    is_infinite,
)
from .temporal import max_flow_over_time, quickest_transshipment_time


# --------------------------------------------------------------------------
# Decision-problem inputs


Literal = tuple[int, bool]  # 1-based variable index, negated flag


@dataclass(frozen=True)
class CnfFormula:
    """3-CNF formula: exactly three literals per clause, repeats allowed."""

    k: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ValidationError("variable count k must be a positive integer")
        if not self.clauses:
            raise ValidationError("formula needs at least one clause")
        for clause in self.clauses:
            if len(clause) != 3:
                raise ValidationError("each clause needs exactly 3 literals")
            for var, neg in clause:
                if not isinstance(var, int) or not 1 <= var <= self.k:
                    raise ValidationError(f"literal variable {var} outside 1..{self.k}")
                if not isinstance(neg, bool):
                    raise ValidationError("negation flag must be a bool")

    @property
    def num_clauses(self) -> int:
        return len(self.clauses)

    def is_satisfied(self, assignment: Sequence[bool]) -> bool:
        return all(
            any(assignment[var - 1] != neg for var, neg in clause) for clause in self.clauses
        )

    def has_repeated_variable(self) -> bool:
        return any(len({var for var, _ in clause}) < 3 for clause in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse the DIMACS CNF subset: p-cnf header, three literals per clause."""
    k = None
    declared = None
    literals: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValidationError(f"malformed problem line: {line!r}")
            k, declared = int(parts[2]), int(parts[3])
            continue
        literals.extend(int(tok) for tok in line.split())
    if k is None:
        raise ValidationError("missing 'p cnf' header")
    clauses: list[tuple[Literal, Literal, Literal]] = []
    current: list[int] = []
    for lit in literals:
        if lit == 0:
            if len(current) != 3:
                raise ValidationError("each clause needs exactly 3 literals")
            clauses.append(tuple((abs(x), x < 0) for x in current))  # type: ignore[arg-type]
            current = []
        else:
            current.append(lit)
    if current:
        raise ValidationError("clause not terminated by 0")
    if declared is not None and declared != len(clauses):
        raise ValidationError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(k, tuple(clauses))


def dpll_assignment(phi: CnfFormula) -> tuple[bool, ...] | None:
    """Satisfying assignment or None.  Only labels test instances; k <= 20."""
    if phi.k > 20:
        raise ValidationError("DPLL labeling is limited to k <= 20 variables")

    def search(assign: dict[int, bool]) -> dict[int, bool] | None:
        while True:
            unit: Literal | None = None
            for clause in phi.clauses:
                open_lits = []
                satisfied = False
                for var, neg in clause:
                    if var in assign:
                        if assign[var] != neg:
                            satisfied = True
                            break
                    else:
                        open_lits.append((var, neg))
                if satisfied:
                    continue
                if not open_lits:
                    return None
                if len(open_lits) == 1:
                    unit = open_lits[0]
                    break
            if unit is None:
                break
            assign[unit[0]] = not unit[1]
        if len(assign) == phi.k:
            return assign
        var = next(v for v in range(1, phi.k + 1) if v not in assign)
        for value in (True, False):
            result = search({**assign, var: value})
            if result is not None:
                return result
        return None

    solution = search({})
    if solution is None:
        return None
    return tuple(solution[v] for v in range(1, phi.k + 1))


@dataclass(frozen=True)
class PartitionInstance:
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValidationError("PARTITION needs at least one integer")
        for a in self.values:
            if not isinstance(a, int) or a < 1:
                raise ValidationError("PARTITION values must be integers >= 1")
        if sum(self.values) % 2:
            raise ValidationError(f"values sum to {sum(self.values)}, expected an even total")
        if self.half < 1:
            raise ValidationError("half-sum L must be >= 1")

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def half(self) -> int:
        return sum(self.values) // 2

    def has_solution(self) -> bool:
        """Exact subset-sum check; instances are desk-scale by design."""
        sums = {0}
        for a in self.values:
            sums |= {s + a for s in sums}
        return self.half in sums


def parse_partition(text: str) -> PartitionInstance:
    tokens = text.split()
    if not tokens:
        raise ValidationError("empty PARTITION input")
    return PartitionInstance(tuple(int(tok) for tok in tokens))


# --------------------------------------------------------------------------
# Price-of-orientation families


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ValidationError(message)


def _positive_int(x: Fraction, what: str) -> int:
    _require(x > 0 and x.denominator == 1, f"{what} must be a positive integer, got {x}")
    return int(x)


def gen_fig1(T: int) -> UndirectedNetworkOverTime:
    """Two-source, one-sink instance whose optimum needs {i,j} in both directions."""
    _require(isinstance(T, int) and T >= 2, "T must be an integer >= 2")
    cap = Fraction(1, T)
    return build_undirected(
        ("s1", "s2", "i", "j", "t"),
        (
            ("s1", "i", Fraction(1), 0),
            ("s2", "j", cap, 0),
            ("j", "i", Fraction(1), 0),
            ("j", "t", Fraction(1), T - 1),
            ("t", "i", cap, 0),
        ),
        {"s1": 1, "s2": 1, "t": -2},
        T,
    )


def gen_flow_price_lb(T: int, delta, eps: int) -> UndirectedNetworkOverTime:
    """Three-terminal family whose best orientation tends to B/3 as delta, eps -> 0."""
    _require(isinstance(T, int) and T >= 1, "T must be a positive integer")
    _require(isinstance(eps, int) and eps >= 1, "eps must be a positive integer")
    delta = Fraction(delta)
    dT = _positive_int(delta * T, "delta*T")
    rT = _positive_int((1 - delta) * T, "(1-delta)*T")
    _require(eps <= dT, "eps must not exceed delta*T")
    thin = Fraction(1, T)
    return build_undirected(
        ("s1", "s2", "s3", "v1", "v2", "v3", "v4", "t1", "t2", "t3"),
        (
            ("s1", "v3", INF, T),
            ("s2", "v1", INF, 0),
            ("s3", "v2", thin, 0),
            ("v1", "v2", INF, 0),
            ("v1", "v4", thin, 0),
            ("v2", "v4", INF, rT),
            ("v3", "v4", INF, 0),
            ("v3", "t1", thin, 0),
            ("v3", "t2", INF, dT),
            ("v4", "t3", INF, 0),
        ),
        {"s1": 1, "s2": 1, "s3": 1, "t1": -1, "t2": -1, "t3": -1},
        T + eps,
    )


def gen_single_sink_lb(T: int, delta) -> UndirectedNetworkOverTime:
    """Single-sink restriction of the flow-price family; tight for B/2."""
    _require(isinstance(T, int) and T >= 1, "T must be a positive integer")
    delta = Fraction(delta)
    _positive_int(delta * T, "delta*T")
    rT = _positive_int((1 - delta) * T, "(1-delta)*T")
    thin = Fraction(1, T)
    return build_undirected(
        ("s2", "s3", "v1", "v2", "v4"),
        (
            ("s2", "v1", INF, 0),
            ("s3", "v2", thin, 0),
            ("v1", "v2", INF, 0),
            ("v1", "v4", thin, 0),
            ("v2", "v4", INF, rT),
        ),
        {"s2": 1, "s3": 1, "v4": -2},
        T,
    )


def gen_single_source_lb(T: int, delta) -> UndirectedNetworkOverTime:
    """Single-source mirror with demands split across v3 and v4."""
    _require(isinstance(T, int) and T >= 1, "T must be a positive integer")
    delta = Fraction(delta)
    _positive_int(delta * T, "delta*T")
    rT = _positive_int((1 - delta) * T, "(1-delta)*T")
    thin = Fraction(1, T)
    return build_undirected(
        ("s", "v1", "v2", "v3", "v4"),
        (
            ("s", "v1", INF, 0),
            ("s", "v2", thin, 0),
            ("v1", "v2", INF, 0),
            ("v1", "v3", thin, 0),
            ("v2", "v4", INF, rT),
        ),
        {"s": 2, "v3": -1, "v4": -1},
        T,
    )


def _time_price_base(k: int, T: int) -> int:
    _require(isinstance(k, int) and k >= 1, "k must be a positive integer")
    _require(isinstance(T, int) and T >= 1, "T must be a positive integer")
    return (4 * k + 1) * T  # growth base nT with n = 4k+1


def gen_time_price_single_sink(k: int, T: int) -> UndirectedNetworkOverTime:
    """Chain family forcing any orientation to spend ~kT time on one super sink.

    Supplies grow geometrically in the base nT so that every block's fast
    lane is worth more than everything downstream of it.
    """
    q = _time_price_base(k, T)
    names = ["s0", "v0"]
    for i in range(1, k):
        names += [f"s{i}", f"t{i}", f"v{i}", f"w{i}"]
    names += [f"v{k}", f"t{k}", "t"]
    edges: list[tuple[str, str, Fraction | float, int]] = [("s0", "v0", INF, 0)]
    for i in range(1, k):
        edges += [
            (f"s{i}", f"w{i}", INF, 0),
            (f"w{i}", f"t{i}", Fraction(q) ** (i - 1), 0),
            (f"w{i}", f"v{i}", INF, 0),
            (f"v{i}", f"v{i - 1}", INF, T),
            (f"t{i}", "t", INF, 0),
        ]
    edges += [
        (f"v{k}", f"v{k - 1}", INF, T),
        (f"v{k}", f"t{k}", INF, 0),
        (f"t{k}", "t", INF, 0),
    ]
    balances: dict[str, Fraction | int] = {"s0": 1}
    for i in range(1, k):
        balances[f"s{i}"] = Fraction(q) ** i
    balances["t"] = -sum(Fraction(q) ** i for i in range(k))
    return build_undirected(names, edges, balances)


def gen_time_price_single_source(k: int, T: int) -> UndirectedNetworkOverTime:
    """Mirror of the single-sink family with one super source."""
    q = _time_price_base(k, T)
    names = ["s", "s0", "v0"]
    for i in range(1, k):
        names += [f"s{i}", f"t{i}", f"v{i}", f"w{i}"]
    names += [f"v{k}", f"t{k}"]
    edges: list[tuple[str, str, Fraction | float, int]] = [
        ("s", "s0", INF, 0),
        ("s0", "v0", INF, 0),
    ]
    for i in range(1, k):
        edges += [
            ("s", f"s{i}", INF, 0),
            (f"s{i}", f"w{i}", Fraction(q) ** (k - 1 - i), 0),
            (f"t{i}", f"w{i}", INF, 0),
            (f"w{i}", f"v{i}", INF, 0),
            (f"v{i}", f"v{i - 1}", INF, T),
        ]
    edges += [(f"v{k}", f"v{k - 1}", INF, T), (f"v{k}", f"t{k}", INF, 0)]
    balances: dict[str, Fraction | int] = {f"t{k}": -1}
    for i in range(1, k):
        balances[f"t{i}"] = -(Fraction(q) ** (k - i))
    balances["s"] = -sum(balances.values())
    return build_undirected(names, edges, balances)


def gen_time_price_tree(k: int, T: int) -> UndirectedNetworkOverTime:
    """Tree variant: drop the super sink and move demands onto the t_i."""
    q = _time_price_base(k, T)
    names = ["s0", "v0"]
    for i in range(1, k):
        names += [f"s{i}", f"t{i}", f"v{i}", f"w{i}"]
    names += [f"v{k}", f"t{k}"]
    edges: list[tuple[str, str, Fraction | float, int]] = [("s0", "v0", INF, 0)]
    for i in range(1, k):
        edges += [
            (f"s{i}", f"w{i}", INF, 0),
            (f"w{i}", f"t{i}", Fraction(q) ** (i - 1), 0),
            (f"w{i}", f"v{i}", INF, 0),
            (f"v{i}", f"v{i - 1}", INF, T),
        ]
    edges += [(f"v{k}", f"v{k - 1}", INF, T), (f"v{k}", f"t{k}", INF, 0)]
    balances: dict[str, Fraction | int] = {"s0": 1}
    for i in range(1, k):
        balances[f"s{i}"] = Fraction(q) ** i
        balances[f"t{i}"] = -(Fraction(q) ** (i - 1))
    balances[f"t{k}"] = -(Fraction(q) ** (k - 1))
    return build_undirected(names, edges, balances)


def gen_unit_capacity_tree(k: int, T: int) -> UndirectedNetworkOverTime:
    """Unit-capacity tree where any orientation needs horizon >= kT+1."""
    _require(isinstance(k, int) and k >= 1, "k must be a positive integer")
    _require(isinstance(T, int) and T >= 1, "T must be a positive integer")
    one = Fraction(1)
    if k == 1:
        return build_undirected(
            ("s1", "t1"), (("s1", "t1", one, T),), {"s1": 1, "t1": -1}
        )
    names = [f"s{i}" for i in range(1, k + 1)] + [f"t{i}" for i in range(1, k + 1)]
    names += [f"a{i}" for i in range(1, k)] + [f"b{i}" for i in range(1, k)]
    edges: list[tuple[str, str, Fraction | float, int]] = [("s1", "a1", one, T)]
    for i in range(1, k):
        edges += [
            (f"a{i}", f"b{i}", one, 0),
            (f"b{i}", f"t{i}", one, 0),
            (f"s{i + 1}", f"b{i}", one, 0),
        ]
        if i <= k - 2:
            edges.append((f"a{i}", f"a{i + 1}", one, T))
    edges.append((f"a{k - 1}", f"t{k}", one, T))
    balances = {f"s{i}": 1 for i in range(1, k + 1)}
    balances.update({f"t{i}": -1 for i in range(1, k + 1)})
    return build_undirected(names, edges, balances)


def gen_eaf(U: int, T: int) -> UndirectedNetworkOverTime:
    """Four-node instance on which no orientation admits a good earliest-arrival flow.

    Balances are set high enough (U+1 units per time step) that they never
    bind before the horizon, so the arrival pattern matches the unbounded
    s-t reading.
    """
    _require(isinstance(U, int) and U >= 1, "U must be a positive integer")
    _require(isinstance(T, int) and T >= 2 and T % 2 == 0, "T must be a positive even integer")
    big = Fraction((U + 1) * T)
    return build_undirected(
        ("s", "v1", "v2", "t"),
        (
            ("s", "v2", Fraction(U), T // 2),
            ("s", "v1", Fraction(1), 1),
            ("v1", "v2", Fraction(U), 0),
            ("v2", "t", Fraction(1), 1),
            ("v1", "t", Fraction(U), T // 2),
        ),
        {"s": big, "t": -big},
        T,
    )


# --------------------------------------------------------------------------
# Hardness reductions


def _literal_names(var: int, neg: bool) -> tuple[str, str]:
    prefix = f"~x{var}" if neg else f"x{var}"
    return f"{prefix}^1", f"{prefix}^2"


def reduce_3sat_quickest(phi: CnfFormula, tau1: int, tau2: int) -> UndirectedNetworkOverTime:
    """Quickest-contraflow gadget: satisfiable iff routable in tau1 + 2*tau2."""
    _require(isinstance(tau1, int) and tau1 > 0, "tau1 must be a positive integer")
    _require(isinstance(tau2, int) and tau2 >= 0, "tau2 must be a nonnegative integer")
    names: list[str] = []
    for i in range(1, phi.k + 1):
        names += [f"x{i}^1", f"x{i}^2", f"~x{i}^1", f"~x{i}^2", f"s{i}", f"t{i}"]
    for j in range(1, phi.num_clauses + 1):
        names += [f"c{j}+", f"c{j}-"]
    edges: list[tuple[str, str, Fraction | float, int]] = []
    for i in range(1, phi.k + 1):
        edges += [
            (f"x{i}^1", f"x{i}^2", INF, tau2),
            (f"~x{i}^1", f"~x{i}^2", INF, tau2),
            (f"s{i}", f"x{i}^2", INF, tau2),
            (f"s{i}", f"~x{i}^2", INF, tau2),
            (f"t{i}", f"x{i}^1", INF, tau1),
            (f"t{i}", f"~x{i}^1", INF, tau1),
        ]
    for j, clause in enumerate(phi.clauses, start=1):
        for var, neg in clause:
            edges.append((f"c{j}+", _literal_names(var, neg)[0], INF, tau1))
        for var, neg in clause:
            edges.append((f"c{j}-", _literal_names(var, neg)[1], INF, tau2))
    balances: dict[str, Fraction | int] = {}
    for i in range(1, phi.k + 1):
        balances[f"s{i}"] = 1
        balances[f"t{i}"] = -1
    for j in range(1, phi.num_clauses + 1):
        balances[f"c{j}+"] = 1
        balances[f"c{j}-"] = -1
    return build_undirected(names, edges, balances)


def reduce_partition_maxfot(p: PartitionInstance) -> UndirectedNetworkOverTime:
    """Maximum-contraflow gadget: value 2 at horizon 2L+2 iff PARTITION solvable.

    The chain carries one zero-transit spare pair beyond the n value pairs
    so both directions always find an edge at every position.
    """
    n, L = p.n, p.half
    names = ["s1", "s2", "t1", "t2"] + [f"v{i}" for i in range(1, n + 3)]
    one = Fraction(1)
    transits = list(p.values) + [0]  # spare zero pair keeps both directions open
    edges: list[tuple[str, str, Fraction | float, int]] = []
    for i, tau in enumerate(transits, start=1):
        edges.append((f"v{i}", f"v{i + 1}", one, tau))
        edges.append((f"v{i}", f"v{i + 1}", one, 0))
    edges += [
        ("s1", "v1", one, L + 1),
        ("t2", "v1", one, L + 1),
        ("s2", f"v{n + 2}", one, 0),
        ("t1", f"v{n + 2}", one, 0),
    ]
    balances = {"s1": 1, "s2": 1, "t1": -1, "t2": -1}
    return build_undirected(names, edges, balances, 2 * L + 2)


def reduce_3sat_concurrent(phi: CnfFormula) -> tuple[UndirectedNetworkOverTime, CommoditySet]:
    """Concurrent-contraflow gadget: positive concurrent value iff satisfiable."""
    if phi.has_repeated_variable():
        raise ValidationError(
            "repeated variable within a clause (rejected: demand placement ambiguous)"
        )
    ell = phi.num_clauses
    names = [f"c{j}" for j in range(1, ell + 1)]
    for i in range(1, phi.k + 1):
        names += [
            f"x{i}^1", f"x{i}^2", f"~x{i}^1", f"~x{i}^2",
            f"x{i}-", f"~x{i}-", f"d{i}-", f"~d{i}-", f"d{i}+",
        ]
    cap = Fraction(ell)
    edges: list[tuple[str, str, Fraction | float, int]] = []
    for j, clause in enumerate(phi.clauses, start=1):
        for var, neg in clause:
            edges.append((f"c{j}", _literal_names(var, neg)[0], cap, 0))
    for i in range(1, phi.k + 1):
        edges += [
            (f"d{i}+", f"x{i}^2", cap, 0),
            (f"d{i}+", f"~x{i}^2", cap, 0),
            (f"x{i}^1", f"d{i}-", cap, 0),
            (f"~x{i}^1", f"~d{i}-", cap, 0),
            (f"x{i}^2", f"x{i}-", cap, 0),
            (f"~x{i}^2", f"~x{i}-", cap, 0),
            (f"x{i}^1", f"x{i}^2", cap, 0),
            (f"~x{i}^1", f"~x{i}^2", cap, 0),
        ]
    index = {name: v for v, name in enumerate(names)}
    n = len(names)
    commodities: list[Commodity] = []
    balances = [Fraction(0)] * n
    for i in range(1, phi.k + 1):
        bal = [Fraction(0)] * n
        bal[index[f"d{i}+"]] = Fraction(2)
        bal[index[f"d{i}-"]] = Fraction(-1)
        bal[index[f"~d{i}-"]] = Fraction(-1)
        commodities.append(Commodity(len(commodities), tuple(bal)))
        for v, b in enumerate(bal):
            balances[v] += b
    for j, clause in enumerate(phi.clauses, start=1):
        bal = [Fraction(0)] * n
        bal[index[f"c{j}"]] = Fraction(3)
        for var, neg in clause:
            sink = f"~x{var}-" if neg else f"x{var}-"
            bal[index[sink]] = Fraction(-1)
        commodities.append(Commodity(len(commodities), tuple(bal)))
        for v, b in enumerate(bal):
            balances[v] += b
    net = build_undirected(names, edges, dict(zip(names, balances)))
    return net, CommoditySet(tuple(commodities))


def reduce_3sat_mc_quickest(phi: CnfFormula, C: int) -> tuple[UndirectedNetworkOverTime, CommoditySet]:
    """Quickest multicommodity gadget: 1 time unit iff satisfiable, else >= C/(2l).

    C must be even so the demand (C^2+C)/2 splits integrally between the
    two d-sinks of each variable, and C >= l so clause traffic fits the
    in-block capacities.
    """
    ell = phi.num_clauses
    _require(isinstance(C, int) and C >= ell >= 1, "C must be an integer >= number of clauses")
    _require(C % 2 == 0, "C must be even")
    names = ["c-"] + [f"c{j}" for j in range(1, ell + 1)]
    for i in range(1, phi.k + 1):
        names += [
            f"x{i}^1", f"x{i}^2", f"~x{i}^1", f"~x{i}^2",
            f"d{i}-", f"~d{i}-", f"d{i}+", f"dh{i}+",
        ]
    edges: list[tuple[str, str, Fraction | float, int]] = []
    for j, clause in enumerate(phi.clauses, start=1):
        for var, neg in clause:
            edges.append((f"c{j}", _literal_names(var, neg)[0], Fraction(1), 0))
    big = Fraction(C) * C
    for i in range(1, phi.k + 1):
        edges += [
            (f"d{i}+", f"x{i}^2", Fraction(C), 0),
            (f"d{i}+", f"~x{i}^2", Fraction(C), 0),
            (f"x{i}^1", f"d{i}-", Fraction(C), 0),
            (f"~x{i}^1", f"~d{i}-", Fraction(C), 0),
            (f"x{i}^2", "c-", Fraction(ell), 0),
            (f"~x{i}^2", "c-", Fraction(ell), 0),
            (f"x{i}^1", f"x{i}^2", Fraction(C), 0),
            (f"~x{i}^1", f"~x{i}^2", Fraction(C), 0),
            (f"dh{i}+", f"d{i}-", big, 0),
            (f"dh{i}+", f"~d{i}-", big, 0),
        ]
    index = {name: v for v, name in enumerate(names)}
    n = len(names)
    half = Fraction(C * C + C, 2)
    commodities: list[Commodity] = []
    balances = [Fraction(0)] * n
    for i in range(1, phi.k + 1):
        bal = [Fraction(0)] * n
        bal[index[f"d{i}+"]] = Fraction(C)
        bal[index[f"dh{i}+"]] = big
        bal[index[f"d{i}-"]] = -half
        bal[index[f"~d{i}-"]] = -half
        commodities.append(Commodity(len(commodities), tuple(bal)))
        for v, b in enumerate(bal):
            balances[v] += b
    for j in range(1, ell + 1):
        bal = [Fraction(0)] * n
        bal[index[f"c{j}"]] = Fraction(1)
        bal[index["c-"]] = Fraction(-1)
        commodities.append(Commodity(len(commodities), tuple(bal)))
        for v, b in enumerate(bal):
            balances[v] += b
    net = build_undirected(names, edges, dict(zip(names, balances)))
    return net, CommoditySet(tuple(commodities))


# --------------------------------------------------------------------------
# Orientation helpers for the reductions


def variable_edge_pairs(net: UndirectedNetworkOverTime, k: int) -> list[tuple[int, int]]:
    """Edge ids of ({x^1,x^2}, {~x^1,~x^2}) per variable, found by name."""
    by_ends = {frozenset((net.names[e.u], net.names[e.v])): e.id for e in net.edges}
    pairs = []
    for i in range(1, k + 1):
        pos = by_ends.get(frozenset((f"x{i}^1", f"x{i}^2")))
        neg = by_ends.get(frozenset((f"~x{i}^1", f"~x{i}^2")))
        if pos is None or neg is None:
            raise ValidationError(f"variable {i} edges missing from network")
        pairs.append((pos, neg))
    return pairs


def canonical_orientation(
    net: UndirectedNetworkOverTime, choices: Mapping[int, bool] | None = None
) -> Orientation:
    """Orient `choices` edges explicitly (True flips the stored direction)
    and every other edge away from sources / toward sinks."""
    choices = choices or {}
    arcs: list[tuple[int, int]] = []
    for e in net.edges:
        if e.id in choices:
            arcs.append((e.v, e.u) if choices[e.id] else (e.u, e.v))
            continue
        bu, bv = net.balances[e.u], net.balances[e.v]
        if bu > 0 or bv < 0:
            arcs.append((e.u, e.v))
        elif bv > 0 or bu < 0:
            arcs.append((e.v, e.u))
        else:
            arcs.append((e.u, e.v))  # no terminal endpoint: direction is immaterial
    return Orientation(tuple(arcs))


def assignment_orientation(
    net: UndirectedNetworkOverTime, phi: CnfFormula, assignment: Sequence[bool]
) -> Orientation:
    """Proof orientation: true literal edges point 1 -> 2, false ones 2 -> 1."""
    if len(assignment) != phi.k:
        raise ValidationError("assignment length differs from variable count")
    choices: dict[int, bool] = {}
    for i, (pos, neg) in enumerate(variable_edge_pairs(net, phi.k)):
        choices[pos] = not assignment[i]
        choices[neg] = bool(assignment[i])
    return canonical_orientation(net, choices)


def restricted_orientations(
    net: UndirectedNetworkOverTime, free_edges: Sequence[int]
) -> Iterator[Orientation]:
    """All orientations that differ only on free_edges; the rest canonical."""
    for mask in range(2 ** len(free_edges)):
        yield canonical_orientation(
            net, {e: bool(mask >> i & 1) for i, e in enumerate(free_edges)}
        )


def _source_sink_distances(net: DirectedNetworkOverTime) -> dict[int, dict[int, int]]:
    """Shortest transit from every source to every sink, per source."""
    import heapq

    out: dict[int, list[tuple[int, int]]] = {v: [] for v in range(net.n)}
    for e in net.edges:
        out[e.tail].append((e.head, e.transit))
    dists: dict[int, dict[int, int]] = {}
    sinks = net.sinks()
    for s in net.sources():
        dist = {s: 0}
        heap = [(0, s)]
        while heap:
            d, v = heapq.heappop(heap)
            if d > dist.get(v, d):
                continue
            for w, tau in out[v]:
                nd = d + tau
                if nd < dist.get(w, nd + 1):
                    dist[w] = nd
                    heapq.heappush(heap, (nd, w))
        dists[s] = {t: dist[t] for t in sinks if t in dist}
    return dists


def point_mass_feasible(net: DirectedNetworkOverTime, T) -> bool:
    """Can all supplies reach their demands along paths of transit <= T?

    Exact for infinite capacities, where flow may depart in an arbitrarily
    small window: feasibility degenerates to a transportation problem
    between sources and sinks with admissible pairs dist <= T.
    """
    from .static_flow import static_max_flow_value

    if any(not is_infinite(e.capacity) for e in net.edges):
        raise ValidationError("point-mass feasibility requires infinite capacities")
    dists = _source_sink_distances(net)
    sources, sinks = net.sources(), net.sinks()
    names = [f"p{v}" for v in sources] + [f"q{v}" for v in sinks]
    arcs = [
        (f"p{s}", f"q{t}", INF, 0)
        for s in sources
        for t in sinks
        if dists[s].get(t, math.inf) <= T
    ]
    balances = {f"p{v}": net.balances[v] for v in sources}
    balances.update({f"q{v}": net.balances[v] for v in sinks})
    from .model import build_directed

    transport = build_directed(names, arcs, balances)
    return static_max_flow_value(transport) == net.total_supply()


def quickest_unbounded_infimum(net: DirectedNetworkOverTime):
    """Infimum over horizons fulfilling all balances; infinite capacities only.

    The continuous optimum of the all-infinite gadgets is not attained
    (shrinking departure windows push the horizon to a limit), so the
    integer-horizon oracle overshoots by one; this returns the exact
    infimum instead.
    """
    dists = _source_sink_distances(net)
    # feasibility is monotone in T, so the first feasible candidate wins
    for T in sorted({d for row in dists.values() for d in row.values()}):
        if point_mass_feasible(net, T):
            return T
    return INF


def restricted_quickest_contraflow(
    net: UndirectedNetworkOverTime,
    free_edges: Sequence[int],
    widen: Sequence[int] = (),
    infimum: bool = False,
):
    """Best quickest time over the restricted orientation set.

    `widen` adds edge ids to the enumeration for stress-testing the
    proof-derived restriction.  `infimum` switches to the unbounded-gadget
    metric (exact limit instead of the first feasible integer horizon).
    """
    free = list(free_edges) + [e for e in widen if e not in free_edges]
    best = INF
    best_orientation: Orientation | None = None
    for orientation in restricted_orientations(net, free):
        dnet = apply_orientation(net, orientation)
        t = quickest_unbounded_infimum(dnet) if infimum else quickest_transshipment_time(dnet)
        if t < best:
            best, best_orientation = t, orientation
    return best, best_orientation


def _slower_worker(args) -> bool:
    net, lo, hi, T, target, point_mass = args
    for bits in range(lo, hi):
        dnet = apply_orientation(net, Orientation.from_bits(net, bits))
        if point_mass:
            if point_mass_feasible(dnet, T):
                return False
        elif max_flow_over_time(dnet, T, witness=False)[0] >= target:
            return False
    return True


def all_orientations_slower_than(
    net: UndirectedNetworkOverTime, T: int, jobs: int | None = None, point_mass: bool = False
) -> bool:
    """True iff no total orientation fulfills all balances by horizon T.

    Exhaustive over 2^m orientations; one oracle call each, parallel in
    chunks.  With point_mass the check uses the unbounded-capacity
    transportation oracle, so a True result bounds the quickest infimum
    strictly above T for every orientation.
    """
    from .orient import DEFAULT_BRUTE_FORCE_CAP, CapExceeded, default_jobs

    if net.m > DEFAULT_BRUTE_FORCE_CAP:
        raise CapExceeded(f"{net.m} edges exceed the enumeration cap")
    total = 2**net.m
    target = net.total_supply()
    jobs = jobs or default_jobs()
    if jobs <= 1 or total < 1024:
        return _slower_worker((net, 0, total, T, target, point_mass))
    chunk = -(-total // (jobs * 4))
    tasks = [
        (net, lo, min(lo + chunk, total), T, target, point_mass)
        for lo in range(0, total, chunk)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return all(pool.map(_slower_worker, tasks))


# --------------------------------------------------------------------------
# Static multicommodity feasibility (zero transits)


def _mc_lp(
    net: DirectedNetworkOverTime,
    commodities: CommoditySet,
    lam: Fraction | None,
    proportional: bool = False,
):
    """Build the shared-capacity routing LP.  lam=None adds lambda as a
    variable and minimizes -lambda; otherwise the LP is pure feasibility.

    Flexible mode (default) bounds terminals by their balances and asks the
    received total to cover a lambda fraction of demand.  Proportional mode
    pins every terminal to exactly lambda times its balance, which is the
    full-delivery scaling used by the quickest oracle."""
    m = len(net.edges)
    ncom = len(commodities)
    cols: dict[str, int] = {}
    for j in range(ncom):
        for a in range(m):
            cols[f"f{j}_{a}"] = len(cols)
    for j, com in enumerate(commodities):
        for v in com.sources():
            cols[f"s{j}_{v}"] = len(cols)
        for v in com.sinks():
            cols[f"r{j}_{v}"] = len(cols)
    lam_col = None
    if lam is None:
        lam_col = len(cols)
        cols["lam"] = lam_col
    width = len(cols)

    A_eq: list[list[Fraction]] = []
    b_eq: list[Fraction] = []
    A_ub: list[list[Fraction]] = []
    b_ub: list[Fraction] = []
    zero = Fraction(0)

    for j, com in enumerate(commodities):
        for v in range(net.n):
            row = [zero] * width
            touched = False
            for e in net.edges:
                if e.head == v:
                    row[cols[f"f{j}_{e.id}"]] += 1
                    touched = True
                if e.tail == v:
                    row[cols[f"f{j}_{e.id}"]] -= 1
                    touched = True
            b = com.balances[v]
            if b > 0:
                row[cols[f"s{j}_{v}"]] += 1  # inflow - outflow + sent = 0
                touched = True
            elif b < 0:
                row[cols[f"r{j}_{v}"]] -= 1  # inflow - outflow = received
                touched = True
            if touched:
                A_eq.append(row)
                b_eq.append(zero)
        if proportional:
            for v in com.sources():
                row = [zero] * width
                row[cols[f"s{j}_{v}"]] = Fraction(1)
                if lam_col is None:
                    b_eq.append(lam * com.balances[v])
                else:
                    row[lam_col] = -com.balances[v]
                    b_eq.append(zero)
                A_eq.append(row)
            for v in com.sinks():
                row = [zero] * width
                row[cols[f"r{j}_{v}"]] = Fraction(1)
                if lam_col is None:
                    b_eq.append(-lam * com.balances[v])
                else:
                    row[lam_col] = com.balances[v]
                    b_eq.append(zero)
                A_eq.append(row)
            continue
        for v in com.sources():
            row = [zero] * width
            row[cols[f"s{j}_{v}"]] = Fraction(1)
            A_ub.append(row)
            b_ub.append(com.balances[v])
        for v in com.sinks():
            row = [zero] * width
            row[cols[f"r{j}_{v}"]] = Fraction(1)
            A_ub.append(row)
            b_ub.append(-com.balances[v])
        # total received must cover the lambda fraction of total demand
        row = [zero] * width
        for v in com.sinks():
            row[cols[f"r{j}_{v}"]] = Fraction(-1)
        demand = -sum(com.balances[v] for v in com.sinks())
        if lam_col is None:
            A_ub.append(row)
            b_ub.append(-lam * demand)
        else:
            row[lam_col] = demand
            A_ub.append(row)
            b_ub.append(zero)
    for e in net.edges:
        if is_infinite(e.capacity):
            continue
        row = [zero] * width
        for j in range(ncom):
            row[cols[f"f{j}_{e.id}"]] = Fraction(1)
        A_ub.append(row)
        b_ub.append(e.capacity)
    if lam_col is not None and not proportional:
        row = [zero] * width
        row[lam_col] = Fraction(1)
        A_ub.append(row)
        b_ub.append(Fraction(1))
    c = [zero] * width
    if lam_col is not None:
        c[lam_col] = Fraction(-1)
    return c, A_ub, b_ub, A_eq, b_eq


def _check_static_mc(net: DirectedNetworkOverTime, commodities: CommoditySet) -> None:
    if not isinstance(net, DirectedNetworkOverTime):
        raise ValidationError("multicommodity oracle expects an oriented network")
    if any(e.transit for e in net.edges):
        raise ValidationError("multicommodity oracle requires zero transit times")
    for com in commodities:
        if len(com.balances) != net.n:
            raise ValidationError(f"commodity {com.id} balance vector length mismatch")
        if sum(com.balances, Fraction(0)):
            raise ValidationError(f"commodity {com.id} balances do not sum to zero")


def static_mc_feasibility(
    net: DirectedNetworkOverTime,
    commodities: CommoditySet,
    lam,
    proportional: bool = False,
) -> bool:
    """Can every commodity route >= lam of its demand under shared capacities?

    With proportional=True the question becomes: can every terminal send or
    receive exactly lam times its balance?"""
    _check_static_mc(net, commodities)
    lam = Fraction(lam)
    if proportional:
        if lam < 0:
            raise ValidationError("lambda must be nonnegative")
    elif not 0 <= lam <= 1:
        raise ValidationError("lambda must lie in [0, 1]")
    result = solve_lp(*_mc_lp(net, commodities, lam, proportional))
    return result.status == OPTIMAL


def _commodity_routable(net: DirectedNetworkOverTime, com: Commodity) -> bool:
    """Full-delivery feasibility for one commodity alone, capacities lifted."""
    from .model import build_directed
    from .static_flow import static_max_flow_value

    names = [f"n{v}" for v in range(net.n)]
    arcs = [(f"n{e.tail}", f"n{e.head}", INF, 0) for e in net.edges if e.capacity > 0]
    balances = {f"n{v}": b for v, b in enumerate(com.balances) if b}
    supply = sum(b for b in com.balances if b > 0)
    relaxed = build_directed(names, arcs, balances)
    return static_max_flow_value(relaxed) == supply


def max_concurrent_lambda(
    net: DirectedNetworkOverTime,
    commodities: CommoditySet,
    proportional: bool = False,
) -> Fraction:
    """Largest concurrent fraction; exact.

    A commodity with no supply-to-sink path pins the value to zero, and
    conversely individually routable commodities can share capacity after
    scaling, so the reachability screen is exact for the zero case and the
    LP only runs on instances with positive value.  Proportional mode
    requires every terminal of a commodity to participate, so its screen is
    full single-commodity delivery with capacities lifted.
    """
    _check_static_mc(net, commodities)
    if proportional:
        if not all(_commodity_routable(net, com) for com in commodities):
            return Fraction(0)
        result = solve_lp(*_mc_lp(net, commodities, None, proportional=True))
        if result.status == UNBOUNDED:
            return INF
        assert result.status == OPTIMAL, "routable commodities admit lambda > 0"
        return -result.objective
    out: dict[int, list[int]] = {v: [] for v in range(net.n)}
    for e in net.edges:
        if e.capacity > 0:
            out[e.tail].append(e.head)
    for com in commodities:
        frontier = deque(com.sources())
        seen = set(frontier)
        sinks = set(com.sinks())
        while frontier and not seen & sinks:
            v = frontier.popleft()
            for w in out[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
        if not seen & sinks:
            return Fraction(0)
    result = solve_lp(*_mc_lp(net, commodities, None))
    assert result.status == OPTIMAL, "lambda in [0,1] keeps the LP bounded"
    return -result.objective


def max_concurrent_over_restricted(
    net: UndirectedNetworkOverTime,
    commodities: CommoditySet,
    free_edges: Sequence[int],
) -> tuple[Fraction, Orientation | None]:
    """Best concurrent value over the restricted orientation set."""
    best = Fraction(-1)
    best_orientation: Orientation | None = None
    for orientation in restricted_orientations(net, free_edges):
        lam = max_concurrent_lambda(apply_orientation(net, orientation), commodities)
        if lam > best:
            best, best_orientation = lam, orientation
    return best, best_orientation


def quickest_mc_time(
    net: DirectedNetworkOverTime, commodities: CommoditySet
) -> Fraction | None:
    """Minimal horizon routing every balance in full; zero transits.

    Feasibility at horizon t is the static problem with capacities scaled by
    t, so the quickest time is 1/lambda* in the proportional LP.  Returns
    None when some commodity cannot be delivered at any horizon, and 0 when
    the scaling is unbounded (all relevant capacities infinite).
    """
    lam = max_concurrent_lambda(net, commodities, proportional=True)
    if lam == 0:
        return None
    if is_infinite(lam):
        return Fraction(0)
    return 1 / lam


def quickest_mc_over_restricted(
    net: UndirectedNetworkOverTime,
    commodities: CommoditySet,
    free_edges: Sequence[int],
) -> tuple[Fraction | None, Orientation | None]:
    """Fastest full delivery over the restricted orientation set."""
    best: Fraction | None = None
    best_orientation: Orientation | None = None
    for orientation in restricted_orientations(net, free_edges):
        t = quickest_mc_time(apply_orientation(net, orientation), commodities)
        if t is not None and (best is None or t < best):
            best, best_orientation = t, orientation
    return best, best_orientation
