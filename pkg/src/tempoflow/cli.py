"""Command-line surface: generation, solving, orientation, verification.

Every command writes a deterministic JSON result (sorted keys, exact
rationals, no timestamps); the report commands additionally write a CSV
table and a PNG figure next to it.  Runtime metadata such as wall-clock
time goes to a separate sidecar requested with --meta, keeping result
files byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import generators as gen
from .model import (
    CommoditySet,
    Orientation,
    UndirectedNetworkOverTime,
    ValidationError,
    apply_orientation,
    format_rational,
    is_infinite,
    load_instance,
    parse_rational,
    save_instance,
)
from .orient import (
    DEFAULT_BRUTE_FORCE_CAP,
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    CapExceeded,
    FixedPointDivergence,
    PreconditionError,
    add_super_terminals,
    bicriteria_orient,
    brute_force_best_orientation,
    default_jobs,
    eaf_contraflow_experiment,
    fixed_point_capacity_iteration,
    orient_one_third,
)
from .report import (
    format_table,
    render_eaf_figure,
    render_pattern_figure,
    render_price_figure,
    write_csv,
)
from .temporal import (
    earliest_arrival_pattern,
    max_flow_over_time,
    quickest_transshipment_time,
)

DEFAULT_MAX_HORIZON = 10**6


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    instance: str | None  # instance path, or generator family name
    horizon: int | None
    algorithm: str | None
    max_edges: int  # orientation enumeration cap
    max_horizon: int  # largest accepted horizon / pattern sweep bound
    tolerance: Fraction
    damping: Fraction
    jobs: int
    out: str | None

    def __post_init__(self):
        if self.max_edges <= 0 or self.max_horizon <= 0:
            raise ValidationError("oracle caps must be positive")
        if self.tolerance <= 0:
            raise ValidationError("tolerance must be positive")
        if not 0 < self.damping <= 1:
            raise ValidationError("damping must lie in (0, 1]")


# ---------------------------------------------------------------------------
# Serialization helpers


def _write_json(path, data: dict) -> None:
    with open(path, "w") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_meta(path, started: float) -> None:
    meta = {
        "written_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "elapsed_seconds": round(time.time() - started, 3),
    }
    _write_json(path, meta)


def _orientation_json(net, orientation: Orientation) -> dict:
    return {
        str(e.id): f"{net.names[orientation.arcs[e.id][0]]}>{net.names[orientation.arcs[e.id][1]]}"
        for e in net.edges
    }


def _pattern_json(pattern) -> dict:
    return {str(theta): format_rational(v) for theta, v in sorted(pattern.items())}


def _flow_json(flow) -> dict:
    return {
        "horizon": flow.horizon,
        "value": format_rational(flow.value),
        "rates": {
            str(eid): [
                {
                    "start": p.start,
                    "end": p.end,
                    "rate": format_rational(p.rate),
                    "reverse": p.reverse,
                }
                for p in ps
            ]
            for eid, ps in sorted(flow.pieces.items())
        },
    }


def _value_str(x) -> str:
    if x is None:
        return "inf"
    return format_rational(x)


def _load_single_commodity(path):
    net, commodities = load_instance(path)
    if commodities is not None:
        raise ValidationError(
            "multicommodity instances are handled by verify-reduction, not this command"
        )
    return net


def _with_horizon(net, horizon: int | None, config: ExperimentConfig) -> int:
    T = horizon if horizon is not None else net.horizon
    if T is None:
        raise ValidationError("this command needs --horizon or an instance horizon")
    if T < 0:
        raise ValidationError("horizon must be nonnegative")
    if T > config.max_horizon:
        raise CapExceeded(f"horizon {T} exceeds the cap of {config.max_horizon}")
    return T


# ---------------------------------------------------------------------------
# generate


def _require_param(value, name: str, family: str):
    if value is None:
        raise ValidationError(f"family {family!r} needs --{name}")
    return value


def _read_cnf(args) -> gen.CnfFormula:
    path = _require_param(args.cnf, "cnf", args.family if hasattr(args, "family") else args.kind)
    return gen.parse_dimacs(Path(path).read_text())


def _read_partition(args) -> gen.PartitionInstance:
    if getattr(args, "values", None):
        return gen.PartitionInstance(tuple(args.values))
    name = args.family if hasattr(args, "family") else args.kind
    path = _require_param(getattr(args, "partition", None), "partition", name)
    return gen.parse_partition(Path(path).read_text())


def cmd_generate(args, config: ExperimentConfig) -> int:
    family = args.family
    delta = parse_rational(args.delta) if args.delta is not None else None
    commodities: CommoditySet | None = None
    params: dict = {}
    if family == "fig1":
        T = _require_param(args.T, "T", family)
        net, params = gen.gen_fig1(T), {"T": T}
    elif family == "flow-lb":
        T = _require_param(args.T, "T", family)
        d = _require_param(delta, "delta", family)
        eps = _require_param(args.eps, "eps", family)
        net = gen.gen_flow_price_lb(T, d, eps)
        params = {"T": T, "delta": format_rational(d), "eps": eps}
    elif family == "single-sink-lb":
        T = _require_param(args.T, "T", family)
        d = _require_param(delta, "delta", family)
        net = gen.gen_single_sink_lb(T, d)
        params = {"T": T, "delta": format_rational(d)}
    elif family == "single-source-lb":
        T = _require_param(args.T, "T", family)
        d = _require_param(delta, "delta", family)
        net = gen.gen_single_source_lb(T, d)
        params = {"T": T, "delta": format_rational(d)}
    elif family in ("time-lb-sink", "time-lb-source", "time-lb-tree", "unit-tree"):
        k = _require_param(args.k, "k", family)
        T = _require_param(args.T, "T", family)
        builder = {
            "time-lb-sink": gen.gen_time_price_single_sink,
            "time-lb-source": gen.gen_time_price_single_source,
            "time-lb-tree": gen.gen_time_price_tree,
            "unit-tree": gen.gen_unit_capacity_tree,
        }[family]
        net, params = builder(k, T), {"k": k, "T": T}
    elif family == "eaf":
        U = _require_param(args.U, "U", family)
        T = _require_param(args.T, "T", family)
        net, params = gen.gen_eaf(U, T), {"U": U, "T": T}
    elif family == "sat-quickest":
        phi = _read_cnf(args)
        net = gen.reduce_3sat_quickest(phi, args.tau1, args.tau2)
        params = {"k": phi.k, "clauses": phi.num_clauses, "tau1": args.tau1, "tau2": args.tau2}
    elif family == "partition-max":
        p = _read_partition(args)
        net = gen.reduce_partition_maxfot(p)
        params = {"values": list(p.values)}
    elif family == "sat-concurrent":
        phi = _read_cnf(args)
        net, commodities = gen.reduce_3sat_concurrent(phi)
        params = {"k": phi.k, "clauses": phi.num_clauses}
    elif family == "sat-mc-quickest":
        phi = _read_cnf(args)
        C = _require_param(args.C, "C", family)
        net, commodities = gen.reduce_3sat_mc_quickest(phi, C)
        params = {"k": phi.k, "clauses": phi.num_clauses, "C": C}
    else:  # pragma: no cover - argparse choices guard this
        raise ValidationError(f"unknown family {family!r}")
    save_instance(args.out, net, commodities, extra={"family": family, "params": params})
    if args.table:
        rows = [(family, net.n, net.m, _value_str(net.horizon) if net.horizon is not None else "")]
        sys.stdout.write(format_table(["family", "nodes", "edges", "horizon"], rows))
    return 0


# ---------------------------------------------------------------------------
# solve


def cmd_solve(args, config: ExperimentConfig) -> int:
    net = _load_single_commodity(args.instance)
    result: dict = {"command": "solve", "mode": args.mode, "instance": Path(args.instance).name}
    table_rows: list = []
    headers: list[str] = []
    if args.mode == "maxfot":
        T = _with_horizon(net, args.horizon, config)
        value, flow = max_flow_over_time(net, T, witness=True)
        report = flow.check_feasibility()
        if not report.ok or flow.value != value:
            raise AssertionError(f"witness failed re-validation: {report.problems[:3]}")
        result.update({"horizon": T, "value": format_rational(value), "witness": _flow_json(flow)})
        headers, table_rows = ["horizon", "value"], [(T, value)]
    elif args.mode == "quickest":
        t = quickest_transshipment_time(net)
        B = net.total_supply()
        if not is_infinite(t):
            if max_flow_over_time(net, t, witness=False)[0] != B:
                raise AssertionError("quickest time failed re-validation at T")
            if t > 0 and max_flow_over_time(net, t - 1, witness=False)[0] >= B:
                raise AssertionError("quickest time failed re-validation at T-1")
        result.update(
            {
                "time": "inf" if is_infinite(t) else t,
                "interval": None if is_infinite(t) else [max(t - 1, 0), t],
                "supply": format_rational(B),
            }
        )
        headers, table_rows = ["supply", "quickest"], [(B, "inf" if is_infinite(t) else t)]
    else:  # pattern
        t_max = args.t_max if args.t_max is not None else net.horizon
        t_max = _with_horizon(net, t_max, config)
        pattern = earliest_arrival_pattern(net, t_max)
        result.update({"t_max": t_max, "pattern": _pattern_json(pattern)})
        headers = ["theta", "value"]
        table_rows = sorted(pattern.items())
    _write_json(args.out, result)
    if args.table:
        sys.stdout.write(format_table(headers, table_rows))
    return 0


# ---------------------------------------------------------------------------
# orient


def _resolve_oriented_value(net, orientation: Orientation, T: int) -> Fraction:
    oriented = apply_orientation(net, orientation)
    return max_flow_over_time(oriented, T, witness=False)[0]


def cmd_orient(args, config: ExperimentConfig) -> int:
    net = _load_single_commodity(args.instance)
    if not isinstance(net, UndirectedNetworkOverTime):
        raise ValidationError("orientation commands need an undirected instance")
    result: dict = {
        "command": "orient",
        "algorithm": args.algorithm,
        "instance": Path(args.instance).name,
    }
    if args.algorithm == "bruteforce":
        T = _with_horizon(net, args.horizon, config)
        run = UndirectedNetworkOverTime(net.names, net.edges, net.balances, T)
        report = brute_force_best_orientation(run, "flow", cap=config.max_edges, jobs=config.jobs)
        check = _resolve_oriented_value(net, report.witness, T)
        if check != report.oriented:
            raise AssertionError("witness re-evaluation disagrees with reported optimum")
        result.update(
            {
                "horizon": T,
                "value": format_rational(report.oriented),
                "undirected": format_rational(report.undirected),
                "orientation": _orientation_json(net, report.witness),
                "witness_bits": report.witness_bits,
                "status": "exact",
            }
        )
    elif args.algorithm == "bicriteria":
        T = _with_horizon(net, args.horizon, config)
        res = bicriteria_orient(net, T)
        check = _resolve_oriented_value(net, res.orientation, 2 * T)
        if check < res.value:
            raise AssertionError("oriented re-solve fell below the certified value")
        result.update(
            {
                "horizon": 2 * T,
                "value": format_rational(res.value),
                "supply": format_rational(net.total_supply()),
                "orientation": _orientation_json(net, res.orientation),
                "status": "certified",
            }
        )
    else:  # fixedpoint
        T = _with_horizon(net, args.horizon, config)
        B = net.total_supply()
        und = max_flow_over_time(net, T, witness=False)[0]
        if und != B:
            raise PreconditionError(
                f"undirected instance sends {und} at horizon {T}, not its supply {B}"
            )
        sup = add_super_terminals(net)
        fp = fixed_point_capacity_iteration(
            sup, T, max_iter=args.max_iter, tol=config.tolerance, damping=config.damping
        )
        if fp.status != "converged" or not fp.certificate_ok:
            result.update(
                {
                    "horizon": T,
                    "status": fp.status,
                    "iterations": fp.iterations,
                    "gap": format_rational(fp.gap),
                    "certificate_ok": fp.certificate_ok,
                }
            )
            _write_json(args.out, result)
            raise FixedPointDivergence(
                f"no certified fixed point after {fp.iterations} iterations "
                f"(status {fp.status}); report written to {args.out}"
            )
        res = orient_one_third(
            net, T, max_iter=args.max_iter, tol=config.tolerance, damping=config.damping
        )
        check = _resolve_oriented_value(net, res.orientation, T)
        if check < res.value:
            raise AssertionError("oriented re-solve fell below the certified value")
        result.update(
            {
                "horizon": T,
                "value": format_rational(res.value),
                "supply": format_rational(B),
                "orientation": _orientation_json(net, res.orientation),
                "status": res.fixed_point.status,
                "iterations": res.fixed_point.iterations,
                "gap": format_rational(res.fixed_point.gap),
                "certified_bound": format_rational(res.partition.certified_bound),
                "bound_source": res.partition.bound_source,
            }
        )
    _write_json(args.out, result)
    if args.table:
        keys = [k for k in ("horizon", "value", "status", "certified_bound") if k in result]
        sys.stdout.write(format_table(keys, [tuple(result[k] for k in keys)]))
    return 0


# ---------------------------------------------------------------------------
# price


def cmd_price(args, config: ExperimentConfig) -> int:
    net = _load_single_commodity(args.instance)
    if not isinstance(net, UndirectedNetworkOverTime):
        raise ValidationError("price experiments need an undirected instance")
    if args.kind == "flow":
        T = _with_horizon(net, args.horizon, config)
        run = UndirectedNetworkOverTime(net.names, net.edges, net.balances, T)
        report = brute_force_best_orientation(run, "flow", cap=config.max_edges, jobs=config.jobs)
        check = _resolve_oriented_value(net, report.witness, T)
    else:
        run = net
        report = brute_force_best_orientation(
            run, "quickest", cap=config.max_edges, jobs=config.jobs
        )
        check = quickest_transshipment_time(apply_orientation(net, report.witness))
    if check != report.oriented:
        raise AssertionError("witness re-evaluation disagrees with reported optimum")
    result = {
        "command": "price",
        "kind": args.kind,
        "objective": report.objective,
        "instance": Path(args.instance).name,
        "undirected": _value_str(report.undirected),
        "oriented": _value_str(report.oriented),
        "ratio": _value_str(report.ratio),
        "horizon": report.horizon,
        "witness_bits": report.witness_bits,
        "witness": _orientation_json(net, report.witness),
    }
    _write_json(args.out, result)
    headers = ["kind", "undirected", "oriented", "ratio", "horizon"]
    rows = [(args.kind, report.undirected, report.oriented, report.ratio, report.horizon)]
    base = Path(args.out)
    write_csv(base.with_suffix(".csv"), headers, rows)
    render_price_figure(
        base.with_suffix(".png"), report, f"price of orientation ({args.kind})"
    )
    if args.table:
        sys.stdout.write(format_table(headers, rows))
    return 0


# ---------------------------------------------------------------------------
# verify-reduction


def _verify_sat_quickest(args, phi, assignment):
    net = gen.reduce_3sat_quickest(phi, args.tau1, args.tau2)
    free = [e for pair in gen.variable_edge_pairs(net, phi.k) for e in pair]
    measured, _ = gen.restricted_quickest_contraflow(net, free, infimum=True)
    if assignment is not None:
        expected = Fraction(args.tau1 + 2 * args.tau2)
        confirmed = measured == expected
        expected_text = f"= {expected}"
    else:
        expected = Fraction(2 * args.tau1)
        confirmed = is_infinite(measured) or measured >= expected
        expected_text = f">= {expected}"
    return expected_text, _value_str(None if is_infinite(measured) else measured), confirmed


def _verify_sat_concurrent(net, commodities, phi, assignment):
    if assignment is not None:
        oriented = apply_orientation(net, gen.assignment_orientation(net, phi, assignment))
        lam = gen.max_concurrent_lambda(oriented, commodities)
        return ">= 1/3", format_rational(lam), lam >= Fraction(1, 3)
    free = [e for pair in gen.variable_edge_pairs(net, phi.k) for e in pair]
    best, _ = gen.max_concurrent_over_restricted(net, commodities, free)
    return "= 0", format_rational(best), best == 0


def _verify_sat_mc_quickest(net, commodities, phi, assignment, C: int):
    if assignment is not None:
        oriented = apply_orientation(net, gen.assignment_orientation(net, phi, assignment))
        t = gen.quickest_mc_time(oriented, commodities)
        return "= 1", _value_str(t), t == 1
    free = [e for pair in gen.variable_edge_pairs(net, phi.k) for e in pair]
    best, _ = gen.quickest_mc_over_restricted(net, commodities, free)
    bound = Fraction(C, 2 * phi.num_clauses)
    confirmed = best is None or best >= bound
    return f">= {bound}", _value_str(best), confirmed


def cmd_verify_reduction(args, config: ExperimentConfig) -> int:
    result: dict = {"command": "verify-reduction", "kind": args.kind}
    if args.kind == "partition-max":
        p = _read_partition(args)
        net = gen.reduce_partition_maxfot(p)
        report = brute_force_best_orientation(net, "flow", cap=config.max_edges, jobs=config.jobs)
        expected = Fraction(2 if p.has_solution() else 1)
        result.update(
            {
                "values": list(p.values),
                "has_solution": p.has_solution(),
                "expected": f"= {expected}",
                "measured": format_rational(report.oriented),
                "confirmed": report.oriented == expected,
            }
        )
    else:
        phi = _read_cnf(args)
        assignment = gen.dpll_assignment(phi)
        result.update(
            {"variables": phi.k, "clauses": phi.num_clauses, "satisfiable": assignment is not None}
        )
        if args.kind == "sat-quickest":
            expected_text, measured, confirmed = _verify_sat_quickest(args, phi, assignment)
            result.update({"tau1": args.tau1, "tau2": args.tau2})
        elif args.kind == "sat-concurrent":
            net, commodities = gen.reduce_3sat_concurrent(phi)
            expected_text, measured, confirmed = _verify_sat_concurrent(
                net, commodities, phi, assignment
            )
        else:  # sat-mc-quickest
            C = _require_param(args.C, "C", args.kind)
            net, commodities = gen.reduce_3sat_mc_quickest(phi, C)
            expected_text, measured, confirmed = _verify_sat_mc_quickest(
                net, commodities, phi, assignment, C
            )
            result["C"] = C
        result.update({"expected": expected_text, "measured": measured, "confirmed": confirmed})
    _write_json(args.out, result)
    if args.table:
        headers = ["kind", "expected", "measured", "confirmed"]
        rows = [(args.kind, result["expected"], result["measured"], result["confirmed"])]
        sys.stdout.write(format_table(headers, rows))
    return 0


# ---------------------------------------------------------------------------
# pattern / eaf-experiment (report paths: JSON + CSV + PNG)


def cmd_pattern(args, config: ExperimentConfig) -> int:
    net = _load_single_commodity(args.instance)
    t_max = args.t_max if args.t_max is not None else net.horizon
    t_max = _with_horizon(net, t_max, config)
    pattern = earliest_arrival_pattern(net, t_max)
    result = {
        "command": "pattern",
        "instance": Path(args.instance).name,
        "t_max": t_max,
        "pattern": _pattern_json(pattern),
    }
    _write_json(args.out, result)
    rows = sorted(pattern.items())
    base = Path(args.out)
    write_csv(base.with_suffix(".csv"), ["theta", "value"], rows)
    render_pattern_figure(
        base.with_suffix(".png"), {"instance": pattern}, "earliest arrival pattern"
    )
    if args.table:
        sys.stdout.write(format_table(["theta", "value"], rows))
    return 0


def cmd_eaf_experiment(args, config: ExperimentConfig) -> int:
    net = _load_single_commodity(args.instance)
    if not isinstance(net, UndirectedNetworkOverTime):
        raise ValidationError("the contraflow experiment needs an undirected instance")
    t_max = args.t_max if args.t_max is not None else net.horizon
    t_max = _with_horizon(net, t_max, config)
    report = eaf_contraflow_experiment(net, t_max, cap=config.max_edges, jobs=config.jobs)
    result = {
        "command": "eaf-experiment",
        "instance": Path(args.instance).name,
        "t_max": t_max,
        "undirected_pattern": _pattern_json(report.undirected_pattern),
        "orientations": [
            {
                "bits": row.bits,
                "alpha": _value_str(None if is_infinite(row.alpha) else row.alpha),
                "alpha_attained": row.alpha_attained,
                "beta": _value_str(None if is_infinite(row.beta) else row.beta),
                "pattern": _pattern_json(row.pattern),
            }
            for row in report.rows
        ],
        "best_alpha": _value_str(None if is_infinite(report.best_alpha) else report.best_alpha),
        "best_alpha_bits": report.best_alpha_bits,
        "best_beta": _value_str(None if is_infinite(report.best_beta) else report.best_beta),
        "best_beta_bits": report.best_beta_bits,
    }
    _write_json(args.out, result)
    headers = ["bits", "alpha", "alpha_attained", "beta"]
    rows = [(r.bits, r.alpha, r.alpha_attained, r.beta) for r in report.rows]
    base = Path(args.out)
    write_csv(base.with_suffix(".csv"), headers, rows)
    render_eaf_figure(base.with_suffix(".png"), report, "earliest arrival under orientation")
    if args.table:
        sys.stdout.write(format_table(headers, rows))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p: argparse.ArgumentParser, needs_out: bool = True) -> None:
    p.add_argument("--out", required=needs_out, help="result file path (JSON)")
    p.add_argument("--table", action="store_true", help="also print an aligned text table")
    p.add_argument("--jobs", type=int, default=None, help="parallel workers (default TEMPOFLOW_JOBS)")
    p.add_argument("--max-edges", type=int, default=DEFAULT_BRUTE_FORCE_CAP, help="enumeration cap")
    p.add_argument(
        "--max-horizon", type=int, default=DEFAULT_MAX_HORIZON, help="largest accepted horizon"
    )
    p.add_argument("--tol", default=str(DEFAULT_TOL), help="fixed-point tolerance (rational)")
    p.add_argument("--damping", default="1", help="fixed-point damping factor in (0, 1]")
    p.add_argument("--meta", default=None, help="write runtime metadata (timestamp) to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tempoflow",
        description="Flow-over-time orientation experiments: generators, oracles, prices, reductions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a family instance as JSON")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--delta", default=None, help="rational, e.g. 1/4")
    p.add_argument("--eps", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--U", type=int, default=None)
    p.add_argument("--C", type=int, default=None)
    p.add_argument("--tau1", type=int, default=2)
    p.add_argument("--tau2", type=int, default=0)
    p.add_argument("--cnf", default=None, help="DIMACS CNF file (3 literals per clause)")
    p.add_argument("--partition", default=None, help="whitespace-separated integers file")
    p.add_argument("--values", type=int, nargs="+", default=None, help="inline partition values")
    _add_common(p)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("solve", help="exact single-commodity oracles")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("maxfot", "quickest", "pattern"), required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("orient", help="constructive and exact orientation algorithms")
    p.add_argument("instance")
    p.add_argument("--algorithm", choices=("bruteforce", "bicriteria", "fixedpoint"), required=True)
    p.add_argument("--horizon", type=int, default=None)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
    _add_common(p)
    p.set_defaults(handler=cmd_orient)

    p = sub.add_parser("price", help="price of orientation via exhaustive search")
    p.add_argument("instance")
    p.add_argument("--kind", choices=("flow", "time"), required=True)
    p.add_argument("--horizon", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_price)

    p = sub.add_parser("verify-reduction", help="measure a hardness-reduction gap")
    p.add_argument("kind", choices=("sat-quickest", "partition-max", "sat-concurrent", "sat-mc-quickest"))
    p.add_argument("--cnf", default=None, help="DIMACS CNF file (3 literals per clause)")
    p.add_argument("--partition", default=None, help="whitespace-separated integers file")
    p.add_argument("--values", type=int, nargs="+", default=None, help="inline partition values")
    p.add_argument("--tau1", type=int, default=2)
    p.add_argument("--tau2", type=int, default=0)
    p.add_argument("--C", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_verify_reduction)

    p = sub.add_parser("pattern", help="earliest arrival pattern report (JSON + CSV + PNG)")
    p.add_argument("instance")
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_pattern)

    p = sub.add_parser("eaf-experiment", help="per-orientation arrival curves (JSON + CSV + PNG)")
    p.add_argument("instance")
    p.add_argument("--t-max", dest="t_max", type=int, default=None)
    _add_common(p)
    p.set_defaults(handler=cmd_eaf_experiment)

    return parser


FAMILIES = (
    "fig1",
    "flow-lb",
    "single-sink-lb",
    "single-source-lb",
    "time-lb-sink",
    "time-lb-source",
    "time-lb-tree",
    "unit-tree",
    "eaf",
    "sat-quickest",
    "partition-max",
    "sat-concurrent",
    "sat-mc-quickest",
)


def _finite_rational(text: str, what: str) -> Fraction:
    value = parse_rational(text)
    if is_infinite(value):
        raise ValidationError(f"{what} must be finite")
    return Fraction(value)


def _config_from_args(args) -> ExperimentConfig:
    return ExperimentConfig(
        command=args.command,
        instance=getattr(args, "instance", None) or getattr(args, "family", None),
        horizon=getattr(args, "horizon", None),
        algorithm=getattr(args, "algorithm", None) or getattr(args, "mode", None)
        or getattr(args, "kind", None),
        max_edges=args.max_edges,
        max_horizon=args.max_horizon,
        tolerance=_finite_rational(args.tol, "tolerance"),
        damping=_finite_rational(args.damping, "damping"),
        jobs=args.jobs if args.jobs is not None else default_jobs(),
        out=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.time()
    try:
        config = _config_from_args(args)
        code = args.handler(args, config)
    except (ValidationError, PreconditionError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FixedPointDivergence as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    if args.meta:
        _write_meta(args.meta, started)
    return code


if __name__ == "__main__":
    sys.exit(main())
