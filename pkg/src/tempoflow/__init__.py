"""Flows over time on undirected networks under edge-orientation constraints."""

from .generators import (
    CnfFormula,
    PartitionInstance,
    assignment_orientation,
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
    max_concurrent_over_restricted,
    parse_dimacs,
    parse_partition,
    point_mass_feasible,
    quickest_mc_over_restricted,
    quickest_mc_time,
    quickest_unbounded_infimum,
    reduce_3sat_concurrent,
    reduce_3sat_mc_quickest,
    reduce_3sat_quickest,
    reduce_partition_maxfot,
    restricted_orientations,
    restricted_quickest_contraflow,
    static_mc_feasibility,
    variable_edge_pairs,
)
from .model import (
    INF,
    Commodity,
    CommoditySet,
    DEdge,
    DirectedNetworkOverTime,
    Orientation,
    UEdge,
    UndirectedNetworkOverTime,
    ValidationError,
    apply_orientation,
    build_directed,
    build_undirected,
    format_rational,
    is_infinite,
    gadget_transform,
    load_instance,
    parse_rational,
    save_instance,
    to_bidirected,
    validate,
)
from .orient import (
    CapExceeded,
    EafReport,
    EafRow,
    FixedPointDivergence,
    FixedPointResult,
    OrientationResult,
    PartitionReport,
    PreconditionError,
    PriceReport,
    add_super_terminals,
    aux_capacity_bound,
    bicriteria_orient,
    brute_force_best_orientation,
    check_alpha_time_approx,
    check_beta_value_approx,
    eaf_contraflow_experiment,
    fixed_point_capacity_iteration,
    orient_one_third,
    orientation_from_flow,
    partition_report,
)
from .static_flow import (
    PathFlow,
    StaticFlowResult,
    max_temporally_repeated_static_flow,
    path_decomposition,
    static_max_flow_value,
)
from .temporal import (
    FeasibilityReport,
    FlowOverTime,
    Piece,
    TemporallyRepeatedFlow,
    build_time_expanded,
    check_feasibility,
    earliest_arrival_pattern,
    excess,
    flow_value_at,
    max_flow_over_time,
    quickest_transshipment_time,
    temporally_repeated_from_static,
)

__all__ = [
    "INF",
    "CapExceeded",
    "CnfFormula",
    "Commodity",
    "CommoditySet",
    "DEdge",
    "DirectedNetworkOverTime",
    "EafReport",
    "EafRow",
    "FeasibilityReport",
    "FixedPointDivergence",
    "FixedPointResult",
    "FlowOverTime",
    "Orientation",
    "OrientationResult",
    "PartitionInstance",
    "PartitionReport",
    "PathFlow",
    "Piece",
    "PreconditionError",
    "PriceReport",
    "StaticFlowResult",
    "TemporallyRepeatedFlow",
    "UEdge",
    "UndirectedNetworkOverTime",
    "ValidationError",
    "add_super_terminals",
    "apply_orientation",
    "assignment_orientation",
    "aux_capacity_bound",
    "bicriteria_orient",
    "brute_force_best_orientation",
    "build_directed",
    "build_time_expanded",
    "build_undirected",
    "canonical_orientation",
    "check_alpha_time_approx",
    "check_beta_value_approx",
    "check_feasibility",
    "dpll_assignment",
    "eaf_contraflow_experiment",
    "earliest_arrival_pattern",
    "excess",
    "fixed_point_capacity_iteration",
    "flow_value_at",
    "format_rational",
    "is_infinite",
    "gadget_transform",
    "gen_eaf",
    "gen_fig1",
    "gen_flow_price_lb",
    "gen_single_sink_lb",
    "gen_single_source_lb",
    "gen_time_price_single_sink",
    "gen_time_price_single_source",
    "gen_time_price_tree",
    "gen_unit_capacity_tree",
    "load_instance",
    "max_concurrent_lambda",
    "max_concurrent_over_restricted",
    "max_flow_over_time",
    "max_temporally_repeated_static_flow",
    "orient_one_third",
    "orientation_from_flow",
    "parse_dimacs",
    "parse_partition",
    "parse_rational",
    "partition_report",
    "path_decomposition",
    "point_mass_feasible",
    "quickest_mc_over_restricted",
    "quickest_mc_time",
    "quickest_transshipment_time",
    "quickest_unbounded_infimum",
    "reduce_3sat_concurrent",
    "reduce_3sat_mc_quickest",
    "reduce_3sat_quickest",
    "reduce_partition_maxfot",
    "restricted_orientations",
    "restricted_quickest_contraflow",
    "save_instance",
    "static_max_flow_value",
    "static_mc_feasibility",
    "temporally_repeated_from_static",
    "to_bidirected",
    "validate",
    "variable_edge_pairs",
]

__version__ = "0.1.0"
