"""Finite Cayley balls and the geometric invariants that separate virtually
free groups from generic hyperbolic behaviour."""

__version__ = "0.1.0"

from .groups import (
    GeneratorLetter,
    GroupSpec,
    SpecParseError,
    WordError,
    parse_group_spec,
)
from .ball import (
    BallGraph,
    BudgetExceededError,
    DistanceMatrix,
    all_pairs_distances,
    build_ball,
    read_ball,
    write_ball,
)
from .geodesics import (
    GeodesicInterval,
    GeodesicPath,
    Polygon,
    enumerate_geodesics,
    interval,
    polygon_thinness,
)
from .invariants import (
    InternalCheckError,
    InvariantResult,
    SamplingPlan,
    bigon_constants,
    chain_defect,
    detour_epsilon,
    doubled_gromov_product,
    four_point_delta,
    h2_center_distance,
    mesh_estimate,
    polygon_delta,
    rips_delta,
    subgroup_quasiconvexity,
)

__all__ = [
    "BallGraph",
    "BudgetExceededError",
    "DistanceMatrix",
    "GeneratorLetter",
    "GeodesicInterval",
    "GeodesicPath",
    "GroupSpec",
    "InternalCheckError",
    "InvariantResult",
    "Polygon",
    "SamplingPlan",
    "SpecParseError",
    "WordError",
    "all_pairs_distances",
    "bigon_constants",
    "build_ball",
    "chain_defect",
    "detour_epsilon",
    "doubled_gromov_product",
    "enumerate_geodesics",
    "four_point_delta",
    "h2_center_distance",
    "interval",
    "mesh_estimate",
    "parse_group_spec",
    "polygon_delta",
    "polygon_thinness",
    "read_ball",
    "rips_delta",
    "subgroup_quasiconvexity",
    "write_ball",
]
