"""Exact integral geometry for pixellated sets under the taxicab metric.

The package decides convexity of unions of grid cubes in the 1-norm sense,
computes their intrinsic volumes in exact rational arithmetic, and verifies
the classical identities (cube-dilation expansion, flat integrals, projection
sums, collision measures, products) either exactly or by seeded Monte Carlo
with reported standard errors.
"""

from .convexity import (
    ConvexityVerdict,
    all_pairs_monotone_reachable,
    convexify,
    is_l1_convex,
    is_orthogonally_convex,
    monotone_reachable,
    split_halves,
)
from .documents import ParseError, SetDocument, from_object, parse_set, print_set, to_object
from .generators import gen_random_box, gen_random_cellset, gen_random_convex
from .integral_geometry import (
    MCEstimate,
    clip_translate,
    crofton_integral,
    crofton_profile,
    exact_clip_valuation,
    higher_kinematic_rhs,
    kinematic_higher_mc,
    kinematic_principal,
    kubota_profile,
    kubota_sum,
    principal_kinematic_rhs,
    steiner_check,
    steiner_profile,
)
from .lattice import (
    BoxUnion,
    CellSet,
    CoordSubspace,
    IVVector,
    RatBox,
    SignedPerm,
    apply_isometry,
    box_intersection,
    box_minkowski,
    boxunion_equal_pointsets,
    boxunion_intersection,
    boxunion_minkowski_box,
    cell_box,
    cellset_boolean,
    cellset_to_boxunion,
    clip_cells,
    coordinate_subspaces,
    embed,
    hausdorff_distance,
    hyperoctahedral_group,
    minkowski_sum_box,
    point_box_distance,
    project,
    scale,
    subdivide,
    union_volume,
)
from .pixellation import (
    BoxUnionShape,
    L1Ball,
    boundary_region,
    outer_pixellate,
    pixellation_error_bracket,
    shape_contains_point,
    shape_point_distance,
)
from .suites import CheckRecord, Report, VerifyConfig, verify
from .valuations import (
    ball_intrinsic_volumes,
    box_intrinsic_volumes,
    cellset_product,
    elementary_symmetric,
    euler_characteristic,
    intrinsic_volumes,
    intrinsic_volumes_boxunion,
    intrinsic_volumes_cellset,
    product_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "BoxUnion",
    "BoxUnionShape",
    "CellSet",
    "CheckRecord",
    "ConvexityVerdict",
    "CoordSubspace",
    "IVVector",
    "L1Ball",
    "MCEstimate",
    "ParseError",
    "RatBox",
    "Report",
    "SetDocument",
    "SignedPerm",
    "VerifyConfig",
    "all_pairs_monotone_reachable",
    "apply_isometry",
    "ball_intrinsic_volumes",
    "boundary_region",
    "box_intersection",
    "box_intrinsic_volumes",
    "box_minkowski",
    "boxunion_equal_pointsets",
    "boxunion_intersection",
    "boxunion_minkowski_box",
    "cell_box",
    "cellset_boolean",
    "cellset_product",
    "cellset_to_boxunion",
    "clip_cells",
    "clip_translate",
    "convexify",
    "coordinate_subspaces",
    "crofton_integral",
    "crofton_profile",
    "elementary_symmetric",
    "embed",
    "euler_characteristic",
    "exact_clip_valuation",
    "from_object",
    "gen_random_box",
    "gen_random_cellset",
    "gen_random_convex",
    "hausdorff_distance",
    "higher_kinematic_rhs",
    "hyperoctahedral_group",
    "intrinsic_volumes",
    "intrinsic_volumes_boxunion",
    "intrinsic_volumes_cellset",
    "is_l1_convex",
    "is_orthogonally_convex",
    "kinematic_higher_mc",
    "kinematic_principal",
    "kubota_profile",
    "kubota_sum",
    "minkowski_sum_box",
    "monotone_reachable",
    "outer_pixellate",
    "parse_set",
    "pixellation_error_bracket",
    "point_box_distance",
    "principal_kinematic_rhs",
    "print_set",
    "product_rhs",
    "project",
    "scale",
    "shape_contains_point",
    "shape_point_distance",
    "split_halves",
    "steiner_check",
    "steiner_profile",
    "subdivide",
    "to_object",
    "union_volume",
    "verify",
]
