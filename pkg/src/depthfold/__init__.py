"""Depth separation by space folding: ReLU networks for regular-polygon classification.

The folding network for f_m has m+1 hidden layers of width at most 4 and
classifies P_m with zero error; any depth-d network needs about
2**(m / 2d) units per layer.  This package builds the network, enumerates the
exact linear regions of small planar ReLU nets and checks both sides.
"""
from .construction import FoldPlan, build_network, derive_top, make_fold_x, make_fold_xy, make_rotation
from .errors import ConstructionError, DomainError, RegionBudgetExceeded, StructuralError
from .geometry import (
    ConvexPolygon,
    Label,
    Line,
    Point2,
    ProblemInstance,
    Side,
    chord_crosses_boundary,
    classify_point,
    classify_points,
    clip_by_line,
    point_side,
    regular_polygon,
    v_even_prime,
)
from .network import (
    AffineLayer,
    MlpNetwork,
    OutputHead,
    StagedNetwork,
    activation_pattern,
    classify,
    collapse,
    evaluate_pre_sign,
    max_width,
    param_count,
    random_mlp,
    run_stages,
)
from .regions import (
    Decomposition,
    Region,
    enumerate_regions,
    grid_pattern_count,
    line_arrangement_max_regions,
    region_of_point,
    region_upper_bound,
)
from .verification import (
    VerificationReport,
    verify_bound_consistency,
    verify_lemma2,
    verify_piecewise_linearity,
    verify_zero_error,
    width_lower_bound,
)

__version__ = "0.1.0"
