from .linalg import ProjectivePoint, Subspace, Vector, normalize, point_label
from .points import (
    PointFilter,
    all_points,
    enumerate_points,
    enumerate_subspaces,
    grassmannian,
    hyperplanes_of,
    lines_through,
    maximals_through,
    tangent_lines_through,
)
from .polar import (
    FormKind,
    GeometryError,
    LineClass,
    PointClass,
    PolarSpace,
    classify_line,
    classify_point,
    evaluate,
    form,
    is_isotropic,
    is_totally_isotropic,
    perp,
    quotient_line,
    radical,
    span_type,
    standard_space,
    subspace_type,
    witt_type,
)

__all__ = [
    "FormKind",
    "GeometryError",
    "LineClass",
    "PointClass",
    "PointFilter",
    "PolarSpace",
    "ProjectivePoint",
    "Subspace",
    "Vector",
    "all_points",
    "classify_line",
    "classify_point",
    "enumerate_points",
    "enumerate_subspaces",
    "evaluate",
    "form",
    "grassmannian",
    "hyperplanes_of",
    "is_isotropic",
    "is_totally_isotropic",
    "lines_through",
    "maximals_through",
    "normalize",
    "perp",
    "point_label",
    "quotient_line",
    "radical",
    "span_type",
    "standard_space",
    "subspace_type",
    "tangent_lines_through",
    "witt_type",
]
