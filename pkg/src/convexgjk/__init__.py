"""Convex proximity queries: Boolean GJK, distance GJK and brute-force oracles."""
from .bgjk import (
    BgjkConfig,
    QueryStats,
    Simplex,
    TerminatedBy,
    do_simplex,
    do_simplex_line,
    do_simplex_tetrahedron,
    do_simplex_triangle,
    intersects,
)
from .cso import CsoVertex, ShapePair, cso_support
from .dgjk import DistanceConfig, DistanceResult, distance, minimum_norm_point
from .geometry import (
    Box,
    ClosestPoint,
    PointCloud,
    Sphere,
    Transformed,
    closest_point_on_segment,
    closest_point_on_tetrahedron,
    closest_point_on_triangle,
    origin_in_tetrahedron,
    support_point,
    support_value,
)

__version__ = "0.1.0"
