"""Distance GJK with a geometric minimum-norm subalgorithm.

The minimum-norm point of the current simplex is found with the
closest-point-on-segment/triangle/tetrahedron routines, so no linear systems
are solved. Closest points on the two shapes are rebuilt from the final
barycentric weights and the witness points stored with each simplex vertex.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bgjk import QueryStats, TerminatedBy
from .cso import CsoVertex, ShapePair, cso_support
from .geometry import (
    Vec3,
    closest_point_on_segment,
    closest_point_on_tetrahedron,
    closest_point_on_triangle,
    cross,
    dot,
    norm2,
)

WEIGHT_CUTOFF = 1e-12
INTERSECTION_NORM2 = 1e-14
POLISH_MIN_SINE2 = 1e-6


@dataclass(frozen=True)
class DistanceConfig:
    epsilon: float = 1e-8
    max_iterations: int = 128

    def __post_init__(self):
        if not math.isfinite(self.epsilon) or self.epsilon < 0.0:
            raise ValueError(f"epsilon must be finite and non-negative, got {self.epsilon!r}")
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")


@dataclass
class DistanceResult:
    """Outcome of a distance query.

    ``gaps`` holds ``|P|^2 - P.V`` for every evaluation of the termination
    test and ``norms`` the value of ``|P|`` after every update; both are kept
    for inspection of the convergence certificate.
    """

    distance: float
    point_on_a: Vec3
    point_on_b: Vec3
    converged: bool
    stats: QueryStats
    gaps: list = field(default_factory=list)
    norms: list = field(default_factory=list)


def minimum_norm_point(candidates: Sequence[CsoVertex]):
    """Point of minimum norm in the hull of 1-4 vertices.

    Returns ``(point, weights, kept)`` where ``kept`` lists the vertices with
    weight above ``1e-12`` and ``weights`` are their renormalized weights.
    """
    n = len(candidates)
    pts = [c.point for c in candidates]
    origin = np.zeros(3)
    if n == 1:
        return pts[0].copy(), np.array([1.0]), list(candidates)
    if n == 2:
        p, w = closest_point_on_segment(pts[0], pts[1], origin)
    elif n == 3:
        p, w = closest_point_on_triangle(pts[0], pts[1], pts[2], origin)
    elif n == 4:
        p, w = closest_point_on_tetrahedron(pts[0], pts[1], pts[2], pts[3], origin)
    else:
        raise ValueError(f"minimum_norm_point takes 1-4 vertices, got {n}")
    keep = [i for i in range(n) if w[i] > WEIGHT_CUTOFF]
    weights = w[keep]
    return _polish(p, [pts[i] for i in keep]), weights / weights.sum(), [candidates[i] for i in keep]


def _polish(p: Vec3, feature: list) -> Vec3:
    """One correction step making ``p`` orthogonal to its edge or face.

    The barycentric point carries rounding error along the feature; removing
    that component keeps ``|P|^2 - P.V`` near zero once ``V`` is on the feature.
    Slivers and corrections larger than rounding size are left alone.
    """
    if len(feature) == 2:
        e = feature[1] - feature[0]
        ee = norm2(e)
        if ee == 0.0:
            return p
        q = p - e * (dot(e, p) / ee)
    elif len(feature) == 3:
        e1, e2 = feature[1] - feature[0], feature[2] - feature[0]
        nrm = cross(e1, e2)
        nn = norm2(nrm)
        if nn <= POLISH_MIN_SINE2 * norm2(e1) * norm2(e2):
            return p
        q = nrm * (dot(nrm, p) / nn)
    else:
        return p
    size = max(math.sqrt(norm2(v)) for v in feature)
    return q if math.sqrt(norm2(q - p)) <= 1e-9 * size else p


def _witnesses(kept, weights):
    pa = sum(w * v.witness_a for w, v in zip(weights, kept))
    pb = sum(w * v.witness_b for w, v in zip(weights, kept))
    return np.asarray(pa, dtype=np.float64), np.asarray(pb, dtype=np.float64)


def distance(pair: ShapePair, config: DistanceConfig = DistanceConfig()) -> DistanceResult:
    """Euclidean distance between the two shapes and a pair of closest points.

    Stops when ``|P|^2 - P.V <= (epsilon * scale)^2``; returns distance 0 as
    soon as the current simplex reaches the origin.
    """
    stats = QueryStats()
    scale = pair.scale
    tol2 = (config.epsilon * scale) ** 2
    zero2 = INTERSECTION_NORM2 * scale * scale

    first = cso_support(pair, pair.initial_direction())
    stats.support_calls = 1
    p = first.point
    kept, weights = [first], np.array([1.0])
    q: list = []
    gaps: list = []
    norms = [math.sqrt(norm2(p))]

    def finish(dist, converged, reason):
        stats.terminated_by = reason
        pa, pb = _witnesses(kept, weights)
        return DistanceResult(dist, pa, pb, converged, stats, gaps, norms)

    if norm2(p) < zero2:
        return finish(0.0, True, TerminatedBy.ENCLOSED_ORIGIN)
    v = cso_support(pair, -p)
    stats.support_calls += 1

    while True:
        # same as |P|^2 - P.V but without cancelling two numbers near |P|^2
        gap = dot(p, p - v.point)
        gaps.append(gap)
        if gap <= tol2:
            return finish(math.sqrt(norm2(p)), True, TerminatedBy.SEPARATING_PLANE)
        if stats.iterations >= config.max_iterations:
            return finish(math.sqrt(norm2(p)), False, TerminatedBy.ITERATION_CAP)
        if any(np.array_equal(v.point, u.point) for u in q):
            # support repeats a simplex vertex: P cannot improve any further
            return finish(math.sqrt(norm2(p)), True, TerminatedBy.NO_PROGRESS)
        stats.iterations += 1
        candidates = [v] + q
        stats.max_simplex_size = max(stats.max_simplex_size, len(candidates))
        p, weights, q = minimum_norm_point(candidates)
        kept = q
        norms.append(math.sqrt(norm2(p)))
        if norm2(p) < zero2:
            return finish(0.0, True, TerminatedBy.ENCLOSED_ORIGIN)
        v = cso_support(pair, -p)
        stats.support_calls += 1
