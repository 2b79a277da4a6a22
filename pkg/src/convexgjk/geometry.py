"""Vector helpers, convex shapes with support mappings, and closest points on simplices.

Points and directions are plain ``numpy`` arrays of shape ``(3,)`` and dtype
float64. Shapes are immutable; every shape answers ``support(direction)``
with a point of the shape that is extreme along ``direction``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Union

import numpy as np

Vec3 = np.ndarray

ROTATION_TOLERANCE = 1e-12
TETRA_DEGENERACY = 1e-18
# interior weights of slivers flatter than this are rounding noise; faces handle them
SLIVER_VOLUME = 1e-12
TRIANGLE_DEGENERACY = 1e-24


def vec3(value, name: str = "vector") -> Vec3:
    """Convert ``value`` to a finite float64 3-vector or raise ``ValueError``."""
    arr = np.asarray(value, dtype=np.float64)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {arr.tolist()}")
    return arr.copy()


def dot(a: Vec3, b: Vec3) -> float:
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])


def cross(a: Vec3, b: Vec3) -> Vec3:
    # np.cross is an order of magnitude slower on single 3-vectors
    return np.array((
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ))


def norm2(a: Vec3) -> float:
    return dot(a, a)


def det3(a: Vec3, b: Vec3, c: Vec3) -> float:
    """Scalar triple product ``a . (b x c)``."""
    return float(
        a[0] * (b[1] * c[2] - b[2] * c[1])
        + a[1] * (b[2] * c[0] - b[0] * c[2])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def check_direction(direction) -> Vec3:
    d = np.asarray(direction, dtype=np.float64)
    if d.shape != (3,) or not np.all(np.isfinite(d)):
        raise ValueError(f"direction must be a finite 3-vector, got {direction!r}")
    if not (d[0] or d[1] or d[2]):
        raise ValueError("direction must be nonzero")
    return d


# --------------------------------------------------------------------------
# Shapes
# --------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Sphere:
    center: Vec3
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", vec3(self.center, "sphere center"))
        r = float(self.radius)
        if not math.isfinite(r) or r <= 0.0:
            raise ValueError(f"sphere radius must be positive and finite, got {self.radius!r}")
        object.__setattr__(self, "radius", r)

    def support(self, d: Vec3) -> Vec3:
        return self.center + d * (self.radius / math.sqrt(norm2(d)))

    def centroid(self) -> Vec3:
        return self.center

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.center)) + self.radius


@dataclass(frozen=True, eq=False)
class Box:
    """Axis-aligned box given by positive half extents, optionally offset by ``center``."""

    half_extents: Vec3
    center: Vec3 = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        h = vec3(self.half_extents, "box half_extents")
        if np.any(h <= 0.0):
            raise ValueError(f"box half_extents must be positive, got {h.tolist()}")
        object.__setattr__(self, "half_extents", h)
        object.__setattr__(self, "center", vec3(self.center, "box center"))

    def support(self, d: Vec3) -> Vec3:
        return self.center + np.where(d >= 0.0, self.half_extents, -self.half_extents)

    def centroid(self) -> Vec3:
        return self.center

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.center) + np.linalg.norm(self.half_extents))

    def corners(self) -> np.ndarray:
        signs = np.array([[sx, sy, sz] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)],
                         dtype=np.float64)
        return self.center + signs * self.half_extents


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Convex hull of a finite vertex list; the hull itself is never built.

    Support ties are broken toward the lowest vertex index.
    """

    vertices: np.ndarray

    def __post_init__(self):
        v = np.array(self.vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 3 or v.shape[0] < 1:
            raise ValueError(f"point cloud needs a non-empty (n, 3) vertex array, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("point cloud vertices must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    def support(self, d: Vec3) -> Vec3:
        # argmax returns the first maximizer
        return self.vertices[int(np.argmax(self.vertices @ d))]

    def centroid(self) -> Vec3:
        return self.vertices.mean(axis=0)

    def bounding_radius(self) -> float:
        return float(np.sqrt((self.vertices ** 2).sum(axis=1).max()))


@dataclass(frozen=True, eq=False)
class Transformed:
    """``inner`` rotated by ``rotation`` then shifted by ``translation``."""

    inner: "Shape"
    rotation: np.ndarray
    translation: Vec3

    def __post_init__(self):
        if not isinstance(self.inner, (Sphere, Box, PointCloud, Transformed)):
            raise ValueError(f"transformed inner must be a shape, got {type(self.inner).__name__}")
        r = np.array(self.rotation, dtype=np.float64)
        if r.size == 9:
            r = r.reshape(3, 3)
        if r.shape != (3, 3) or not np.all(np.isfinite(r)):
            raise ValueError("rotation must be a finite 3x3 matrix")
        if np.max(np.abs(r.T @ r - np.eye(3))) > ROTATION_TOLERANCE:
            raise ValueError("rotation must be orthonormal (R^T R = I within 1e-12)")
        r.setflags(write=False)
        object.__setattr__(self, "rotation", r)
        object.__setattr__(self, "translation", vec3(self.translation, "translation"))

    def support(self, d: Vec3) -> Vec3:
        r = self.rotation
        return r @ self.inner.support(r.T @ d) + self.translation

    def centroid(self) -> Vec3:
        return self.rotation @ self.inner.centroid() + self.translation

    def bounding_radius(self) -> float:
        return float(np.linalg.norm(self.translation)) + self.inner.bounding_radius()


Shape = Union[Sphere, Box, PointCloud, Transformed]


def support_point(shape: Shape, direction) -> Vec3:
    """Point of ``shape`` farthest along ``direction`` (which need not be unit)."""
    return shape.support(check_direction(direction))


def support_value(shape: Shape, direction) -> float:
    """Signed distance of the supporting plane, scaled by ``|direction|``."""
    d = check_direction(direction)
    return dot(d, shape.support(d))


def world_vertices(shape: Shape) -> np.ndarray:
    """Vertex array of a polytopal shape in world coordinates.

    Raises ``ValueError`` for shapes with curved boundary.
    """
    if isinstance(shape, PointCloud):
        return shape.vertices
    if isinstance(shape, Box):
        return shape.corners()
    if isinstance(shape, Transformed):
        return world_vertices(shape.inner) @ shape.rotation.T + shape.translation
    raise ValueError(f"{type(shape).__name__} has no finite vertex set")


# --------------------------------------------------------------------------
# Closest points on simplices
# --------------------------------------------------------------------------

class ClosestPoint(NamedTuple):
    point: Vec3
    weights: np.ndarray


def closest_point_on_segment(a, b, q) -> ClosestPoint:
    a, b, q = (np.asarray(x, dtype=np.float64) for x in (a, b, q))
    ab = b - a
    denom = norm2(ab)
    if denom == 0.0:
        return ClosestPoint(a.copy(), np.array([1.0, 0.0]))
    t = dot(q - a, ab) / denom
    if t <= 0.0:
        return ClosestPoint(a.copy(), np.array([1.0, 0.0]))
    if t >= 1.0:
        return ClosestPoint(b.copy(), np.array([0.0, 1.0]))
    return ClosestPoint(a + t * ab, np.array([1.0 - t, t]))


def _best_edge(a, b, c, q) -> ClosestPoint:
    best = None
    for (i, j), (p0, p1) in (((0, 1), (a, b)), ((0, 2), (a, c)), ((1, 2), (b, c))):
        cp = closest_point_on_segment(p0, p1, q)
        d2 = norm2(cp.point - q)
        if best is None or d2 < best[0]:
            w = np.zeros(3)
            w[i], w[j] = cp.weights
            best = (d2, ClosestPoint(cp.point, w))
    return best[1]


def closest_point_on_triangle(a, b, c, q) -> ClosestPoint:
    """Closest point of triangle ``abc`` to ``q`` by vertex/edge/face region tests."""
    a, b, c, q = (np.asarray(x, dtype=np.float64) for x in (a, b, c, q))
    ab = b - a
    ac = c - a
    scale = max(norm2(a - q), norm2(b - q), norm2(c - q))
    if norm2(cross(ab, ac)) <= TRIANGLE_DEGENERACY * scale * scale:
        return _best_edge(a, b, c, q)

    ap = q - a
    d1 = dot(ab, ap)
    d2 = dot(ac, ap)
    if d1 <= 0.0 and d2 <= 0.0:
        return ClosestPoint(a.copy(), np.array([1.0, 0.0, 0.0]))

    bp = q - b
    d3 = dot(ab, bp)
    d4 = dot(ac, bp)
    if d3 >= 0.0 and d4 <= d3:
        return ClosestPoint(b.copy(), np.array([0.0, 1.0, 0.0]))

    vc = d1 * d4 - d3 * d2
    if vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
        v = d1 / (d1 - d3)
        return ClosestPoint(a + v * ab, np.array([1.0 - v, v, 0.0]))

    cp = q - c
    d5 = dot(ab, cp)
    d6 = dot(ac, cp)
    if d6 >= 0.0 and d5 <= d6:
        return ClosestPoint(c.copy(), np.array([0.0, 0.0, 1.0]))

    vb = d5 * d2 - d1 * d6
    if vb <= 0.0 and d2 >= 0.0 and d6 <= 0.0:
        w = d2 / (d2 - d6)
        return ClosestPoint(a + w * ac, np.array([1.0 - w, 0.0, w]))

    va = d3 * d6 - d5 * d4
    if va <= 0.0 and (d4 - d3) >= 0.0 and (d5 - d6) >= 0.0:
        w = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        return ClosestPoint(b + w * (c - b), np.array([0.0, 1.0 - w, w]))

    denom = 1.0 / (va + vb + vc)
    v = vb * denom
    w = vc * denom
    return ClosestPoint(a + v * ab + w * ac, np.array([1.0 - v - w, v, w]))


def _tetra_weights(a, b, c, d, q):
    """Barycentric weights of ``q`` and the signed volume, or ``None`` if degenerate."""
    vol = det3(b - a, c - a, d - a)
    scale = math.sqrt(max(norm2(a - q), norm2(b - q), norm2(c - q), norm2(d - q)))
    if abs(vol) <= SLIVER_VOLUME * scale ** 3:
        return None
    wa = det3(b - q, c - q, d - q)
    wb = det3(q - a, c - a, d - a)
    wc = det3(b - a, q - a, d - a)
    wd = det3(b - a, c - a, q - a)
    return np.array([wa, wb, wc, wd]) / vol


def closest_point_on_tetrahedron(a, b, c, d, q) -> ClosestPoint:
    a, b, c, d, q = (np.asarray(x, dtype=np.float64) for x in (a, b, c, d, q))
    w = _tetra_weights(a, b, c, d, q)
    if w is not None and np.all(w >= 0.0):
        return ClosestPoint(q.copy(), w)

    best = None
    for idx in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)):
        pts = (a, b, c, d)
        cp = closest_point_on_triangle(pts[idx[0]], pts[idx[1]], pts[idx[2]], q)
        d2 = norm2(cp.point - q)
        if best is None or d2 < best[0]:
            weights = np.zeros(4)
            weights[list(idx)] = cp.weights
            best = (d2, ClosestPoint(cp.point, weights))
    return best[1]


def origin_in_tetrahedron(a, b, c, d) -> bool:
    """Closed containment of the origin by signed volumes; degenerate tetrahedra contain nothing."""
    a, b, c, d = (np.asarray(x, dtype=np.float64) for x in (a, b, c, d))
    vol = det3(b - a, c - a, d - a)
    scale = math.sqrt(max(norm2(a), norm2(b), norm2(c), norm2(d)))
    if vol == 0.0 or abs(vol) < TETRA_DEGENERACY * scale ** 3:
        return False
    s = 1.0 if vol > 0.0 else -1.0
    return (
        s * det3(b, c, d) >= 0.0
        and s * det3(a, d, c) >= 0.0
        and s * det3(a, b, d) >= 0.0
        and s * det3(a, c, b) >= 0.0
    )
