"""Boolean GJK: does the difference set ``A - B`` contain the origin?

The simplex is kept ordered, newest vertex first (``A``, then ``B``, ``C``,
``D``). Because of that ordering, each ``do_simplex`` handler only checks the
Voronoi regions the origin can actually be in:

* segment ``[A, B]``: the slab only, so the segment is always kept;
* triangle ``[A, B, C]``: edges ``AB``, ``AC`` and the two sides of the face;
* tetrahedron ``[A, B, C, D]``: the interior plus the three faces and three
  edges that touch ``A``, found with at most three face-plane tests.

The triangle handler stores its vertices so that ``AB x AC`` faces the origin.
The tetrahedron handler relies on that: ``A`` lies above ``BCD`` on entry.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .cso import CsoVertex, ShapePair, cso_support
from .geometry import Vec3, cross, det3, dot, norm2

log = logging.getLogger(__name__)

SEGMENT_ENTRY_SLACK = 1e-9


class TerminatedBy(str, Enum):
    SEPARATING_PLANE = "separating_plane"
    ENCLOSED_ORIGIN = "enclosed_origin"
    NO_PROGRESS = "no_progress"
    ITERATION_CAP = "iteration_cap"


@dataclass(frozen=True)
class BgjkConfig:
    max_iterations: int = 64
    grazing_tolerance: float = 0.0
    degeneracy_tolerance: float = 1e-12

    def __post_init__(self):
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise ValueError(f"max_iterations must be a positive integer, got {self.max_iterations!r}")
        for name in ("grazing_tolerance", "degeneracy_tolerance"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")


@dataclass
class QueryStats:
    """Per-query counters.

    ``dosimplex_entry_sizes`` is the ordered sequence of simplex sizes with
    which ``do_simplex`` was entered; ``entry_counts()`` tallies it.
    """

    iterations: int = 0
    support_calls: int = 0
    plane_tests: int = 0
    max_plane_tests_per_call: int = 0
    max_simplex_size: int = 0
    dosimplex_entry_sizes: list = field(default_factory=list)
    terminated_by: Optional[TerminatedBy] = None
    segment_entry_violations: int = 0

    def entry_counts(self) -> dict:
        return {k: self.dosimplex_entry_sizes.count(k) for k in (2, 3, 4)}

    def as_dict(self) -> dict:
        return {
            "iterations": self.iterations,
            "support_calls": self.support_calls,
            "plane_tests": self.plane_tests,
            "max_plane_tests_per_call": self.max_plane_tests_per_call,
            "max_simplex_size": self.max_simplex_size,
            "dosimplex_entry_sizes": list(self.dosimplex_entry_sizes),
            "terminated_by": self.terminated_by.value if self.terminated_by else None,
            "segment_entry_violations": self.segment_entry_violations,
        }


class Simplex:
    """Ordered list of 1-4 ``CsoVertex`` entries, most recent first."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[CsoVertex]):
        vertices = list(vertices)
        if not 1 <= len(vertices) <= 4:
            raise ValueError(f"simplex needs 1-4 vertices, got {len(vertices)}")
        self.vertices = vertices

    def __len__(self) -> int:
        return len(self.vertices)

    def __getitem__(self, i) -> CsoVertex:
        return self.vertices[i]

    def __repr__(self) -> str:
        return f"Simplex({[v.point.tolist() for v in self.vertices]})"

    @property
    def points(self) -> list:
        return [v.point for v in self.vertices]

    def pick(self, indices) -> "Simplex":
        return Simplex([self.vertices[i] for i in indices])

    @classmethod
    def from_points(cls, points) -> "Simplex":
        """Simplex of bare points (witnesses set to the point and zero)."""
        out = []
        for p in points:
            p = np.asarray(p, dtype=np.float64)
            out.append(CsoVertex(p, p, np.zeros(3)))
        return cls(out)


def _scale(points) -> float:
    return math.sqrt(max(norm2(p) for p in points))


def _perpendicular(v: Vec3) -> Vec3:
    # cross with the coordinate axis least aligned with v
    k = int(np.argmin(np.abs(v)))
    axis = np.zeros(3)
    axis[k] = 1.0
    return cross(v, axis)


def _edge_direction(a: Vec3, x: Vec3, tol: float, scale: float) -> Vec3:
    """``(AX x AO) x AX``: perpendicular to edge ``AX``, toward the origin."""
    ax = x - a
    t = cross(ax, -a)
    if norm2(t) <= tol * scale ** 4:
        return _perpendicular(ax)
    return cross(t, ax)


def _face_region(ax: Vec3, ay: Vec3, n: Vec3, ao: Vec3) -> int:
    """Region of triangle ``A X Y`` (normal ``n``) holding the origin: 0 face, 1 edge AX, 2 edge AY.

    Vertex regions and edge ``XY`` are never returned.
    """
    if dot(cross(n, ay), ao) > 0.0:
        return 2 if dot(ay, ao) > 0.0 else 1
    if dot(cross(ax, n), ao) > 0.0:
        return 1
    return 0


def _line(a: Vec3, b: Vec3, tol: float):
    return (0, 1), _edge_direction(a, b, tol, _scale((a, b)))


def _triangle(a: Vec3, b: Vec3, c: Vec3, tol: float):
    scale = _scale((a, b, c))
    ab = b - a
    ac = c - a
    n = cross(ab, ac)
    if norm2(n) <= tol * scale ** 4:
        return (0, 1), _edge_direction(a, b, tol, scale)
    ao = -a
    region = _face_region(ab, ac, n, ao)
    if region == 2:
        return (0, 2), _edge_direction(a, c, tol, scale)
    if region == 1:
        return (0, 1), _edge_direction(a, b, tol, scale)
    if dot(n, ao) >= 0.0:
        return (0, 1, 2), n
    return (0, 2, 1), -n


# Faces around A in cyclic order: (A,B,C), (A,C,D), (A,D,B). The far edge of
# face k is shared with face k+1, the near edge with face k-1.
_FACES = ((1, 2), (2, 3), (3, 1))


def _tetrahedron(pts, tol: float):
    """Returns (kept indices, direction, enclosed, plane tests)."""
    a = pts[0]
    scale = _scale(pts)
    edges = [None, pts[1] - a, pts[2] - a, pts[3] - a]
    vol = det3(edges[1], edges[2], edges[3])
    if abs(vol) <= tol * scale ** 3:
        kept, d = _triangle(pts[0], pts[1], pts[2], tol)
        return kept, d, False, 0
    order = (0, 1, 2, 3)
    if vol > 0.0:
        # winding lost to rounding; swapping B and C restores outward face normals
        order = (0, 2, 1, 3)
        edges = [None, edges[2], edges[1], edges[3]]
    ao = -a

    normals = [cross(edges[x], edges[y]) for x, y in _FACES]
    start = None
    tests = 0
    for k in range(3):
        tests += 1
        if dot(normals[k], ao) > 0.0:
            start = k
            break
    if start is None:
        return order, np.zeros(3), True, tests

    def near_beyond(k):
        x, _ = _FACES[k]
        return dot(cross(edges[x], normals[k]), ao) > 0.0

    def far_beyond(k):
        _, y = _FACES[k]
        return dot(cross(normals[k], edges[y]), ao) > 0.0

    # An edge region needs the origin beyond the edge in both faces through
    # it and ahead of A along it.
    for f in range(3):
        v = _FACES[f][1]
        g = (f + 1) % 3
        if far_beyond(f) and near_beyond(g) and dot(edges[v], ao) > 0.0:
            return (order[0], order[v]), _edge_direction(a, pts[order[v]], tol, scale), False, tests

    # Otherwise the origin is over a face whose prism contains it; faces
    # before ``start`` are already known to have the origin inside.
    over = [k for k in range(start, 3) if not near_beyond(k) and not far_beyond(k)]
    if not over:
        # vertex region of A, unreachable from the main loop
        x, y = _FACES[start]
        kept, d = _triangle(a, pts[order[x]], pts[order[y]], tol)
        return tuple(order[(0, x, y)[i]] for i in kept), d, False, tests
    face = over[0]
    if face != start and len(over) > 1:
        tests += 1
        if dot(normals[face], ao) <= 0.0:
            face = over[1]
    x, y = _FACES[face]
    return (order[0], order[x], order[y]), normals[face], False, tests


def do_simplex_line(q: Simplex, tol: float = 1e-12):
    """Segment case: keep ``[A, B]``, search along ``(AB x -A) x AB``."""
    if len(q) != 2:
        raise ValueError("line case needs a 2-simplex")
    kept, d = _line(q[0].point, q[1].point, tol)
    return q.pick(kept), d


def do_simplex_triangle(q: Simplex, tol: float = 1e-12):
    """Triangle case: reduce to edge ``AB`` or ``AC``, or keep the face with the normal toward the origin."""
    if len(q) != 3:
        raise ValueError("triangle case needs a 3-simplex")
    kept, d = _triangle(q[0].point, q[1].point, q[2].point, tol)
    return q.pick(kept), d


def do_simplex_tetrahedron(q: Simplex, tol: float = 1e-12, stats: Optional[QueryStats] = None):
    """Tetrahedron case. ``A`` must lie above ``BCD`` (the triangle handler's winding).

    Only the faces through ``A`` are plane-tested, at most three tests per call.
    """
    if len(q) != 4:
        raise ValueError("tetrahedron case needs a 3-simplex")
    kept, d, enclosed, tests = _tetrahedron(q.points, tol)
    if stats is not None:
        stats.plane_tests += tests
        stats.max_plane_tests_per_call = max(stats.max_plane_tests_per_call, tests)
    return q.pick(kept), d, enclosed


def do_simplex(q: Simplex, d: Vec3, config: BgjkConfig = BgjkConfig(),
               stats: Optional[QueryStats] = None):
    """Dispatch on simplex size; returns ``(simplex, direction, enclosed)``."""
    n = len(q)
    tol = config.degeneracy_tolerance
    if stats is not None:
        stats.dosimplex_entry_sizes.append(n)
        stats.max_simplex_size = max(stats.max_simplex_size, n)
    if n == 2:
        if stats is not None:
            a, b = q[0].point, q[1].point
            if dot(a, b) > config.grazing_tolerance + SEGMENT_ENTRY_SLACK * _scale((a, b)) ** 2:
                stats.segment_entry_violations += 1
                log.debug("segment entered with A.B = %g > 0", dot(a, b))
        s, direction = do_simplex_line(q, tol)
        return s, direction, False
    if n == 3:
        s, direction = do_simplex_triangle(q, tol)
        return s, direction, False
    if n == 4:
        return do_simplex_tetrahedron(q, tol, stats)
    raise ValueError(f"do_simplex needs 2-4 vertices, got {n}")


Observer = Callable[[list, Vec3], None]


def intersects(pair: ShapePair, config: BgjkConfig = BgjkConfig(),
               observer: Optional[Observer] = None):
    """Boolean intersection test.

    Returns ``(hit, stats)``. A support point that repeats a simplex vertex
    means the origin sits on the boundary and yields ``False``; running out
    of iterations yields ``True`` with ``terminated_by = iteration_cap``.
    ``observer(points, direction)`` is called at every ``do_simplex`` entry.
    """
    stats = QueryStats()
    scale = pair.scale
    dup2 = (1e-12 * scale) ** 2

    s = cso_support(pair, pair.initial_direction())
    stats.support_calls = 1
    stats.max_simplex_size = 1
    if norm2(s.point) <= dup2:
        stats.terminated_by = TerminatedBy.ENCLOSED_ORIGIN
        return True, stats
    q = Simplex([s])
    d = -s.point
    previous = None

    while stats.iterations < config.max_iterations:
        stats.iterations += 1
        s = cso_support(pair, d)
        stats.support_calls += 1
        if dot(s.point, d) < -config.grazing_tolerance:
            stats.terminated_by = TerminatedBy.SEPARATING_PLANE
            return False, stats
        if any(norm2(s.point - v.point) <= dup2 for v in q.vertices):
            stats.terminated_by = TerminatedBy.NO_PROGRESS
            return False, stats
        q = Simplex([s] + q.vertices)
        if observer is not None:
            observer(q.points, d)
        q, d, enclosed = do_simplex(q, d, config, stats)
        if enclosed:
            stats.terminated_by = TerminatedBy.ENCLOSED_ORIGIN
            return True, stats
        if previous is not None and previous[0] == len(q) and np.array_equal(previous[1], d):
            stats.terminated_by = TerminatedBy.NO_PROGRESS
            return False, stats
        previous = (len(q), d)

    stats.terminated_by = TerminatedBy.ITERATION_CAP
    return True, stats
