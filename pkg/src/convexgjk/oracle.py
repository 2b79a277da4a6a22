"""Brute-force ground truth for point-cloud pairs.

Nothing here calls the GJK code paths or the closest-point routines of
``geometry``; every answer comes from explicit enumeration over the
pairwise-difference cloud ``{a_i - b_j}`` or from small linear solves.

* ``oracle_intersects``: enumerates simplices of the difference cloud looking
  for one that contains the origin.
* ``sat_sweep``: independent check by separating directions (face normals of
  each cloud and all edge-edge cross products).
* ``oracle_distance``: minimum distance from the origin over all points,
  segments and triangles of the difference cloud.
* ``classify_region``: full Voronoi-region classification of a query point
  against a segment, triangle or tetrahedron.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.spatial.transform import Rotation

from .cso import ShapePair
from .geometry import PointCloud, Shape, world_vertices

MAX_DIFFERENCE_POINTS = 400
CONTAINMENT_TOL = 1e-12
LETTERS = "ABCD"


def _as_vertices(shape) -> np.ndarray:
    if isinstance(shape, np.ndarray):
        v = np.asarray(shape, dtype=np.float64)
    elif isinstance(shape, (list, tuple)):
        v = np.asarray(shape, dtype=np.float64)
    else:
        v = world_vertices(shape)
    if v.ndim != 2 or v.shape[1] != 3 or len(v) == 0:
        raise ValueError("expected a non-empty (n, 3) vertex array")
    return v


@lru_cache(maxsize=None)
def _combos(n: int, k: int) -> np.ndarray:
    out = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(n), k)),
                      dtype=np.intp, count=math.comb(n, k) * k)
    return out.reshape(-1, k)


def _hull_contains_origin(points: np.ndarray, tol: float = CONTAINMENT_TOL) -> bool:
    """Whether the origin lies in the hull of ``points`` (within ``tol * scale``).

    Carathéodory: if it does, some simplex on at most four of the points
    contains it. Every simplex of a fan triangulation is tried: all
    tetrahedra ``(p0, pi, pj, pk)`` cover a full-dimensional hull, triangles
    ``(p0, pi, pj)`` a flat one and segments ``(p0, pi)`` a collinear one.
    """
    sq = np.einsum("ij,ij->i", points, points)
    scale = math.sqrt(sq.max())
    if scale == 0.0:
        return True
    eps = tol * scale
    if sq.min() <= eps * eps:
        return True
    m = len(points) - 1
    if m == 0:
        return False
    o = -points[0]
    rel = points[1:] - points[0]

    # segments from the apex
    uu = np.einsum("ij,ij->i", rel, rel)
    t = np.clip(rel @ o / np.where(uu > 0, uu, 1.0), 0.0, 1.0)
    gap = o - t[:, None] * rel
    if np.einsum("ij,ij->i", gap, gap).min() <= eps * eps:
        return True
    if m < 2:
        return False

    # triangles from the apex
    pairs = _combos(m, 2)
    u, v = rel[pairs[:, 0]], rel[pairs[:, 1]]
    n = np.cross(u, v)
    nn = np.einsum("ij,ij->i", n, n)
    ok = nn > (tol * scale * scale) ** 2
    if ok.any():
        u, v, n, nn = u[ok], v[ok], n[ok], nn[ok]
        plane = (n @ o) / np.sqrt(nn)
        d00 = np.einsum("ij,ij->i", u, u)
        d01 = np.einsum("ij,ij->i", u, v)
        d11 = np.einsum("ij,ij->i", v, v)
        d20 = u @ o
        d21 = v @ o
        den = d00 * d11 - d01 * d01
        beta = (d11 * d20 - d01 * d21) / den
        gamma = (d00 * d21 - d01 * d20) / den
        hit = (np.abs(plane) <= eps) & (beta >= -tol) & (gamma >= -tol) & (beta + gamma <= 1 + tol)
        if hit.any():
            return True
    if m < 3:
        return False

    # tetrahedra from the apex
    triples = _combos(m, 3)
    pair_cross = np.cross(rel[:, None, :], rel[None, :, :])  # (m, m, 3)
    i, j, k = triples[:, 0], triples[:, 1], triples[:, 2]
    det = np.einsum("nd,nd->n", rel[i], pair_cross[j, k])
    oc = pair_cross @ o  # o . (r_j x r_k)
    good = np.abs(det) > 1e-18 * scale ** 3
    if not good.any():
        return False
    det = det[good]
    i, j, k = i[good], j[good], k[good]
    alpha = oc[j, k] / det
    beta = oc[k, i] / det
    gamma = oc[i, j] / det
    inside = (alpha >= -tol) & (beta >= -tol) & (gamma >= -tol) & (alpha + beta + gamma <= 1 + tol)
    return bool(inside.any())


def extreme_points(points: np.ndarray) -> np.ndarray:
    """Drop points lying in the hull of the remaining ones (the hull is unchanged)."""
    keep = list(range(len(points)))
    for idx in range(len(points)):
        others = [k for k in keep if k != idx]
        if others and _hull_contains_origin(points[others] - points[idx]):
            keep.remove(idx)
    return points[keep]


def difference_cloud(cloud_a, cloud_b) -> np.ndarray:
    a = _as_vertices(cloud_a)
    b = _as_vertices(cloud_b)
    return (a[:, None, :] - b[None, :, :]).reshape(-1, 3)


def _reduced_difference(cloud_a, cloud_b) -> np.ndarray:
    a = _as_vertices(cloud_a)
    b = _as_vertices(cloud_b)
    if len(a) * len(b) > MAX_DIFFERENCE_POINTS:
        raise ValueError(
            f"difference cloud of {len(a)}x{len(b)} points exceeds the oracle bound of {MAX_DIFFERENCE_POINTS}")
    # vertices of A - B are differences of vertices of A and B
    return difference_cloud(extreme_points(a), extreme_points(b))


def oracle_intersects(cloud_a, cloud_b) -> bool:
    """Whether hull(A) and hull(B) share a point, by simplex enumeration on ``A - B``."""
    return _hull_contains_origin(_reduced_difference(cloud_a, cloud_b))


def _min_norm_over_cloud(points: np.ndarray) -> float:
    """Distance from the origin to the hull, assuming the origin is outside it."""
    best = float(np.sqrt(np.einsum("ij,ij->i", points, points).min()))
    n = len(points)
    if n >= 2:
        pairs = _combos(n, 2)
        a, b = points[pairs[:, 0]], points[pairs[:, 1]]
        ab = b - a
        den = np.einsum("ij,ij->i", ab, ab)
        t = np.clip(-np.einsum("ij,ij->i", a, ab) / np.where(den > 0, den, 1.0), 0.0, 1.0)
        c = a + t[:, None] * ab
        best = min(best, float(np.sqrt(np.einsum("ij,ij->i", c, c).min())))
    if n >= 3:
        triples = _combos(n, 3)
        a = points[triples[:, 0]]
        u = points[triples[:, 1]] - a
        v = points[triples[:, 2]] - a
        x = -a
        d00 = np.einsum("ij,ij->i", u, u)
        d01 = np.einsum("ij,ij->i", u, v)
        d11 = np.einsum("ij,ij->i", v, v)
        d20 = np.einsum("ij,ij->i", x, u)
        d21 = np.einsum("ij,ij->i", x, v)
        den = d00 * d11 - d01 * d01
        ok = den > 1e-24 * np.maximum(d00, d11) ** 2
        if ok.any():
            den = np.where(ok, den, 1.0)
            beta = (d11 * d20 - d01 * d21) / den
            gamma = (d00 * d21 - d01 * d20) / den
            inside = ok & (beta >= 0) & (gamma >= 0) & (beta + gamma <= 1)
            if inside.any():
                p = a[inside] + beta[inside, None] * u[inside] + gamma[inside, None] * v[inside]
                best = min(best, float(np.sqrt(np.einsum("ij,ij->i", p, p).min())))
    return best


def oracle_distance(cloud_a, cloud_b) -> float:
    """Separation of two disjoint point-cloud hulls by exhaustive enumeration."""
    diff = _reduced_difference(cloud_a, cloud_b)
    if _hull_contains_origin(diff):
        raise ValueError("oracle_distance called on intersecting clouds")
    return _min_norm_over_cloud(diff)


# --------------------------------------------------------------------------
# Separating-direction sweep
# --------------------------------------------------------------------------

def _triangle_normals(v: np.ndarray) -> np.ndarray:
    if len(v) < 3:
        return np.empty((0, 3))
    t = _combos(len(v), 3)
    return np.cross(v[t[:, 1]] - v[t[:, 0]], v[t[:, 2]] - v[t[:, 0]])


def _edges(v: np.ndarray) -> np.ndarray:
    if len(v) < 2:
        return np.empty((0, 3))
    p = _combos(len(v), 2)
    return v[p[:, 1]] - v[p[:, 0]]


def sat_sweep(cloud_a, cloud_b) -> float:
    """Smallest support value of ``A - B`` over candidate unit directions.

    Candidates are the normals of all vertex triangles of A and of B, all
    cross products of an A edge with a B edge, and the centroid offset. The
    facet normals of ``A - B`` are among them, so a negative value certifies
    separation and a non-negative value is the exact penetration depth of a
    full-dimensional difference set.
    """
    a = _as_vertices(cloud_a)
    b = _as_vertices(cloud_b)
    ea, eb = _edges(a), _edges(b)
    cand = [_triangle_normals(a), _triangle_normals(b), (a.mean(0) - b.mean(0))[None, :], np.eye(3)]
    if len(ea) and len(eb):
        cand.append(np.cross(ea[:, None, :], eb[None, :, :]).reshape(-1, 3))
    d = np.concatenate(cand)
    lengths = np.linalg.norm(d, axis=1)
    scale = max(np.linalg.norm(a, axis=1).max() + np.linalg.norm(b, axis=1).max(), 1e-300)
    d = d[lengths > 1e-12 * scale * scale]
    d = d / np.linalg.norm(d, axis=1)[:, None]
    pa = a @ d.T
    pb = b @ d.T
    h_pos = pa.max(0) - pb.min(0)
    h_neg = pb.max(0) - pa.min(0)
    return float(min(h_pos.min(), h_neg.min()))


def sat_intersects(cloud_a, cloud_b) -> bool:
    a = _as_vertices(cloud_a)
    b = _as_vertices(cloud_b)
    scale = np.linalg.norm(a, axis=1).max() + np.linalg.norm(b, axis=1).max()
    return sat_sweep(a, b) >= -CONTAINMENT_TOL * scale


def _full_dimensional(points: np.ndarray) -> bool:
    if len(points) < 4:
        return False
    centered = points - points[0]
    sv = np.linalg.svd(centered, compute_uv=False)
    return bool(sv[2] > 1e-9 * max(sv[0], 1e-300))


def oracle_margin(cloud_a, cloud_b):
    """``(intersecting, margin)``: margin is the separation or the penetration depth."""
    diff = _reduced_difference(cloud_a, cloud_b)
    if _hull_contains_origin(diff):
        if not _full_dimensional(diff):
            # a flat difference set has no interior, so the origin is on its boundary
            return True, 0.0
        return True, max(sat_sweep(cloud_a, cloud_b), 0.0)
    return False, _min_norm_over_cloud(diff)


# --------------------------------------------------------------------------
# Exhaustive minimum norm
# --------------------------------------------------------------------------

def _affine_projection(verts: np.ndarray, q: np.ndarray):
    """Projection of ``q`` onto the affine hull of ``verts`` and its affine weights."""
    v0 = verts[0]
    if len(verts) == 1:
        return v0.copy(), np.array([1.0])
    e = (verts[1:] - v0).T
    mu, *_ = np.linalg.lstsq(e, q - v0, rcond=None)
    return v0 + e @ mu, np.concatenate([[1.0 - mu.sum()], mu])


def oracle_min_norm(points) -> np.ndarray:
    """Minimum-norm point of the hull of 1-4 points by trying every face."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 3)
    if not 1 <= len(pts) <= 4:
        raise ValueError("oracle_min_norm takes 1-4 points")
    origin = np.zeros(3)
    best, best_d = None, math.inf
    if len(pts) == 4:
        m = (pts[1:] - pts[0]).T
        if abs(np.linalg.det(m)) > 1e-18 * max(1.0, np.abs(pts).max()) ** 3:
            mu = np.linalg.solve(m, -pts[0])
            if np.all(mu >= 0) and mu.sum() <= 1:
                return origin
    for k in range(1, len(pts) + 1):
        for subset in itertools.combinations(range(len(pts)), k):
            p, w = _affine_projection(pts[list(subset)], origin)
            if np.all(w >= 0):
                d = float(np.linalg.norm(p))
                if d < best_d:
                    best, best_d = p, d
    return best


# --------------------------------------------------------------------------
# Voronoi-region classification
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionLabel:
    """A Voronoi region of a simplex with vertices named A, B, C, D in order.

    ``feature`` is the set of vertex letters (sorted) and ``side`` is
    ``"above"``/``"below"`` for the two face regions of a triangle and
    ``"interior"`` for the inside of a tetrahedron.
    """

    feature: str
    side: str = ""

    def __str__(self) -> str:
        if self.side == "interior":
            return f"{self.feature}-interior"
        if self.side:
            return f"{self.side}-{self.feature}"
        return self.feature


@lru_cache(maxsize=None)
def region_labels(size: int) -> tuple:
    """All Voronoi regions of a simplex with ``size`` vertices (3, 8 or 15 of them)."""
    labels = []
    for k in range(1, size + 1):
        for subset in itertools.combinations(range(size), k):
            name = "".join(LETTERS[i] for i in subset)
            if k == size == 3:
                labels += [RegionLabel(name, "above"), RegionLabel(name, "below")]
            elif k == size == 4:
                labels.append(RegionLabel(name, "interior"))
            else:
                labels.append(RegionLabel(name))
    return tuple(labels)


def _check_simplex(verts: np.ndarray):
    n = len(verts)
    if not 2 <= n <= 4:
        raise ValueError("classification needs a segment, triangle or tetrahedron")
    e = verts[1:] - verts[0]
    size = np.linalg.norm(e, axis=1).max()
    sv = np.linalg.svd(e, compute_uv=False)
    if size == 0.0 or sv[-1] <= 1e-9 * size:
        raise ValueError("degenerate simplex cannot be classified")


def region_scores(simplex_points, queries) -> np.ndarray:
    """Violation score of every query against every region, shape ``(n_queries, n_regions)``.

    A score of 0 means the query satisfies the region's closed conditions
    exactly: its projection onto the feature has non-negative affine weights
    and the offset from the projection makes a non-obtuse angle with no
    vertex outside the feature. Positive scores measure how far the
    conditions fail, in units of the simplex scale.
    """
    verts = np.asarray(simplex_points, dtype=np.float64).reshape(-1, 3)
    _check_simplex(verts)
    qs = np.atleast_2d(np.asarray(queries, dtype=np.float64))
    n = len(verts)
    scale = max(np.linalg.norm(verts - verts.mean(0), axis=1).max(), 1e-300)

    columns = []
    for k in range(1, n + 1):
        for subset in itertools.combinations(range(n), k):
            sub = verts[list(subset)]
            if k == 1:
                proj = np.broadcast_to(sub[0], qs.shape)
                weight_violation = np.zeros(len(qs))
            else:
                e = (sub[1:] - sub[0]).T
                pinv = np.linalg.pinv(e)  # (k-1, 3)
                mu = (qs - sub[0]) @ pinv.T
                w = np.concatenate([1.0 - mu.sum(1, keepdims=True), mu], axis=1)
                proj = sub[0] + mu @ e.T
                weight_violation = np.maximum(-w.min(1), 0.0)
            offset = qs - proj
            cone_violation = np.zeros(len(qs))
            for other in set(range(n)) - set(subset):
                t = np.einsum("ij,ij->i", offset, verts[other] - proj) / (scale * scale)
                cone_violation = np.maximum(cone_violation, t)
            score = np.maximum(weight_violation, cone_violation)
            if k == n == 3:
                normal = np.cross(verts[1] - verts[0], verts[2] - verts[0])
                normal /= np.linalg.norm(normal)
                height = (qs - verts[0]) @ normal / scale
                columns.append(np.maximum(score, np.maximum(-height, 0.0)))
                columns.append(np.maximum(score, np.maximum(height, 0.0)))
            else:
                columns.append(score)
    return np.stack(columns, axis=1)


def _pick(scores_row: np.ndarray, labels, tol: float) -> RegionLabel:
    ok = np.flatnonzero(scores_row <= tol)
    if len(ok) == 0:
        return labels[int(np.argmin(scores_row))]
    # lowest-dimensional feature first, then the smallest violation
    best = min(ok, key=lambda i: (len(labels[i].feature), scores_row[i]))
    return labels[best]


def classify_region(simplex_points, q=(0.0, 0.0, 0.0), tol: float = 0.0) -> RegionLabel:
    """Voronoi region of the simplex containing ``q``; boundary ties go to the lower-dimensional feature."""
    verts = np.asarray(simplex_points, dtype=np.float64).reshape(-1, 3)
    scores = region_scores(verts, np.asarray(q, dtype=np.float64)[None, :])[0]
    return _pick(scores, region_labels(len(verts)), tol)


def classify_regions(simplex_points, queries, tol: float = 0.0) -> list:
    verts = np.asarray(simplex_points, dtype=np.float64).reshape(-1, 3)
    scores = region_scores(verts, queries)
    labels = region_labels(len(verts))
    return [_pick(row, labels, tol) for row in scores]


def candidate_regions(simplex_points, q=(0.0, 0.0, 0.0), tol: float = 1e-9) -> set:
    """Every region whose closure contains ``q`` up to ``tol`` (relative to the simplex scale)."""
    verts = np.asarray(simplex_points, dtype=np.float64).reshape(-1, 3)
    scores = region_scores(verts, np.asarray(q, dtype=np.float64)[None, :])[0]
    labels = region_labels(len(verts))
    return {str(labels[i]) for i in np.flatnonzero(scores <= tol)}


# --------------------------------------------------------------------------
# Random pairs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    vertex_count: tuple = (5, 12)
    scale: tuple = (0.5, 2.0)
    translation: tuple = (0.0, 4.0)

    def __post_init__(self):
        lo, hi = self.vertex_count
        if not (1 <= lo <= hi):
            raise ValueError(f"bad vertex_count range {self.vertex_count}")
        if not (0 < self.scale[0] <= self.scale[1]):
            raise ValueError(f"bad scale range {self.scale}")
        if not (0 <= self.translation[0] <= self.translation[1]):
            raise ValueError(f"bad translation range {self.translation}")


def _random_cloud(rng: np.random.Generator, config: GeneratorConfig) -> np.ndarray:
    n = int(rng.integers(config.vertex_count[0], config.vertex_count[1] + 1))
    dirs = rng.normal(size=(n, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    pts = dirs * rng.uniform(size=(n, 1)) ** (1.0 / 3.0)
    # centering puts the centroid (a convex combination) inside the hull
    pts -= pts.mean(axis=0)
    pts /= max(1.0, np.linalg.norm(pts, axis=1).max())
    s = rng.uniform(*config.scale)
    rot = Rotation.random(random_state=rng).as_matrix()
    return (pts * s) @ rot.T


def generate_pair(config: GeneratorConfig, index: int) -> ShapePair:
    """Deterministic random point-cloud pair number ``index``.

    Each cloud is centered on its vertex mean, fits in a ball of radius
    ``scale``, and is randomly rotated. A sits at the origin; B is shifted by
    a random direction times a magnitude drawn from ``config.translation``.
    """
    rng = np.random.default_rng([config.seed & 0xFFFFFFFFFFFFFFFF, int(index)])
    a = _random_cloud(rng, config)
    b = _random_cloud(rng, config)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    b = b + direction * rng.uniform(*config.translation)
    return ShapePair(PointCloud(a), PointCloud(b))


def pair_vertices(pair: ShapePair):
    return _as_vertices(pair.shape_a), _as_vertices(pair.shape_b)


__all__ = [
    "GeneratorConfig",
    "RegionLabel",
    "candidate_regions",
    "classify_region",
    "classify_regions",
    "difference_cloud",
    "extreme_points",
    "generate_pair",
    "oracle_distance",
    "oracle_intersects",
    "oracle_margin",
    "oracle_min_norm",
    "pair_vertices",
    "region_labels",
    "region_scores",
    "sat_intersects",
    "sat_sweep",
]
