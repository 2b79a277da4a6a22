"""Support mapping of the Minkowski difference ``A - B`` (configuration space obstacle).

The difference is never built; it is only sampled through ``cso_support``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import Shape, Vec3, check_direction, norm2


class CsoVertex(NamedTuple):
    """A sample ``point = witness_a - witness_b`` of the difference set."""

    point: Vec3
    witness_a: Vec3
    witness_b: Vec3


@dataclass(frozen=True, eq=False)
class ShapePair:
    shape_a: Shape
    shape_b: Shape

    @property
    def scale(self) -> float:
        """Radius of a ball about the origin containing every difference point."""
        s = self.shape_a.bounding_radius() + self.shape_b.bounding_radius()
        return s if s > 0.0 else 1.0

    def initial_direction(self) -> Vec3:
        """Centroid offset ``center(A) - center(B)``, or +x when the centroids coincide."""
        d = self.shape_a.centroid() - self.shape_b.centroid()
        if norm2(d) < (1e-12 * self.scale) ** 2:
            return np.array([1.0, 0.0, 0.0])
        return d

    def swapped(self) -> "ShapePair":
        return ShapePair(self.shape_b, self.shape_a)


def cso_support(pair: ShapePair, direction) -> CsoVertex:
    d = check_direction(direction)
    wa = pair.shape_a.support(d)
    wb = pair.shape_b.support(-d)
    return CsoVertex(wa - wb, wa, wb)
