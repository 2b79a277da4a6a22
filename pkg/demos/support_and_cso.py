# Support mappings and the difference set A - B, sampled one direction at a time.
import numpy as np

from convexgjk import Box, PointCloud, ShapePair, Sphere, cso_support, support_point
from convexgjk.oracle import difference_cloud

box = Box([1, 1, 1])
ball = Sphere([5, 0, 0], 1)
print("box support along (1,2,3):", support_point(box, [1, 2, 3]))
print("ball support along -x:", support_point(ball, [-1, 0, 0]))

# ties go to the lowest vertex index
tri = PointCloud([(1, 1, 1), (1, -1, -1), (-1, 0, 0)])
print("cloud support along +x:", support_point(tri, [1, 0, 0]))

pair = ShapePair(box, Box([1, 1, 1], [3, 0, 0]))
v = cso_support(pair, [1, 0, 0])
print("difference support:", v.point, "=", v.witness_a, "-", v.witness_b)

# the explicit pairwise-difference cloud agrees on support values
rng = np.random.default_rng(0)
a, b = rng.normal(size=(6, 3)), rng.normal(size=(7, 3)) + 2
diff = difference_cloud(a, b)
d = rng.normal(size=3)
lazy = cso_support(ShapePair(PointCloud(a), PointCloud(b)), d).point @ d
print(f"support value lazily {lazy:.12f}, explicitly {(diff @ d).max():.12f}")
