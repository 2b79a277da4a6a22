# Distance GJK: the gap |P|^2 - P.V shrinks to zero and bounds the error.
import numpy as np

from convexgjk import Box, DistanceConfig, ShapePair, Sphere, distance

pair = ShapePair(Box([1, 2, 0.5]), Sphere([3, 4, 1], 1))
res = distance(pair, DistanceConfig(epsilon=1e-10))
print(f"distance {res.distance:.12f} after {res.stats.iterations} iterations")
print("closest on box:", np.round(res.point_on_a, 9))
print("closest on sphere:", np.round(res.point_on_b, 9))
for k, (gap, norm) in enumerate(zip(res.gaps, res.norms)):
    print(f"  step {k}: |P| = {norm:.9f}, gap = {gap:.3e}")

# the true answer: the box corner (1, 2, 0.5) to the sphere center, minus the radius
print("expected", np.linalg.norm(np.array([3, 4, 1]) - [1, 2, 0.5]) - 1)
