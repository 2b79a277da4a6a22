# Boolean GJK on two cubes, printing the simplex at every do_simplex entry.
import numpy as np

from convexgjk import Box, ShapePair, Transformed, intersects
from convexgjk.oracle import classify_region

c, s = np.cos(0.4), np.sin(0.4)
spin = np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
reach = 1 + c + s  # x extent of the cube plus the spun cube's half width


def show(points, direction):
    label = classify_region(points) if len(points) > 1 else "-"
    print(f"  entry size {len(points)}, origin region {label}, last direction {np.round(direction, 3)}")


for gap in (0.5, -0.3):
    other = Transformed(Box([1, 1, 1]), spin, [reach + gap, 0.2, 0.1])
    print(f"offset {gap:+}")
    hit, stats = intersects(ShapePair(Box([1, 1, 1]), other), observer=show)
    print(f"  -> {hit} ({stats.terminated_by.value}), {stats.iterations} iterations, "
          f"{stats.plane_tests} plane tests")
