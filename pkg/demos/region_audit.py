# Where the origin sits each time do_simplex is entered, over random pairs.
from collections import Counter

from convexgjk import intersects
from convexgjk.oracle import GeneratorConfig, classify_region, generate_pair

seen = {2: Counter(), 3: Counter(), 4: Counter()}


def record(points, direction):
    try:
        seen[len(points)][str(classify_region(points))] += 1
    except ValueError:
        seen[len(points)]["degenerate"] += 1


gen = GeneratorConfig(seed=1)
for i in range(500):
    intersects(generate_pair(gen, i), observer=record)

for size, counts in seen.items():
    print(f"size {size}:", dict(counts.most_common()))
# segments only ever see the slab, triangles never B, C or BC,
# tetrahedra only the interior and the faces and edges through A
