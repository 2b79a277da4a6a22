"""Acceptance criteria 1-10, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v``; a PASS/FAIL line per
criterion is printed in the terminal summary.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from convexgjk.bgjk import TerminatedBy, intersects
from convexgjk.cso import ShapePair
from convexgjk.dgjk import DistanceConfig, distance
from convexgjk.geometry import Box, Sphere
from convexgjk.oracle import (
    GeneratorConfig,
    candidate_regions,
    generate_pair,
    oracle_margin,
    pair_vertices,
    sat_intersects,
)

from conftest import ACCEPTANCE

SUITE = GeneratorConfig(seed=7)
SUITE_SIZE = 10_000
SEPARATED = GeneratorConfig(seed=8, translation=(2.5, 5.0))
MARGIN = 1e-7
EPS = DistanceConfig().epsilon

LINE_OK = {"AB"}
TRIANGLE_EXCLUDED = {"B", "C", "BC"}
TETRA_OK = {"ABCD-interior", "ABC", "ACD", "ABD", "AB", "AC", "AD"}


def report(number, ok, detail):
    ACCEPTANCE[number] = (bool(ok), detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


class RegionAudit:
    """Observer classifying the origin at every do_simplex entry."""

    def __init__(self):
        self.entries = {2: 0, 3: 0, 4: 0}
        self.violations = {2: 0, 3: 0, 4: 0}
        self.dot_violations = 0
        self.degenerate = 0
        self.vertex_a = 0

    def __call__(self, points, direction):
        n = len(points)
        self.entries[n] += 1
        scale = max(float(np.linalg.norm(p)) for p in points)
        if n == 2 and float(points[0] @ points[1]) > 1e-9 * scale * scale:
            self.dot_violations += 1
        try:
            found = candidate_regions(points, tol=1e-9)
        except ValueError:
            self.degenerate += 1
            return
        if n == 2:
            bad = not (found & LINE_OK)
        elif n == 3:
            bad = found <= TRIANGLE_EXCLUDED
            self.vertex_a += found == {"A"}
        else:
            bad = not (found & TETRA_OK)
        self.violations[n] += bad


@pytest.fixture(scope="module")
def suite():
    """Oracle margins and audited Boolean queries for the main suite."""
    audit = RegionAudit()
    rows = []
    t0 = time.perf_counter()
    for i in range(SUITE_SIZE):
        pair = generate_pair(SUITE, i)
        va, vb = pair_vertices(pair)
        hit, margin = oracle_margin(va, vb)
        got, stats = intersects(pair, observer=audit)
        rows.append((pair, hit, margin, got, stats))
    elapsed = time.perf_counter() - t0
    return rows, audit, elapsed


def test_criterion_09_oracle_cross_validation(suite):
    rows, _, _ = suite
    checked = disagree = 0
    for pair, hit, margin, _, _ in rows[:1000]:
        if margin > MARGIN * pair.scale:
            checked += 1
            disagree += sat_intersects(*pair_vertices(pair)) != hit
    report(9, disagree == 0 and checked > 900,
           f"carathéodory vs separating sweep: {disagree} disagreements on {checked} pairs above margin")


def test_criterion_01_boolean_correctness(suite):
    rows, _, elapsed = suite
    checked = disagree = 0
    hits = sum(r[1] for r in rows)
    for pair, hit, margin, got, _ in rows:
        if margin > MARGIN * pair.scale:
            checked += 1
            disagree += got != hit
    ok = disagree == 0 and elapsed < 300 and 0 < hits < len(rows)
    report(1, ok, f"{disagree} disagreements on {checked} pairs above margin "
                  f"({hits} intersecting / {len(rows) - hits} separated), {elapsed:.0f}s with oracles")


def test_criterion_02_distance_correctness():
    worst = 0.0
    count = i = 0
    while count < SUITE_SIZE:
        pair = generate_pair(SEPARATED, i)
        i += 1
        hit, expected = oracle_margin(*pair_vertices(pair))
        if hit:
            continue
        count += 1
        res = distance(pair)
        worst = max(worst, abs(res.distance - expected) / (1 + expected))

    sphere_err = 0.0
    rng = np.random.default_rng(0)
    for _ in range(200):
        c1, c2 = rng.normal(size=(2, 3)) * 3
        r1, r2 = rng.uniform(0.1, 1.0, size=2)
        gap = np.linalg.norm(c1 - c2) - r1 - r2
        if gap <= 0.01:
            continue
        sphere_err = max(sphere_err, abs(distance(ShapePair(Sphere(c1, r1), Sphere(c2, r2))).distance - gap))

    box_err = 0.0
    for _ in range(200):
        h1, h2 = rng.uniform(0.2, 2.0, size=(2, 3))
        gap = rng.uniform(0.01, 3.0)
        axis = rng.integers(3)
        offset = rng.uniform(-0.1, 0.1, size=3) * np.minimum(h1, h2)
        offset[axis] = h1[axis] + h2[axis] + gap
        res = distance(ShapePair(Box(h1), Box(h2, offset)))
        box_err = max(box_err, abs(res.distance - gap))

    ok = worst <= 1e-6 and sphere_err <= 1e-6 and box_err <= 1e-9
    report(2, ok, f"max relative error {worst:.2e} over {count} separated pairs; "
                  f"sphere controls {sphere_err:.2e}; box controls {box_err:.2e}")


def test_criterion_03_segment_entries(suite):
    _, audit, _ = suite
    v = audit.violations[2] + audit.dot_violations
    report(3, v == 0, f"{audit.entries[2]} size-2 entries: {audit.dot_violations} with A.B > 1e-9 scale^2, "
                      f"{audit.violations[2]} outside the slab")


def test_criterion_04_triangle_entries(suite):
    _, audit, _ = suite
    report(4, audit.violations[3] == 0,
           f"{audit.entries[3]} size-3 entries: {audit.violations[3]} in B, C or BC "
           f"({audit.vertex_a} in A, {audit.degenerate} degenerate entries skipped overall)")


def test_criterion_05_tetrahedron_entries(suite):
    _, audit, _ = suite
    report(5, audit.violations[4] == 0,
           f"{audit.entries[4]} size-4 entries: {audit.violations[4]} outside the regions touching A")


def test_criterion_06_unrolling(suite):
    rows, _, _ = suite
    bad = 0
    for *_, stats in rows:
        sizes = stats.dosimplex_entry_sizes
        bad += sizes.count(2) > 1 or 2 in sizes[1:]
    report(6, bad == 0, f"{bad} queries re-entered the segment case")


def test_criterion_07_plane_tests(suite):
    rows, _, _ = suite
    worst = max(stats.max_plane_tests_per_call for *_, stats in rows)
    report(7, worst == 3, f"max plane tests per tetrahedron call = {worst}")


def test_criterion_08_termination_certificate(suite):
    rows, _, _ = suite
    negative = unconverged = late = checked = 0
    for pair, *_ in rows:
        res = distance(pair)
        s2 = pair.scale ** 2
        negative += min(res.gaps, default=0.0) < -1e-9 * s2
        if res.stats.terminated_by == TerminatedBy.ENCLOSED_ORIGIN:
            continue
        checked += 1
        unconverged += not res.converged
        late += res.gaps[-1] > (EPS ** 2) * s2
    ok = negative == 0 and late == 0 and unconverged == 0
    report(8, ok, f"{negative} iterations below -1e-9 scale^2; {late} of {checked} separated runs "
                  f"end above eps^2 scale^2; {unconverged} hit the cap")


def test_criterion_10_determinism(tmp_path):
    cmd = [sys.executable, "-m", "convexgjk", "suite", "--seed", "7", "--count", "1000", "--mode", "check"]
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        proc = subprocess.run(cmd + ["--out", str(path)], capture_output=True)
        assert proc.returncode == 0, proc.stderr.decode()
        outs.append(path.read_bytes())
    report(10, outs[0] == outs[1], f"two suite runs: {len(outs[0])} bytes, identical={outs[0] == outs[1]}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
