"""Command line front end: ``gjk run`` on scene files, ``gjk suite`` on generated pairs.

Exit status is 0 when every checked query agrees with its oracle, 2 on any
disagreement and 1 on bad input.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bgjk import BgjkConfig, intersects
from .cso import ShapePair
from .dgjk import DistanceConfig, distance
from .geometry import Box, PointCloud, Sphere, Transformed, world_vertices
from .oracle import GeneratorConfig, generate_pair, oracle_margin

MODES = ("intersect", "distance", "check")
MARGIN_FACTOR = 1e-7
EXIT_OK, EXIT_INPUT, EXIT_DISAGREE = 0, 1, 2


class SceneError(ValueError):
    """Malformed scene document; the message names the offending line or field."""


@dataclass(frozen=True)
class Query:
    name_a: str
    name_b: str
    mode: str


@dataclass
class Scene:
    shapes: dict
    queries: list


# --------------------------------------------------------------------------
# Scene parsing
# --------------------------------------------------------------------------

_FIELDS = {
    "sphere": ({"type", "center", "radius"}, set()),
    "box": ({"type", "half_extents"}, {"center"}),
    "polytope": ({"type", "vertices"}, set()),
    "transformed": ({"type", "inner", "rotation", "translation"}, set()),
}


def _number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneError(f"{where}: expected a number, got {value!r}")
    x = float(value)
    if not math.isfinite(x):
        raise SceneError(f"{where}: number must be finite")
    return x


def _numbers(value, count: int, where: str) -> list:
    if not isinstance(value, list) or len(value) != count:
        raise SceneError(f"{where}: expected a list of {count} numbers")
    return [_number(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _shape(obj, where: str, raw: dict, resolving: tuple):
    if isinstance(obj, str):
        if obj not in raw:
            raise SceneError(f"{where}: reference to undefined shape {obj!r}")
        if obj in resolving:
            raise SceneError(f"{where}: cyclic reference through shape {obj!r}")
        return _shape(raw[obj], f"shapes.{obj}", raw, resolving + (obj,))
    if not isinstance(obj, dict):
        raise SceneError(f"{where}: shape must be an object or a shape name")
    kind = obj.get("type")
    if kind not in _FIELDS:
        raise SceneError(f"{where}.type: unknown shape type {kind!r}")
    required, optional = _FIELDS[kind]
    for key in sorted(set(obj) - required - optional):
        raise SceneError(f"{where}.{key}: unknown field for {kind}")
    for key in sorted(required - set(obj)):
        raise SceneError(f"{where}.{key}: missing field")
    try:
        if kind == "sphere":
            return Sphere(_numbers(obj["center"], 3, f"{where}.center"),
                          _number(obj["radius"], f"{where}.radius"))
        if kind == "box":
            center = _numbers(obj.get("center", [0, 0, 0]), 3, f"{where}.center")
            return Box(_numbers(obj["half_extents"], 3, f"{where}.half_extents"), center)
        if kind == "polytope":
            verts = obj["vertices"]
            if not isinstance(verts, list) or not verts:
                raise SceneError(f"{where}.vertices: expected a non-empty list of [x, y, z]")
            return PointCloud([_numbers(v, 3, f"{where}.vertices[{i}]") for i, v in enumerate(verts)])
        inner = _shape(obj["inner"], f"{where}.inner", raw, resolving)
        return Transformed(inner, _numbers(obj["rotation"], 9, f"{where}.rotation"),
                           _numbers(obj["translation"], 3, f"{where}.translation"))
    except SceneError:
        raise
    except ValueError as exc:
        raise SceneError(f"{where}: {exc}") from None


def parse_scene(text: str) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise SceneError("document: top level must be an object")
    for key in sorted(set(doc) - {"shapes", "queries"}):
        raise SceneError(f"{key}: unknown top-level field")
    raw = doc.get("shapes")
    if not isinstance(raw, dict):
        raise SceneError("shapes: expected an object mapping names to shapes")
    shapes = {name: _shape(obj, f"shapes.{name}", raw, (name,)) for name, obj in raw.items()}

    queries = doc.get("queries")
    if not isinstance(queries, list):
        raise SceneError("queries: expected a list of [name_a, name_b, mode]")
    parsed = []
    for i, q in enumerate(queries):
        where = f"queries[{i}]"
        if not isinstance(q, list) or len(q) != 3 or not all(isinstance(x, str) for x in q):
            raise SceneError(f"{where}: expected [name_a, name_b, mode]")
        for name in q[:2]:
            if name not in shapes:
                raise SceneError(f"{where}: reference to undefined shape {name!r}")
        if q[2] not in MODES:
            raise SceneError(f"{where}: unknown mode {q[2]!r} (expected one of {', '.join(MODES)})")
        parsed.append(Query(*q))
    return Scene(shapes, parsed)


# --------------------------------------------------------------------------
# Query execution
# --------------------------------------------------------------------------

def _vec(v) -> list:
    return [float(x) for x in v]


def _oracle(shape_a, shape_b):
    """``(intersecting, distance, margin)`` or None when no oracle applies."""
    if isinstance(shape_a, Sphere) and isinstance(shape_b, Sphere):
        gap = float(np.linalg.norm(shape_a.center - shape_b.center)) - shape_a.radius - shape_b.radius
        return gap <= 0.0, max(gap, 0.0), abs(gap)
    try:
        va, vb = world_vertices(shape_a), world_vertices(shape_b)
    except ValueError:
        return None
    hit, margin = oracle_margin(va, vb)
    return hit, (0.0 if hit else margin), margin


def run_query(pair: ShapePair, mode: str, bconf: BgjkConfig, dconf: DistanceConfig) -> dict:
    rec = {"mode": mode}
    if mode == "intersect":
        hit, stats = intersects(pair, bconf)
        rec["result"] = hit
        rec["stats"] = stats.as_dict()
        return rec
    if mode == "distance":
        res = distance(pair, dconf)
        rec["result"] = float(res.distance)
        rec["point_on_a"] = _vec(res.point_on_a)
        rec["point_on_b"] = _vec(res.point_on_b)
        rec["converged"] = res.converged
        rec["stats"] = res.stats.as_dict()
        return rec

    hit, stats = intersects(pair, bconf)
    res = distance(pair, dconf)
    rec["result"] = {"intersects": hit, "distance": float(res.distance)}
    rec["stats"] = stats.as_dict()
    rec["distance_stats"] = res.stats.as_dict()
    found = _oracle(pair.shape_a, pair.shape_b)
    if found is None:
        rec["oracle_result"] = None
        rec["agree"] = None
        rec["margin"] = None
        return rec
    o_hit, o_dist, margin = found
    scale = pair.scale
    if o_hit:
        dist_ok = res.distance < MARGIN_FACTOR * scale
    else:
        dist_ok = abs(res.distance - o_dist) <= 1e-6 * (1.0 + o_dist)
    rec["oracle_result"] = {"intersects": bool(o_hit), "distance": float(o_dist)}
    rec["agree"] = bool(hit == o_hit and dist_ok)
    rec["margin"] = float(margin)
    rec["counted"] = bool(margin > MARGIN_FACTOR * scale)
    rec["distance_error"] = float(abs(res.distance - o_dist))
    return rec


def summarize(records: list) -> dict:
    def stat_max(key):
        return max((r["stats"][key] for r in records), default=0)

    return {
        "total": len(records),
        "disagreements": sum(1 for r in records if r.get("agree") is False and r.get("counted")),
        "max_distance_error": max((r["distance_error"] for r in records if "distance_error" in r), default=0.0),
        "max_plane_tests_per_call": stat_max("max_plane_tests_per_call"),
        "dosimplex_size2_entries_per_query_max": max(
            (r["stats"]["dosimplex_entry_sizes"].count(2) for r in records), default=0),
    }


def run(scene: Scene, bconf: BgjkConfig = BgjkConfig(), dconf: DistanceConfig = DistanceConfig()) -> dict:
    records = []
    for q in scene.queries:
        pair = ShapePair(scene.shapes[q.name_a], scene.shapes[q.name_b])
        rec = {"names": [q.name_a, q.name_b]}
        rec.update(run_query(pair, q.mode, bconf, dconf))
        records.append(rec)
    return {"records": records, "summary": summarize(records)}


def run_suite(gen: GeneratorConfig, count: int, mode: str,
              bconf: BgjkConfig = BgjkConfig(), dconf: DistanceConfig = DistanceConfig()) -> dict:
    records = []
    for i in range(count):
        rec = {"index": i, "names": [f"a{i}", f"b{i}"]}
        rec.update(run_query(generate_pair(gen, i), mode, bconf, dconf))
        records.append(rec)
    return {"records": records, "summary": summarize(records)}


def exit_code(report: dict) -> int:
    return EXIT_DISAGREE if report["summary"]["disagreements"] else EXIT_OK


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

CSV_COLUMNS = ("names", "mode", "result", "oracle_result", "agree", "margin", "iterations",
               "support_calls", "plane_tests", "max_plane_tests_per_call", "size2_entries",
               "terminated_by")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, dict):
        return ";".join(f"{k}={_cell(v)}" for k, v in value.items())
    if isinstance(value, list):
        return "/".join(_cell(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def render(report: dict, fmt: str) -> str:
    # json writes floats with repr, the shortest string that round-trips
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in report["records"]:
        s = r["stats"]
        w.writerow([_cell(r["names"]), r["mode"], _cell(r["result"]), _cell(r.get("oracle_result")),
                    _cell(r.get("agree")), _cell(r.get("margin")), s["iterations"], s["support_calls"],
                    s["plane_tests"], s["max_plane_tests_per_call"],
                    s["dosimplex_entry_sizes"].count(2), _cell(s["terminated_by"])])
    return buf.getvalue()


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p):
    p.add_argument("--epsilon", type=float, default=DistanceConfig.epsilon,
                   help="relative distance tolerance (default %(default)s)")
    p.add_argument("--max-iters", type=int, default=None,
                   help="iteration cap for both queries (defaults 64 boolean, 128 distance)")
    p.add_argument("--grazing-tol", type=float, default=0.0, help="rejection slack for S.D (default 0)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gjk", description="Convex intersection and distance queries.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run the queries of a scene file")
    p.add_argument("scene", help="scene JSON file, or - for stdin")
    _common(p)

    p = sub.add_parser("suite", help="run queries on generated random point-cloud pairs")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--mode", choices=MODES, default="check")
    p.add_argument("--min-verts", type=int, default=5)
    p.add_argument("--max-verts", type=int, default=12)
    _common(p)
    return parser


def _configs(args):
    bkw = {"grazing_tolerance": args.grazing_tol}
    dkw = {"epsilon": args.epsilon}
    if args.max_iters is not None:
        bkw["max_iterations"] = dkw["max_iterations"] = args.max_iters
    return BgjkConfig(**bkw), DistanceConfig(**dkw)


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        bconf, dconf = _configs(args)
        if args.command == "run":
            if args.scene == "-":
                text = sys.stdin.read()
            else:
                with open(args.scene, encoding="utf-8") as fh:
                    text = fh.read()
            report = run(parse_scene(text), bconf, dconf)
        else:
            if args.count < 0:
                raise ValueError(f"--count must be non-negative, got {args.count}")
            gen = GeneratorConfig(seed=args.seed, vertex_count=(args.min_verts, args.max_verts))
            report = run_suite(gen, args.count, args.mode, bconf, dconf)
    except (OSError, ValueError) as exc:
        print(f"gjk: {exc}", file=sys.stderr)
        return EXIT_INPUT

    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
