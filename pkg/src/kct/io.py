"""Graph ingestion, result serialization and synthetic graph generation.

File formats (UTF-8, LF line endings, header row required):

``vertices.csv``  ``id,label,lat_deg,lon_deg`` (coordinates may be blank)
``edges.csv``     ``u,v,minutes`` (endpoints refer to vertex ``id`` values)
``planar.csv``    ``id,x_km,y_km``
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.spatial import cKDTree

from .errors import InputError, MetricError
from .geo import EARTH_RADIUS_KM, PlanarFrame
from .graph import TENTHS_PER_MINUTE, RoadGraph, Vertex, minutes_to_tenths
from .partition import CenteredPartition, CenteredTU

VERTEX_HEADER = ["id", "label", "lat_deg", "lon_deg"]
EDGE_HEADER = ["u", "v", "minutes"]
PLANAR_HEADER = ["id", "x_km", "y_km"]
SWEEP_HEADER = [
    "k",
    "R_minutes",
    "min_radius_minutes",
    "mean_radius_minutes",
    "stddev_radius_minutes",
    "centers",
]


@dataclass(frozen=True)
class GraphBundle:
    graph: RoadGraph
    frame: Optional[PlanarFrame] = None
    rng_seed: Optional[int] = None


def format_tenths(t: int) -> str:
    t = int(t)
    sign = "-" if t < 0 else ""
    t = abs(t)
    return f"{sign}{t // TENTHS_PER_MINUTE}.{t % TENTHS_PER_MINUTE}"


def _minutes(x: float) -> float:
    return round(float(x), 1)


# -- reading ------------------------------------------------------------


def _rows(path, header):
    path = Path(path)
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise InputError(f"{path}: empty file, expected header {','.join(header)}") from None
        if [c.strip() for c in first] != header:
            raise InputError(f"{path}:1: expected header {','.join(header)}, got {','.join(first)}")
        for row in reader:
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(
                    f"{path}:{reader.line_num}: expected {len(header)} fields, got {len(row)}"
                )
            yield reader.line_num, [c.strip() for c in row]


def _float(path, line, text, what):
    try:
        return float(text)
    except ValueError:
        raise InputError(f"{path}:{line}: {what} is not a number: {text!r}") from None


def load_graph(vertices_path, edges_path, planar_path=None) -> GraphBundle:
    """Read and validate a road graph.

    Vertex ids are assigned in file order. Duplicate edges keep the minimum
    weight. The graph must be connected.
    """
    vertices, index = [], {}
    for line, (key, label, lat, lon) in _rows(vertices_path, VERTEX_HEADER):
        if not key:
            raise InputError(f"{vertices_path}:{line}: empty vertex id")
        if key in index:
            raise InputError(f"{vertices_path}:{line}: duplicate vertex id {key!r}")
        geo = None
        if lat or lon:
            if not (lat and lon):
                raise InputError(f"{vertices_path}:{line}: give both lat_deg and lon_deg or neither")
            geo = (_float(vertices_path, line, lat, "lat_deg"), _float(vertices_path, line, lon, "lon_deg"))
        try:
            v = Vertex(len(vertices), label or key, key, geo)
        except InputError as exc:
            raise InputError(f"{vertices_path}:{line}: {exc}") from None
        index[key] = v.id
        vertices.append(v)

    edges = []
    for line, (u, v, w) in _rows(edges_path, EDGE_HEADER):
        for end in (u, v):
            if end not in index:
                raise InputError(f"{edges_path}:{line}: unknown vertex id {end!r}")
        try:
            t = minutes_to_tenths(w)
        except InputError:
            raise InputError(f"{edges_path}:{line}: weight is not a number: {w!r}") from None
        if t <= 0:
            raise InputError(f"{edges_path}:{line}: weight must be positive, got {w!r}")
        if index[u] == index[v]:
            raise InputError(f"{edges_path}:{line}: self-loop at vertex {u!r}")
        edges.append((index[u], index[v], t))

    if not vertices:
        raise InputError(f"{vertices_path}: no vertices")
    graph = RoadGraph.from_tenths(vertices, edges, require_connected=False)
    missing = graph.unreachable_from(0)
    if missing is not None:
        raise MetricError(
            f"graph is disconnected: vertex {vertices[missing].key!r} is unreachable "
            f"from vertex {vertices[0].key!r}",
            unreachable=(0, missing),
        )
    if planar_path is not None:
        graph = graph.with_planar(read_planar(planar_path, graph))
    return GraphBundle(graph)


def read_planar(path, graph: RoadGraph) -> np.ndarray:
    index = {v.key: v.id for v in graph.vertices}
    xy = np.full((graph.n, 2), np.nan)
    for line, (key, x, y) in _rows(path, PLANAR_HEADER):
        if key not in index:
            raise InputError(f"{path}:{line}: unknown vertex id {key!r}")
        xy[index[key]] = (_float(path, line, x, "x_km"), _float(path, line, y, "y_km"))
    if np.isnan(xy).any():
        v = int(np.flatnonzero(np.isnan(xy[:, 0]))[0])
        raise InputError(f"{path}: no planar coordinates for vertex {graph.vertices[v].key!r}")
    return xy


# -- writing ------------------------------------------------------------


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def vertices_csv(graph: RoadGraph) -> str:
    rows = []
    for v in graph.vertices:
        lat, lon = (repr(v.geo[0]), repr(v.geo[1])) if v.geo else ("", "")
        rows.append([v.key, v.label, lat, lon])
    return _csv_text(VERTEX_HEADER, rows)


def edges_csv(graph: RoadGraph) -> str:
    keys = [v.key for v in graph.vertices]
    return _csv_text(EDGE_HEADER, [[keys[u], keys[v], format_tenths(t)] for u, v, t in graph.edges()])


def planar_csv(graph: RoadGraph) -> str:
    xy = graph.planar_array()
    return _csv_text(
        PLANAR_HEADER,
        [[v.key, repr(float(x)), repr(float(y))] for v, (x, y) in zip(graph.vertices, xy)],
    )


def write_bundle(bundle: GraphBundle, directory) -> dict:
    """Write ``vertices.csv``, ``edges.csv`` (and ``planar.csv`` if present)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    paths = {"vertices": directory / "vertices.csv", "edges": directory / "edges.csv"}
    _write(paths["vertices"], vertices_csv(bundle.graph))
    _write(paths["edges"], edges_csv(bundle.graph))
    if bundle.graph.has_planar():
        paths["planar"] = directory / "planar.csv"
        _write(paths["planar"], planar_csv(bundle.graph))
    return paths


# -- solutions ----------------------------------------------------------


def solution_dict(sol, graph: RoadGraph, borders=None) -> dict:
    labels = graph.labels()
    p = sol.partition
    doc = {
        "k": sol.k,
        "R_minutes": _minutes(sol.R),
        "min_radius": _minutes(sol.min_radius),
        "mean_radius": _minutes(sol.mean_radius),
        "stddev_radius": _minutes(sol.stddev_radius),
        "centers": [{"id": c, "label": labels[c]} for c in sol.centers],
        "tus": [
            {"center": tu.center, "members": tu.sorted_members(), "radius": _minutes(r)}
            for tu, r in zip(p.tus, p.radii)
        ],
        "stage_trace": [{"stage": s, "R_minutes": _minutes(r)} for s, r in sol.stage_trace],
        "constraint_ok": bool(sol.constraint_ok),
        "converged": bool(sol.converged),
        "start_vertex": sol.start_vertex,
        "rng_seed": sol.rng_seed,
    }
    if borders is not None:
        doc["borders"] = {
            "method": borders.method.value,
            "segments": [
                {"tus": list(pair), "from": [_km(a[0]), _km(a[1])], "to": [_km(b[0]), _km(b[1])]}
                for pair, a, b in borders.segments()
            ],
        }
    return doc


def _km(x):
    return round(float(x), 6)


def emit_solution(sol, graph: RoadGraph, borders=None) -> str:
    """Solution JSON; minute values carry one fractional digit."""
    return json.dumps(solution_dict(sol, graph, borders), indent=2) + "\n"


def parse_solution(text: str):
    """Inverse of :func:`emit_solution` (borders are ignored)."""
    from .solver import Solution

    doc = json.loads(text) if isinstance(text, str) else text
    try:
        tus = tuple(CenteredTU(frozenset(t["members"]), int(t["center"])) for t in doc["tus"])
        radii = tuple(minutes_to_tenths(t["radius"]) for t in doc["tus"])
        n = sum(len(t.members) for t in tus)
        assignment = np.full(n, -1, dtype=np.int64)
        for i, tu in enumerate(tus):
            assignment[list(tu.members)] = i
        if (assignment < 0).any():
            raise InputError("solution units do not cover a contiguous id range")
        assignment.setflags(write=False)
        return Solution(
            centers=tuple(int(c["id"]) for c in doc["centers"]),
            partition=CenteredPartition(tus, radii, assignment),
            stage_trace=tuple((s["stage"], float(s["R_minutes"])) for s in doc["stage_trace"]),
            constraint_ok=bool(doc["constraint_ok"]),
            converged=bool(doc.get("converged", True)),
            start_vertex=doc.get("start_vertex"),
            rng_seed=doc.get("rng_seed"),
        )
    except (KeyError, TypeError, IndexError) as exc:
        raise InputError(f"malformed solution document: {exc}") from None


def read_solution(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    try:
        return parse_solution(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def emit_sweep_csv(rows, graph: RoadGraph) -> str:
    """Sweep table, one row per k, centers as ``;``-joined labels."""
    if not rows:
        raise InputError("no sweep rows to write")
    labels = graph.labels()
    return _csv_text(
        SWEEP_HEADER,
        [
            [
                r.k,
                f"{r.R:.1f}",
                f"{r.min_radius:.1f}",
                f"{r.mean_radius:.1f}",
                f"{r.stddev_radius:.1f}",
                ";".join(labels[c] for c in r.centers),
            ]
            for r in rows
        ],
    )


# -- GeoJSON ------------------------------------------------------------


def emit_geojson(graph: RoadGraph, partition: CenteredPartition, borders=None) -> dict:
    """FeatureCollection of vertex Points, road LineStrings and border segments."""
    if not graph.has_geo():
        raise InputError("GeoJSON output needs geographic coordinates on every vertex")
    centers = set(partition.centers)
    features = []
    for v in graph.vertices:
        lat, lon = v.geo
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [lon, lat]},
            "properties": {
                "layer": "vertex",
                "id": v.id,
                "label": v.label,
                "tu_index": int(partition.assignment[v.id]),
                "is_center": v.id in centers,
            },
        })
    for u, w, t in graph.edges():
        a, b = graph.vertices[u].geo, graph.vertices[w].geo
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [[a[1], a[0]], [b[1], b[0]]]},
            "properties": {"layer": "road", "u": u, "v": w, "minutes": t / TENTHS_PER_MINUTE},
        })
    if borders is not None:
        for pair, a, b in borders.geo_segments():
            features.append({
                "type": "Feature",
                "geometry": {
                    "type": "LineString",
                    "coordinates": [[float(a[1]), float(a[0])], [float(b[1]), float(b[0])]],
                },
                "properties": {"layer": "border", "tus": list(pair), "method": borders.method.value},
            })
    return {"type": "FeatureCollection", "features": features}


def dumps_geojson(doc: dict) -> str:
    return json.dumps(doc, separators=(",", ":")) + "\n"


_MINUTES = {"type": "number", "minimum": 0}
_POSITION = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 3}

SOLUTION_SCHEMA = {
    "type": "object",
    "required": [
        "k", "R_minutes", "min_radius", "mean_radius", "stddev_radius",
        "centers", "tus", "stage_trace", "constraint_ok",
    ],
    "properties": {
        "k": {"type": "integer", "minimum": 1},
        "R_minutes": _MINUTES,
        "min_radius": _MINUTES,
        "mean_radius": _MINUTES,
        "stddev_radius": _MINUTES,
        "centers": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "label"],
                "properties": {"id": {"type": "integer", "minimum": 0}, "label": {"type": "string"}},
            },
        },
        "tus": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["center", "members", "radius"],
                "properties": {
                    "center": {"type": "integer", "minimum": 0},
                    "members": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
                    "radius": _MINUTES,
                },
            },
        },
        "stage_trace": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["stage", "R_minutes"],
                "properties": {"stage": {"type": "string"}, "R_minutes": _MINUTES},
            },
        },
        "constraint_ok": {"type": "boolean"},
    },
}

GEOJSON_SCHEMA = {
    "type": "object",
    "required": ["type", "features"],
    "properties": {
        "type": {"const": "FeatureCollection"},
        "features": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["type", "geometry", "properties"],
                "properties": {
                    "type": {"const": "Feature"},
                    "properties": {"type": ["object", "null"]},
                    "geometry": {
                        "oneOf": [
                            {
                                "type": "object",
                                "required": ["type", "coordinates"],
                                "properties": {"type": {"const": "Point"}, "coordinates": _POSITION},
                            },
                            {
                                "type": "object",
                                "required": ["type", "coordinates"],
                                "properties": {
                                    "type": {"const": "LineString"},
                                    "coordinates": {"type": "array", "items": _POSITION, "minItems": 2},
                                },
                            },
                        ]
                    },
                },
            },
        },
    },
}


# -- synthetic graphs ---------------------------------------------------


def gen_random_graph(
    n: int,
    density: float = 1.64,
    weight_range: tuple[float, float] = (1.0, 37.0),
    rng_seed: int = 0,
    *,
    side_km: float = 300.0,
    center_latlon: tuple[float, float] = (56.9, 24.6),
) -> GraphBundle:
    """Connected random road-like graph with geographic coordinates.

    Points are uniform in a ``side_km`` square around ``center_latlon``. A
    random spanning tree (each point, in random order, joins its nearest
    predecessor) guarantees connectivity; short nearest-neighbor edges are
    then added until there are about ``density * n`` edges. Weights are
    uniform over ``weight_range`` at 0.1 minute resolution.
    """
    if n < 1:
        raise InputError("n must be at least 1")
    lo, hi = (minutes_to_tenths(w) for w in weight_range)
    if lo <= 0 or hi < lo:
        raise InputError(f"invalid weight range {weight_range}")
    rng = np.random.default_rng(rng_seed)
    xy = rng.uniform(-side_km / 2, side_km / 2, size=(n, 2))
    lat0, lon0 = center_latlon
    lat = lat0 + np.degrees(xy[:, 1] / EARTH_RADIUS_KM)
    lon = lon0 + np.degrees(xy[:, 0] / (EARTH_RADIUS_KM * np.cos(np.radians(lat0))))

    pairs = set()
    order = rng.permutation(n)
    for i in range(1, n):
        p = order[i]
        prev = order[:i]
        j = prev[np.argmin(((xy[prev] - xy[p]) ** 2).sum(axis=1))]
        pairs.add((min(p, j), max(p, j)))

    target = max(n - 1, int(round(density * n)))
    if n > 1 and len(pairs) < target:
        kk = min(n, 9)
        dist, nbr = cKDTree(xy).query(xy, k=kk)
        cand = sorted(
            {(float(dist[i, c]), min(i, int(nbr[i, c])), max(i, int(nbr[i, c])))
             for i in range(n) for c in range(1, kk)}
        )
        for _, a, b in cand:
            if len(pairs) >= target:
                break
            pairs.add((a, b))

    pairs = sorted((int(a), int(b)) for a, b in pairs)
    weights = rng.integers(lo, hi + 1, size=len(pairs))
    vertices = [
        Vertex(i, f"v{i}", str(i), (float(lat[i]), float(lon[i]))) for i in range(n)
    ]
    graph = RoadGraph.from_tenths(vertices, [(a, b, int(t)) for (a, b), t in zip(pairs, weights)])
    return GraphBundle(graph, rng_seed=rng_seed)
