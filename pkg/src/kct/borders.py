"""Border sketches from cross-edge midpoints.

For every pair of adjacent units the midpoints of the road edges joining them
are connected by a relative neighborhood graph or a Euclidean minimum
spanning tree.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InputError
from .geo import to_ecef, to_latlon
from .graph import TENTHS_PER_MINUTE, RoadGraph
from .partition import CenteredPartition


class BorderMethod(str, enum.Enum):
    RNG = "rng"
    MST = "mst"


@dataclass(frozen=True)
class CrossEdge:
    u: int
    v: int
    weight_tenths: int
    tu_u: int
    tu_v: int

    @property
    def weight(self) -> float:
        return self.weight_tenths / TENTHS_PER_MINUTE

    @property
    def pair(self) -> tuple[int, int]:
        return (min(self.tu_u, self.tu_v), max(self.tu_u, self.tu_v))


@dataclass(frozen=True, eq=False)
class GeometricGraph:
    points: np.ndarray
    edges: tuple[tuple[int, int], ...]

    @property
    def total_length(self) -> float:
        return float(sum(np.linalg.norm(self.points[i] - self.points[j]) for i, j in self.edges))

    def segments(self) -> list[tuple[tuple[float, float], tuple[float, float]]]:
        return [(tuple(self.points[i]), tuple(self.points[j])) for i, j in self.edges]


def cross_edges(graph: RoadGraph, p: CenteredPartition) -> list[CrossEdge]:
    """Edges whose endpoints lie in different units, sorted by endpoint ids."""
    a = p.assignment
    return [
        CrossEdge(u, v, t, int(a[u]), int(a[v]))
        for u, v, t in graph.edges()
        if a[u] != a[v]
    ]


def midpoints(edges, coords) -> np.ndarray:
    """Planar midpoints of cross-edges; ``coords`` is an (n, 2) array or a graph."""
    if isinstance(coords, RoadGraph):
        coords = coords.planar_array()
    coords = np.asarray(coords, dtype=float)
    out = np.empty((len(edges), 2))
    for i, e in enumerate(edges):
        if max(e.u, e.v) >= len(coords) or not np.isfinite(coords[[e.u, e.v]]).all():
            raise InputError(f"missing planar coordinates for edge ({e.u}, {e.v})")
        out[i] = (coords[e.u] + coords[e.v]) / 2
    return out


def geo_midpoints(edges, latlon) -> np.ndarray:
    """Spherical midpoints (lat, lon) of cross-edges."""
    latlon = np.asarray(latlon, dtype=float)
    xyz = to_ecef(latlon[:, 0], latlon[:, 1], 1.0)
    if not edges:
        return np.empty((0, 2))
    mids = np.array([xyz[e.u] + xyz[e.v] for e in edges])
    return to_latlon(mids)


def coalesce(points) -> tuple[np.ndarray, np.ndarray]:
    """Drop duplicate points, keeping first occurrences in order.

    Returns ``(unique_points, index)`` with ``unique_points[index[i]] == points[i]``.
    """
    first = {}
    index = np.empty(len(points), dtype=np.int64)
    for i, pt in enumerate(np.asarray(points, dtype=float)):
        index[i] = first.setdefault(tuple(pt), len(first))
    uniq = np.array(list(first), dtype=float).reshape(-1, 2)
    return uniq, index


def _pairwise(points):
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1))


def rng(points, *, block: int = 64) -> GeometricGraph:
    """Relative neighborhood graph of the (coalesced) points.

    ``(p, q)`` is an edge unless some third point ``r`` has
    ``max(|pr|, |qr|) < |pq|``.
    """
    pts, _ = coalesce(points)
    n = len(pts)
    d = _pairwise(pts)
    blocked = np.zeros((n, n), dtype=bool)
    for start in range(0, n, block):
        rows = slice(start, min(n, start + block))
        lune = np.maximum(d[rows, None, :], d[None, :, :])
        blocked[rows] = (lune < d[rows, :, None]).any(axis=2)
    iu, ju = np.triu_indices(n, k=1)
    keep = ~blocked[iu, ju]
    return GeometricGraph(pts, tuple(zip(iu[keep].tolist(), ju[keep].tolist())))


def euclidean_mst(points) -> GeometricGraph:
    """Kruskal MST over the complete graph; ties by (i, j) index order."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    d = _pairwise(pts)
    iu, ju = np.triu_indices(n, k=1)
    order = np.lexsort((ju, iu, d[iu, ju]))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for e in order:
        a, b = find(iu[e]), find(ju[e])
        if a != b:
            parent[a] = b
            edges.append((int(iu[e]), int(ju[e])))
            if len(edges) == n - 1:
                break
    return GeometricGraph(pts, tuple(sorted(edges)))


@dataclass(frozen=True, eq=False)
class BorderPiece:
    pair: tuple[int, int]
    cross_edges: tuple[CrossEdge, ...]
    point_index: np.ndarray
    graph: GeometricGraph
    geo_points: Optional[np.ndarray] = None

    @property
    def midpoints(self) -> np.ndarray:
        return self.graph.points


@dataclass(frozen=True, eq=False)
class BorderSketch:
    method: BorderMethod
    pieces: tuple[BorderPiece, ...]

    def segments(self):
        """``(pair, (x1, y1), (x2, y2))`` for every border segment."""
        return [(piece.pair, a, b) for piece in self.pieces for a, b in piece.graph.segments()]

    def geo_segments(self):
        """Like :meth:`segments` but in (lat, lon); needs geographic midpoints."""
        out = []
        for piece in self.pieces:
            if piece.geo_points is None:
                raise InputError("border sketch has no geographic coordinates")
            for i, j in piece.graph.edges:
                out.append((piece.pair, tuple(piece.geo_points[i]), tuple(piece.geo_points[j])))
        return out

    @property
    def n_segments(self) -> int:
        return sum(len(p.graph.edges) for p in self.pieces)


def border_sketch(graph: RoadGraph, p: CenteredPartition, coords=None, method="rng") -> BorderSketch:
    """Per adjacent-unit-pair border graphs over cross-edge midpoints.

    ``coords`` defaults to the graph's planar coordinates. Geographic
    midpoints are included when every vertex has geographic coordinates.
    """
    method = BorderMethod(method)
    if coords is None:
        coords = graph.planar_array()
    coords = np.asarray(coords, dtype=float)
    latlon = np.array([v.geo for v in graph.vertices]) if graph.has_geo() else None
    build = rng if method is BorderMethod.RNG else euclidean_mst

    groups = {}
    for e in cross_edges(graph, p):
        groups.setdefault(e.pair, []).append(e)
    pieces = []
    for pair in sorted(groups):
        edges = groups[pair]
        pts, index = coalesce(midpoints(edges, coords))
        geo = None
        if latlon is not None:
            gm = geo_midpoints(edges, latlon)
            geo = np.empty((len(pts), 2))
            for i in range(len(edges) - 1, -1, -1):
                geo[index[i]] = gm[i]
        pieces.append(BorderPiece(pair, tuple(edges), index, build(pts), geo))
    return BorderSketch(method, tuple(pieces))
