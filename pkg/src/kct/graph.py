"""Edge-weighted road graphs and their shortest-path metric.

Edge weights are travel minutes at 0.1 minute resolution. They are stored as
integer tenths of a minute so that every distance comparison (Voronoi
assignment, argmin/argmax, center sets) is exact. Public functions report
minutes as floats; ``tenths / 10`` preserves order and equality.
"""
from __future__ import annotations

import heapq
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_UP, Decimal, InvalidOperation
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .errors import InputError, MetricError

TENTHS_PER_MINUTE = 10


def minutes_to_tenths(value) -> int:
    """Convert a minute value (str, int or float) to integer tenths, half-up."""
    try:
        d = Decimal(str(value).strip())
    except InvalidOperation:
        raise InputError(f"not a number: {value!r}") from None
    if not d.is_finite():
        raise InputError(f"weight must be finite: {value!r}")
    return int((d * TENTHS_PER_MINUTE).quantize(Decimal(1), rounding=ROUND_HALF_UP))


def tenths_to_minutes(value):
    if isinstance(value, np.ndarray):
        return value / TENTHS_PER_MINUTE
    return int(value) / TENTHS_PER_MINUTE


@dataclass(frozen=True)
class Vertex:
    id: int
    label: str
    key: str = ""
    geo: Optional[tuple[float, float]] = None
    planar: Optional[tuple[float, float]] = None

    def __post_init__(self):
        if self.geo is not None:
            lat, lon = self.geo
            if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
                raise InputError(
                    f"vertex {self.id}: coordinates ({lat}, {lon}) out of range"
                )


class RoadGraph:
    """Immutable undirected graph with positive tenth-of-minute weights.

    Parameters
    ----------
    vertices : int or sequence of Vertex or str
        Either a vertex count, a list of labels, or fully specified vertices.
        Vertex ``i`` must carry id ``i``.
    edges : iterable of (u, v, minutes)
        Parallel edges collapse to the minimum weight.
    require_connected : bool
        Reject disconnected graphs with :class:`MetricError`.
    """

    def __init__(
        self,
        vertices,
        edges: Iterable[tuple[int, int, float]] = (),
        *,
        require_connected: bool = True,
        parent_ids: Optional[Sequence[int]] = None,
    ):
        weights = {}
        for u, v, w in edges:
            weights_key, t = _edge_key(u, v), minutes_to_tenths(w)
            _merge_edge(weights, weights_key, t)
        self._init(vertices, weights, require_connected, parent_ids)

    @classmethod
    def from_tenths(cls, vertices, edges, *, require_connected=True, parent_ids=None):
        """Build from edges whose weights are already integer tenths."""
        weights = {}
        for u, v, t in edges:
            _merge_edge(weights, _edge_key(u, v), int(t))
        g = cls.__new__(cls)
        g._init(vertices, weights, require_connected, parent_ids)
        return g

    def _init(self, vertices, weights, require_connected, parent_ids):
        if isinstance(vertices, (int, np.integer)):
            vertices = [Vertex(i, f"v{i}", str(i)) for i in range(int(vertices))]
        else:
            vs = []
            for i, item in enumerate(vertices):
                if isinstance(item, Vertex):
                    if item.id != i:
                        raise InputError(f"vertex at position {i} carries id {item.id}")
                    vs.append(item if item.key else replace(item, key=str(i)))
                else:
                    vs.append(Vertex(i, str(item), str(i)))
            vertices = vs
        n = len(vertices)
        if n == 0:
            raise InputError("graph needs at least one vertex")
        adjacency = [[] for _ in range(n)]
        for (u, v), t in weights.items():
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) references unknown vertex")
            if t <= 0:
                raise InputError(f"edge ({u}, {v}) has nonpositive weight")
            adjacency[u].append((v, t))
            adjacency[v].append((u, t))
        for nbrs in adjacency:
            nbrs.sort()
        self._vertices = tuple(vertices)
        self._adjacency = tuple(tuple(a) for a in adjacency)
        self._edges = tuple(sorted((u, v, t) for (u, v), t in weights.items()))
        self._csr = None
        self.parent_ids = tuple(parent_ids) if parent_ids is not None else None
        if require_connected:
            unreachable = self.unreachable_from(0)
            if unreachable is not None:
                raise MetricError(
                    f"graph is disconnected: vertex {unreachable} "
                    f"({self._vertices[unreachable].label!r}) unreachable from vertex 0",
                    unreachable=(0, unreachable),
                )

    # -- basic accessors -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self._vertices)

    def __len__(self):
        return len(self._vertices)

    @property
    def vertices(self) -> tuple[Vertex, ...]:
        return self._vertices

    @property
    def adjacency(self):
        """Per-vertex tuples of ``(neighbor, weight_tenths)``."""
        return self._adjacency

    def edges(self) -> tuple[tuple[int, int, int], ...]:
        """Edges as ``(u, v, weight_tenths)`` with ``u < v``, sorted."""
        return self._edges

    @property
    def n_edges(self) -> int:
        return len(self._edges)

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def labels(self) -> list[str]:
        return [v.label for v in self._vertices]

    def check_vertex(self, v) -> int:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not (0 <= v < self.n):
            raise InputError(f"unknown vertex id {v!r}")
        return int(v)

    def has_planar(self) -> bool:
        return all(v.planar is not None for v in self._vertices)

    def has_geo(self) -> bool:
        return all(v.geo is not None for v in self._vertices)

    def planar_array(self) -> np.ndarray:
        if not self.has_planar():
            missing = next(v.id for v in self._vertices if v.planar is None)
            raise InputError(f"vertex {missing} has no planar coordinates")
        return np.array([v.planar for v in self._vertices], dtype=float)

    def with_planar(self, coords) -> "RoadGraph":
        """Copy of this graph with planar coordinates attached (km)."""
        coords = np.asarray(coords, dtype=float)
        if coords.shape != (self.n, 2):
            raise InputError(f"expected {self.n}x2 planar coordinates, got {coords.shape}")
        vs = [replace(v, planar=(float(x), float(y))) for v, (x, y) in zip(self._vertices, coords)]
        return RoadGraph.from_tenths(
            vs, self._edges, require_connected=False, parent_ids=self.parent_ids
        )

    def unreachable_from(self, source: int) -> Optional[int]:
        """Smallest vertex id not reachable from ``source``, or None."""
        seen = np.zeros(self.n, dtype=bool)
        seen[source] = True
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for v, _ in self._adjacency[u]:
                if not seen[v]:
                    seen[v] = True
                    queue.append(v)
        if seen.all():
            return None
        return int(np.flatnonzero(~seen)[0])

    def is_connected(self) -> bool:
        return self.unreachable_from(0) is None

    def csr(self) -> csr_matrix:
        """Symmetric sparse adjacency matrix of tenth weights (cached)."""
        if self._csr is None:
            n = self.n
            if self._edges:
                e = np.array(self._edges, dtype=np.int64)
                rows = np.concatenate([e[:, 0], e[:, 1]])
                cols = np.concatenate([e[:, 1], e[:, 0]])
                data = np.concatenate([e[:, 2], e[:, 2]]).astype(float)
            else:
                rows = cols = np.zeros(0, dtype=np.int64)
                data = np.zeros(0)
            self._csr = csr_matrix((data, (rows, cols)), shape=(n, n))
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, RoadGraph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, self._edges))

    def __repr__(self):
        return f"RoadGraph(n={self.n}, edges={self.n_edges})"


def _edge_key(u, v):
    u, v = int(u), int(v)
    if u == v:
        raise InputError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


def _merge_edge(weights, key, t):
    old = weights.get(key)
    if old is None or t < old:
        weights[key] = t


class DistanceMatrix:
    """Dense all-pairs shortest path matrix, integer tenths of a minute."""

    __slots__ = ("tenths",)

    def __init__(self, tenths):
        arr = np.array(tenths, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InputError(f"distance matrix must be square, got shape {arr.shape}")
        arr.setflags(write=False)
        self.tenths = arr

    @property
    def n(self) -> int:
        return self.tenths.shape[0]

    def __len__(self):
        return self.n

    @property
    def minutes(self) -> np.ndarray:
        return self.tenths / TENTHS_PER_MINUTE

    def __getitem__(self, uv) -> float:
        u, v = uv
        return int(self.tenths[u, v]) / TENTHS_PER_MINUTE

    def __eq__(self, other):
        if not isinstance(other, DistanceMatrix):
            return NotImplemented
        return np.array_equal(self.tenths, other.tenths)

    def __repr__(self):
        return f"DistanceMatrix(n={self.n})"


# -- shortest paths -----------------------------------------------------


def sssp_tenths(graph: RoadGraph, source: int) -> np.ndarray:
    """Dijkstra from ``source``; unreachable vertices get -1."""
    source = graph.check_vertex(source)
    dist = np.full(graph.n, -1, dtype=np.int64)
    heap = [(0, source)]
    best = {source: 0}
    adjacency = graph.adjacency
    while heap:
        d, u = heapq.heappop(heap)
        if dist[u] >= 0:
            continue
        dist[u] = d
        for v, w in adjacency[u]:
            nd = d + w
            if dist[v] < 0 and nd < best.get(v, math.inf):
                best[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def sssp(graph: RoadGraph, source: int) -> np.ndarray:
    """Shortest path minutes from ``source`` to every vertex (index = id)."""
    dist = sssp_tenths(graph, source)
    if (dist < 0).any():
        v = int(np.flatnonzero(dist < 0)[0])
        raise MetricError(f"vertex {v} unreachable from {source}", unreachable=(int(source), v))
    return dist / TENTHS_PER_MINUTE


def _dijkstra_rows(csr, rows):
    return dijkstra(csr, directed=False, indices=rows)


def all_pairs(graph: RoadGraph, threads: Optional[int] = None) -> DistanceMatrix:
    """All-pairs shortest paths. Raises :class:`MetricError` if disconnected.

    Rows may be computed on several threads; weights are integral so the
    result does not depend on the split.
    """
    csr = graph.csr()
    n = graph.n
    threads = max(1, int(threads or 1))
    if threads == 1 or n < 2 * threads:
        d = _dijkstra_rows(csr, np.arange(n))
    else:
        chunks = np.array_split(np.arange(n), threads)
        with ThreadPoolExecutor(max_workers=threads) as ex:
            d = np.vstack(list(ex.map(lambda rows: _dijkstra_rows(csr, rows), chunks)))
    d = np.atleast_2d(d)
    if not np.isfinite(d).all():
        u, v = (int(x) for x in np.argwhere(~np.isfinite(d))[0])
        raise MetricError(f"no path between vertices {u} and {v}", unreachable=(u, v))
    return DistanceMatrix(np.rint(d).astype(np.int64))


def induced_distance_tenths(graph: RoadGraph, members) -> np.ndarray:
    """Distances inside ``graph[members]`` as float tenths, ``inf`` if unreachable.

    Row/column ``i`` corresponds to ``sorted(members)[i]``.
    """
    idx = np.array(sorted(int(m) for m in members), dtype=np.int64)
    if idx.size == 1:
        return np.zeros((1, 1))
    sub = graph.csr()[idx][:, idx]
    return np.atleast_2d(dijkstra(sub, directed=False))


# -- metric invariants --------------------------------------------------


def eccentricities_tenths(dm: DistanceMatrix) -> np.ndarray:
    return dm.tenths.max(axis=1)


def eccentricity(dm: DistanceMatrix, v: int) -> float:
    if not (0 <= v < dm.n):
        raise InputError(f"unknown vertex id {v!r}")
    return int(dm.tenths[v].max()) / TENTHS_PER_MINUTE


@dataclass(frozen=True)
class MetricSummary:
    radius: float
    diameter: float
    center: tuple[int, ...]
    periphery: tuple[int, ...]
    median: tuple[int, ...]


def metric_summary(dm: DistanceMatrix) -> MetricSummary:
    ecc = eccentricities_tenths(dm)
    sums = dm.tenths.sum(axis=1)
    r, d = ecc.min(), ecc.max()
    return MetricSummary(
        radius=int(r) / TENTHS_PER_MINUTE,
        diameter=int(d) / TENTHS_PER_MINUTE,
        center=tuple(int(i) for i in np.flatnonzero(ecc == r)),
        periphery=tuple(int(i) for i in np.flatnonzero(ecc == d)),
        median=tuple(int(i) for i in np.flatnonzero(sums == sums.min())),
    )


@dataclass(frozen=True)
class StatsReport:
    n_vertices: int
    n_edges: int
    edge_weight_min: Optional[float]
    edge_weight_max: Optional[float]
    edge_weight_mean: Optional[float]
    edge_weight_std: Optional[float]
    degree_histogram: tuple[int, ...]
    degree_mean: float
    degree_std: float
    path_weight_mean: Optional[float]
    path_weight_std: Optional[float]
    path_weight_mode: Optional[int]
    summary: MetricSummary = field(repr=False, default=None)

    def to_dict(self) -> dict:
        out = {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "summary"}
        out["degree_histogram"] = list(self.degree_histogram)
        if self.summary is not None:
            s = self.summary
            out.update(
                radius=s.radius,
                diameter=s.diameter,
                center=list(s.center),
                periphery=list(s.periphery),
                median=list(s.median),
            )
        return out


def graph_stats(graph: RoadGraph, dm: DistanceMatrix) -> StatsReport:
    """Edge-weight, degree and shortest-path statistics.

    Standard deviations are population deviations. The path-weight mode is
    taken over whole minutes (half-up rounding), smallest value on ties.
    """
    w = np.array([t for _, _, t in graph.edges()], dtype=float) / TENTHS_PER_MINUTE
    degrees = np.array([graph.degree(v) for v in range(graph.n)])
    hist = np.bincount(degrees)
    iu = np.triu_indices(graph.n, k=1)
    paths = dm.tenths[iu]
    if paths.size:
        whole = (paths + TENTHS_PER_MINUTE // 2) // TENTHS_PER_MINUTE
        counts = np.bincount(whole)
        mode = int(np.argmax(counts))
        pmean = float(paths.mean()) / TENTHS_PER_MINUTE
        pstd = float(paths.std()) / TENTHS_PER_MINUTE
    else:
        mode = pmean = pstd = None
    return StatsReport(
        n_vertices=graph.n,
        n_edges=graph.n_edges,
        edge_weight_min=float(w.min()) if w.size else None,
        edge_weight_max=float(w.max()) if w.size else None,
        edge_weight_mean=float(w.mean()) if w.size else None,
        edge_weight_std=float(w.std()) if w.size else None,
        degree_histogram=tuple(int(c) for c in hist),
        degree_mean=float(degrees.mean()),
        degree_std=float(degrees.std()),
        path_weight_mean=pmean,
        path_weight_std=pstd,
        path_weight_mode=mode,
        summary=metric_summary(dm),
    )


# -- subgraphs and neighborhoods ---------------------------------------


def induced_subgraph(graph: RoadGraph, vs) -> RoadGraph:
    """Subgraph on ``vs``, re-indexed densely in ascending original-id order.

    ``result.parent_ids[i]`` is the original id of new vertex ``i``. The
    result may be disconnected.
    """
    ids = sorted({graph.check_vertex(v) for v in vs})
    if not ids:
        raise InputError("induced subgraph needs a nonempty vertex set")
    new_id = {old: i for i, old in enumerate(ids)}
    vertices = [replace(graph.vertices[old], id=i) for i, old in enumerate(ids)]
    edges = [
        (new_id[u], new_id[v], t)
        for u, v, t in graph.edges()
        if u in new_id and v in new_id
    ]
    return RoadGraph.from_tenths(vertices, edges, require_connected=False, parent_ids=ids)


def n_hop_neighborhood(graph: RoadGraph, v: int, n: int) -> frozenset[int]:
    """Vertices within ``n`` edges of ``v`` (weights ignored), ``v`` included."""
    v = graph.check_vertex(v)
    if n < 0:
        raise InputError(f"hop count must be nonnegative, got {n}")
    seen = {v}
    frontier = [v]
    for _ in range(n):
        nxt = []
        for u in frontier:
            for w, _ in graph.adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return frozenset(seen)
