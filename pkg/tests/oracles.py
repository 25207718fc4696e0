"""Brute-force reference implementations.

Nothing here imports kct. Graphs are ``(n, edges)`` with integer weights.
Graph oracles are plain Python; the geometry ones use numpy only for
summing enumerated trees.
"""
import itertools
import math
from functools import lru_cache

import numpy as np

INF = math.inf


def simple_path_distances(n, edges):
    """Minimum weight over every simple path, for every ordered pair."""
    adj = {v: [] for v in range(n)}
    for u, v, w in edges:
        adj[u].append((v, w))
        adj[v].append((u, w))
    dist = [[INF] * n for _ in range(n)]

    def walk(src, u, total, seen):
        if total < dist[src][u]:
            dist[src][u] = total
        for v, w in adj[u]:
            if v not in seen:
                seen.add(v)
                walk(src, v, total + w, seen)
                seen.remove(v)

    for s in range(n):
        walk(s, s, 0, {s})
    return dist


def floyd_warshall(n, edges):
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v, w in edges:
        if w < d[u][v]:
            d[u][v] = d[v][u] = w
    for m in range(n):
        for i in range(n):
            dim = d[i][m]
            if dim == INF:
                continue
            for j in range(n):
                if dim + d[m][j] < d[i][j]:
                    d[i][j] = dim + d[m][j]
    return d


def induced(n, edges, members):
    ids = sorted(members)
    pos = {v: i for i, v in enumerate(ids)}
    sub = [(pos[u], pos[v], w) for u, v, w in edges if u in pos and v in pos]
    return ids, floyd_warshall(len(ids), sub)


def graph_center(d):
    ecc = [max(row) for row in d]
    r = min(ecc)
    return [i for i, e in enumerate(ecc) if e == r]


def voronoi_cells(d, centers):
    """Cells keyed by center; ties go to the smallest center id."""
    centers = sorted(centers)
    cells = {c: set() for c in centers}
    for v in range(len(d)):
        best = min(centers, key=lambda c: (d[v][c], c))
        cells[best].add(v)
    return cells


def voronoi_radius(d, centers):
    return max(min(d[v][c] for c in centers) for v in range(len(d)))


def cell_radii(d, cells):
    return {c: max(d[c][v] for v in members) for c, members in cells.items()}


def center_constraint(n, edges, cells):
    for c, members in cells.items():
        ids, sub = induced(n, edges, members)
        if any(INF in row for row in sub):
            return False
        if ids.index(c) not in graph_center(sub):
            return False
    return True


def exact(n, edges, d, k, constrained):
    best = None
    for combo in itertools.combinations(range(n), k):
        r = voronoi_radius(d, combo)
        if best is not None and r >= best[1]:
            continue
        if constrained and not center_constraint(n, edges, voronoi_cells(d, combo)):
            continue
        best = (combo, r)
    return best


def farthest_first(d, k, start):
    chosen = [start]
    while len(chosen) < k:
        score = [min(d[v][c] for c in chosen) for v in range(len(d))]
        top = max(score)
        chosen.append(score.index(top))
    return tuple(sorted(chosen))


def hop_ball(n, edges, v, hops):
    adj = {x: set() for x in range(n)}
    for a, b, _ in edges:
        adj[a].add(b)
        adj[b].add(a)
    ball = {v}
    for _ in range(hops):
        ball |= {y for x in ball for y in adj[x]}
    return ball


# -- geometry -----------------------------------------------------------


def _dist(p, q):
    return math.hypot(p[0] - q[0], p[1] - q[1])


def rng_edges(points):
    n = len(points)
    out = set()
    for i in range(n):
        for j in range(i + 1, n):
            dij = _dist(points[i], points[j])
            if not any(
                max(_dist(points[i], points[r]), _dist(points[j], points[r])) < dij
                for r in range(n)
                if r not in (i, j)
            ):
                out.add((i, j))
    return out


@lru_cache(maxsize=None)
def labeled_trees(n):
    """Every labeled tree on ``n`` vertices, decoded from Pruefer sequences."""
    if n == 1:
        return [()]
    if n == 2:
        return [((0, 1),)]
    trees = []
    for seq in itertools.product(range(n), repeat=n - 2):
        degree = [1] * n
        for x in seq:
            degree[x] += 1
        edges = []
        for x in seq:
            leaf = min(i for i in range(n) if degree[i] == 1)
            edges.append((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        u, v = [i for i in range(n) if degree[i] == 1]
        edges.append((u, v))
        trees.append(tuple(sorted(edges)))
    return trees


@lru_cache(maxsize=None)
def _tree_array(n):
    return np.array(labeled_trees(n), dtype=np.int64).reshape(-1, max(n - 1, 0), 2)


def mst_by_enumeration(points):
    """Minimum total length over every spanning tree: (length, edges)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if n == 1:
        return 0.0, set()
    trees = _tree_array(n)
    d = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    lengths = d[trees[..., 0], trees[..., 1]].sum(axis=1)
    best = int(np.argmin(lengths))
    return float(lengths[best]), {tuple(map(int, e)) for e in trees[best]}
