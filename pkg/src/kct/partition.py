"""Centered partitions, graph Voronoi cells and center shifting.

A vertex goes to its nearest center; distance ties go to the center with the
smallest id. With that rule every Voronoi cell induces a connected subgraph.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InputError
from .graph import TENTHS_PER_MINUTE, DistanceMatrix, RoadGraph, induced_distance_tenths


@dataclass(frozen=True)
class CenteredTU:
    members: frozenset
    center: int

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(m) for m in self.members))
        if not self.members:
            raise InputError("territorial unit must have at least one member")
        if self.center not in self.members:
            raise InputError(f"center {self.center} is not a member of its unit")

    def sorted_members(self) -> list[int]:
        return sorted(self.members)


@dataclass(frozen=True, eq=False)
class CenteredPartition:
    """Disjoint cover of the vertex set by centered units.

    ``radii_tenths[i]`` is the largest global distance from ``tus[i].center``
    to a member of ``tus[i]``. ``assignment[v]`` is the index of the unit
    holding vertex ``v``.
    """

    tus: tuple
    radii_tenths: tuple
    assignment: np.ndarray

    @classmethod
    def from_tus(cls, dm: DistanceMatrix, tus: Iterable[CenteredTU]) -> "CenteredPartition":
        tus = tuple(tus)
        if not tus:
            raise InputError("partition needs at least one unit")
        assignment = np.full(dm.n, -1, dtype=np.int64)
        for i, tu in enumerate(tus):
            idx = np.fromiter(tu.members, dtype=np.int64)
            if idx.min() < 0 or idx.max() >= dm.n:
                raise InputError(f"unit {i} references a vertex outside the graph")
            if (assignment[idx] >= 0).any():
                raise InputError(f"unit {i} overlaps an earlier unit")
            assignment[idx] = i
        if (assignment < 0).any():
            raise InputError(f"vertex {int(np.flatnonzero(assignment < 0)[0])} is not covered")
        centers = [tu.center for tu in tus]
        if len(set(centers)) != len(centers):
            raise InputError("unit centers must be distinct")
        radii = tuple(tu_radius_tenths(dm, tu) for tu in tus)
        assignment.setflags(write=False)
        return cls(tus, radii, assignment)

    @classmethod
    def from_assignment(cls, dm: DistanceMatrix, centers, assignment) -> "CenteredPartition":
        """Units from a block index per vertex; block ``i`` is centered at ``centers[i]``."""
        assignment = np.asarray(assignment, dtype=np.int64)
        if assignment.shape != (dm.n,):
            raise InputError("assignment must give one block index per vertex")
        centers = [int(c) for c in centers]
        if assignment.min() < 0 or assignment.max() >= len(centers):
            raise InputError("assignment refers to an unknown block")
        order = np.argsort(assignment, kind="stable")
        bounds = np.searchsorted(assignment[order], np.arange(len(centers) + 1))
        tus = [
            CenteredTU(frozenset(order[bounds[i]:bounds[i + 1]].tolist()), c)
            for i, c in enumerate(centers)
        ]
        return cls.from_tus(dm, tus)

    @property
    def k(self) -> int:
        return len(self.tus)

    @property
    def centers(self) -> tuple[int, ...]:
        return tuple(tu.center for tu in self.tus)

    @property
    def radii(self) -> tuple[float, ...]:
        return tuple(r / TENTHS_PER_MINUTE for r in self.radii_tenths)

    @property
    def partition_radius_tenths(self) -> int:
        return max(self.radii_tenths)

    @property
    def partition_radius(self) -> float:
        return self.partition_radius_tenths / TENTHS_PER_MINUTE

    @property
    def min_radius(self) -> float:
        return min(self.radii_tenths) / TENTHS_PER_MINUTE

    @property
    def mean_radius(self) -> float:
        return float(np.mean(self.radii_tenths)) / TENTHS_PER_MINUTE

    @property
    def stddev_radius(self) -> float:
        return float(np.std(self.radii_tenths)) / TENTHS_PER_MINUTE

    def __eq__(self, other):
        if not isinstance(other, CenteredPartition):
            return NotImplemented
        return self.tus == other.tus and self.radii_tenths == other.radii_tenths

    def __repr__(self):
        return f"CenteredPartition(centers={list(self.centers)}, radius={self.partition_radius})"


def _normalize_centers(centers, n: int) -> np.ndarray:
    cs = [int(c) for c in centers]
    if not cs:
        raise InputError("center set must be nonempty")
    if len(set(cs)) != len(cs):
        raise InputError("centers must be distinct")
    for c in cs:
        if not (0 <= c < n):
            raise InputError(f"unknown center id {c}")
    return np.array(sorted(cs), dtype=np.int64)


def voronoi_assignment(dm: DistanceMatrix, centers: np.ndarray) -> np.ndarray:
    """Index into ``centers`` (must be sorted ascending) of each vertex's cell."""
    # argmin keeps the first minimum, so ascending centers give smallest-id ties
    return np.argmin(dm.tenths[centers], axis=0)


def voronoi_radii_tenths(dm: DistanceMatrix, centers: np.ndarray) -> np.ndarray:
    """Per-cell radii of the Voronoi partition of sorted ``centers``."""
    rows = dm.tenths[centers]
    cell = np.argmin(rows, axis=0)
    nearest = rows[cell, np.arange(rows.shape[1])]
    radii = np.zeros(len(centers), dtype=np.int64)
    np.maximum.at(radii, cell, nearest)
    return radii


def voronoi_radius_tenths(dm: DistanceMatrix, centers) -> int:
    """Partition radius of the Voronoi partition: max over v of d(v, S)."""
    return int(dm.tenths[np.asarray(centers, dtype=np.int64)].min(axis=0).max())


def voronoi_partition(dm: DistanceMatrix, centers) -> CenteredPartition:
    """Centered Voronoi partition, units ordered by ascending center id."""
    cs = _normalize_centers(centers, dm.n)
    return CenteredPartition.from_assignment(dm, cs, voronoi_assignment(dm, cs))


def tu_radius_tenths(dm: DistanceMatrix, tu: CenteredTU) -> int:
    idx = np.fromiter(tu.members, dtype=np.int64)
    return int(dm.tenths[tu.center, idx].max())


def tu_radius(dm: DistanceMatrix, tu: CenteredTU) -> float:
    return tu_radius_tenths(dm, tu) / TENTHS_PER_MINUTE


def _induced_center(graph: RoadGraph, members, current: int) -> tuple[Optional[list[int]], bool]:
    """Graph center of ``graph[members]`` restricted to the component of ``current``.

    Returns ``(center ids, connected)`` with ids in the original numbering.
    """
    ids = sorted(members)
    d = induced_distance_tenths(graph, ids)
    pos = ids.index(current)
    comp = np.flatnonzero(np.isfinite(d[pos]))
    connected = comp.size == len(ids)
    sub = d[np.ix_(comp, comp)]
    ecc = sub.max(axis=1)
    z = comp[ecc == ecc.min()]
    return [ids[i] for i in z], connected


@dataclass(frozen=True)
class ConstraintReport:
    per_tu: tuple[bool, ...]
    ok: bool

    def __bool__(self):
        return self.ok


def check_center_constraint(graph: RoadGraph, p: CenteredPartition) -> ConstraintReport:
    """Does each unit's center lie in the graph center of its induced subgraph?

    A unit whose induced subgraph is disconnected fails.
    """
    flags = []
    for tu in p.tus:
        z, connected = _induced_center(graph, tu.members, tu.center)
        flags.append(bool(connected and tu.center in z))
    return ConstraintReport(tuple(flags), all(flags))


def shift_centers(graph: RoadGraph, dm: DistanceMatrix, centers) -> tuple[int, ...]:
    """Move each center to the graph center of its Voronoi cell.

    A center already in its cell's center set stays; otherwise it becomes the
    smallest id in that set. Cells are not recomputed.
    """
    p = voronoi_partition(dm, centers)
    shifted = []
    for tu in p.tus:
        z, _ = _induced_center(graph, tu.members, tu.center)
        shifted.append(tu.center if tu.center in z else min(z))
    return tuple(sorted(shifted))


@dataclass(frozen=True)
class FixpointResult:
    centers: tuple[int, ...]
    trace: tuple[float, ...]
    converged: bool
    iterations: int

    @property
    def radius(self) -> float:
        return self.trace[-1] if self.converged else min(self.trace)


def shift_recompute_fixpoint(
    graph: RoadGraph, dm: DistanceMatrix, centers, max_iters: int = 100
) -> FixpointResult:
    """Alternate :func:`shift_centers` and Voronoi recomputation to a fixpoint.

    ``trace[0]`` is the radius of the input set; each later entry is the
    radius after one recomputation. Stops when a center set repeats. If
    ``max_iters`` is exhausted the best set seen is returned with
    ``converged=False``.
    """
    current = tuple(int(c) for c in _normalize_centers(centers, dm.n))
    seen = {current}
    r = voronoi_radius_tenths(dm, current)
    trace = [r / TENTHS_PER_MINUTE]
    best, best_r = current, r
    for it in range(1, max_iters + 1):
        nxt = shift_centers(graph, dm, current)
        if nxt == current:
            return FixpointResult(current, tuple(trace), True, it - 1)
        r = voronoi_radius_tenths(dm, nxt)
        trace.append(r / TENTHS_PER_MINUTE)
        if r < best_r:
            best, best_r = nxt, r
        if nxt in seen:
            # cycle of length > 1: no member is a fixpoint
            return FixpointResult(best, tuple(trace), False, it)
        seen.add(nxt)
        current = nxt
    return FixpointResult(best, tuple(trace), False, max_iters)
