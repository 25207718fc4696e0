"""Constrained vertex k-center pipeline.

Step 1 seeds ``k`` centers by farthest-first traversal and shifts them to the
graph centers of their Voronoi cells until stable. Step 2 runs first-
improvement local search over hop neighborhoods of each center, then shifts
again. The optional Step 3 raises the smallest cell radius without letting the
largest one grow. :func:`exact_solver` enumerates every k-subset and serves as
the reference optimum on small graphs.
"""
from __future__ import annotations

import enum
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetExceededError, InfeasibleError, InputError, KctError
from .graph import TENTHS_PER_MINUTE, DistanceMatrix, RoadGraph, n_hop_neighborhood
from .partition import (
    CenteredPartition,
    FixpointResult,
    check_center_constraint,
    shift_recompute_fixpoint,
    voronoi_partition,
    voronoi_radii_tenths,
)

logger = logging.getLogger(__name__)

MAX_NEIGHBORHOOD = 30
DEFAULT_BUDGET = 10**8


class Objective(enum.Enum):
    MIN_MAX_RADIUS = "min_max_radius"
    BALANCE = "balance"


@dataclass(frozen=True)
class SolverConfig:
    k: int
    seed_vertex: Optional[int] = None
    neighborhood_n: int = 5
    balance: bool = False
    max_fixpoint_iters: int = 100
    rng_seed: int = 0

    def validate(self, n_vertices: int) -> None:
        if not (1 <= self.k <= n_vertices):
            raise InputError(f"k must lie in [1, {n_vertices}], got {self.k}")
        if not (1 <= self.neighborhood_n <= MAX_NEIGHBORHOOD):
            raise InputError(
                f"neighborhood size must lie in [1, {MAX_NEIGHBORHOOD}], got {self.neighborhood_n}"
            )
        if self.seed_vertex is not None and not (0 <= self.seed_vertex < n_vertices):
            raise InputError(f"unknown seed vertex {self.seed_vertex}")
        if self.max_fixpoint_iters < 1:
            raise InputError("max_fixpoint_iters must be positive")


@dataclass(frozen=True, eq=False)
class Solution:
    centers: tuple[int, ...]
    partition: CenteredPartition
    stage_trace: tuple[tuple[str, float], ...]
    constraint_ok: bool
    converged: bool = True
    start_vertex: Optional[int] = None
    rng_seed: Optional[int] = None

    @property
    def k(self) -> int:
        return len(self.centers)

    @property
    def R(self) -> float:
        return self.partition.partition_radius

    @property
    def min_radius(self) -> float:
        return self.partition.min_radius

    @property
    def mean_radius(self) -> float:
        return self.partition.mean_radius

    @property
    def stddev_radius(self) -> float:
        return self.partition.stddev_radius


# -- Step 1 -------------------------------------------------------------


def greedy_farthest_first(dm: DistanceMatrix, k: int, start: int) -> tuple[int, ...]:
    """Farthest-first traversal from ``start``; argmax ties go to the smallest id."""
    n = dm.n
    if not (1 <= k <= n):
        raise InputError(f"k must lie in [1, {n}], got {k}")
    if not (0 <= start < n):
        raise InputError(f"unknown start vertex {start}")
    chosen = [int(start)]
    nearest = dm.tenths[start].copy()
    while len(chosen) < k:
        v = int(np.argmax(nearest))
        chosen.append(v)
        np.minimum(nearest, dm.tenths[v], out=nearest)
    return tuple(sorted(chosen))


# -- Step 2 / Step 3 ----------------------------------------------------


@dataclass(frozen=True)
class SearchMove:
    position: int
    old: int
    new: int
    R: float
    min_radius: float


@dataclass(frozen=True)
class LocalSearchResult:
    centers: tuple[int, ...]
    moves: tuple[SearchMove, ...]
    passes: int
    searched_centers: tuple[int, ...]
    fixpoint: FixpointResult


def _evaluate(dm, centers):
    radii = voronoi_radii_tenths(dm, np.array(sorted(centers), dtype=np.int64))
    return int(radii.max()), int(radii.min())


def _coordinate_search(graph, dm, centers, n, accept):
    """First-improvement passes; ``accept(new, current)`` compares (R, min) pairs."""
    current = list(centers)
    value = _evaluate(dm, current)
    moves = []
    hoods = {}
    passes = 0
    while True:
        passes += 1
        improved = False
        for pos in range(len(current)):
            c = current[pos]
            if c not in hoods:
                hoods[c] = sorted(n_hop_neighborhood(graph, c, n))
            taken = set(current)
            for cand in hoods[c]:
                if cand in taken:
                    continue
                trial = current.copy()
                trial[pos] = cand
                new_value = _evaluate(dm, trial)
                if accept(new_value, value):
                    current, value = trial, new_value
                    moves.append(
                        SearchMove(pos, c, cand, value[0] / TENTHS_PER_MINUTE,
                                   value[1] / TENTHS_PER_MINUTE)
                    )
                    improved = True
                    break
        if not improved:
            return tuple(sorted(current)), tuple(moves), passes


def local_search(
    graph: RoadGraph,
    dm: DistanceMatrix,
    centers,
    n: int,
    objective: Objective = Objective.MIN_MAX_RADIUS,
    *,
    max_fixpoint_iters: int = 100,
) -> LocalSearchResult:
    """Exhaustive first-improvement search in ``n``-hop neighborhoods.

    Each pass visits every center and tries all vertices within ``n`` hops of
    it as a replacement, other centers fixed. Under ``MIN_MAX_RADIUS`` a move
    is taken when it strictly lowers the partition radius. Under ``BALANCE``
    a move is taken when the partition radius does not exceed its starting
    value and the smallest cell radius strictly grows. Passes repeat until
    one changes nothing; the result is then shifted to a fixpoint.
    """
    if n < 1:
        raise InputError(f"neighborhood size must be at least 1, got {n}")
    start = tuple(sorted(int(c) for c in centers))
    if objective is Objective.MIN_MAX_RADIUS:
        def accept(new, cur):
            return new[0] < cur[0]
    else:
        bound = _evaluate(dm, start)[0]

        def accept(new, cur):
            return new[0] <= bound and new[1] > cur[1]

    searched, moves, passes = _coordinate_search(graph, dm, start, n, accept)
    fp = shift_recompute_fixpoint(graph, dm, searched, max_iters=max_fixpoint_iters)
    return LocalSearchResult(fp.centers, moves, passes, searched, fp)


@dataclass(frozen=True)
class BalanceResult:
    centers: tuple[int, ...]
    search: LocalSearchResult
    rolled_back: bool


def balance_min_radius(
    graph: RoadGraph,
    dm: DistanceMatrix,
    centers,
    n: int,
    *,
    max_fixpoint_iters: int = 100,
) -> BalanceResult:
    """Raise the smallest cell radius while holding the largest at or below its value.

    The search result is kept only if, after shifting, it still satisfies the
    center constraint, its radius stays within the starting radius and its
    smallest radius is no worse than before. Otherwise the input is returned.
    """
    start = tuple(sorted(int(c) for c in centers))
    r0, min0 = _evaluate(dm, start)
    res = local_search(
        graph, dm, start, n, Objective.BALANCE, max_fixpoint_iters=max_fixpoint_iters
    )
    r1, min1 = _evaluate(dm, res.centers)
    ok = (
        res.fixpoint.converged
        and r1 <= r0
        and min1 >= min0
        and check_center_constraint(graph, voronoi_partition(dm, res.centers)).ok
    )
    if not ok:
        return BalanceResult(start, res, True)
    return BalanceResult(res.centers, res, False)


# -- pipeline -----------------------------------------------------------


def solve(graph: RoadGraph, dm: DistanceMatrix, config: SolverConfig) -> Solution:
    """Run Step 1, Step 2 and (if ``config.balance``) Step 3."""
    config.validate(graph.n)
    if config.seed_vertex is not None:
        start = int(config.seed_vertex)
    else:
        start = int(np.random.default_rng(config.rng_seed).integers(graph.n))

    trace = []
    seeds = greedy_farthest_first(dm, config.k, start)
    fp = shift_recompute_fixpoint(graph, dm, seeds, max_iters=config.max_fixpoint_iters)
    trace.append(("greedy", fp.trace[0]))
    trace.extend(("shift", r) for r in fp.trace[1:])
    converged = fp.converged

    ls = local_search(
        graph, dm, fp.centers, config.neighborhood_n,
        max_fixpoint_iters=config.max_fixpoint_iters,
    )
    trace.extend(("local_search", m.R) for m in ls.moves)
    trace.extend(("shift", r) for r in ls.fixpoint.trace[1:])
    converged = converged and ls.fixpoint.converged
    centers = ls.centers

    if config.balance:
        bal = balance_min_radius(
            graph, dm, centers, config.neighborhood_n,
            max_fixpoint_iters=config.max_fixpoint_iters,
        )
        centers = bal.centers
        trace.append(("balance", _evaluate(dm, centers)[0] / TENTHS_PER_MINUTE))

    partition = voronoi_partition(dm, centers)
    ok = check_center_constraint(graph, partition).ok
    if not ok:
        logger.warning("k=%d: solution violates the center constraint", config.k)
    return Solution(
        centers=tuple(centers),
        partition=partition,
        stage_trace=tuple(trace),
        constraint_ok=ok,
        converged=converged,
        start_vertex=start,
        rng_seed=config.rng_seed if config.seed_vertex is None else None,
    )


# -- exhaustive reference -----------------------------------------------


def _chunks(iterable, size):
    it = iter(iterable)
    while True:
        block = list(itertools.islice(it, size))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def exact_solver(
    graph: RoadGraph,
    dm: DistanceMatrix,
    k: int,
    constrained: bool = True,
    *,
    budget: int = DEFAULT_BUDGET,
    chunk: int = 4096,
) -> tuple[tuple[int, ...], float]:
    """Optimal k-subset by exhaustive enumeration.

    Returns the lexicographically smallest optimal center set and its
    partition radius. With ``constrained`` only sets whose Voronoi partition
    satisfies the center constraint are admissible.

    Raises
    ------
    BudgetExceededError
        If ``C(|V|, k)`` exceeds ``budget``.
    InfeasibleError
        If ``constrained`` and no k-subset qualifies.
    """
    n = dm.n
    if not (1 <= k <= n):
        raise InputError(f"k must lie in [1, {n}], got {k}")
    count = math.comb(n, k)
    if count > budget:
        raise BudgetExceededError(count, budget)
    best, best_r = None, None
    for block in _chunks(itertools.combinations(range(n), k), chunk):
        r = dm.tenths[block].min(axis=1).max(axis=1)
        if not constrained:
            i = int(np.argmin(r))
            if best_r is None or r[i] < best_r:
                best, best_r = tuple(int(c) for c in block[i]), int(r[i])
            continue
        limit = np.inf if best_r is None else best_r
        for i in np.lexsort((np.arange(len(r)), r)):
            if r[i] >= limit:
                break
            p = voronoi_partition(dm, block[i])
            if check_center_constraint(graph, p).ok:
                best, best_r = tuple(int(c) for c in block[i]), int(r[i])
                break
    if best is None:
        raise InfeasibleError(f"no {k}-subset satisfies the center constraint")
    return best, best_r / TENTHS_PER_MINUTE


# -- sweep --------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    k: int
    R: float
    min_radius: float
    mean_radius: float
    stddev_radius: float
    centers: tuple[int, ...]
    solution: Solution = field(repr=False, compare=False)


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    errors: tuple[tuple[int, str], ...]


def sweep(
    graph: RoadGraph,
    dm: DistanceMatrix,
    k_range: Iterable[int],
    config: Optional[SolverConfig] = None,
    *,
    threads: Optional[int] = None,
) -> SweepResult:
    """Solve for every k in ``k_range``; failures are collected, not raised."""
    base = config or SolverConfig(k=1)
    ks = list(k_range)
    if not ks:
        raise InputError("empty k range")

    def run(k):
        try:
            cfg = SolverConfig(
                k=k,
                seed_vertex=base.seed_vertex,
                neighborhood_n=base.neighborhood_n,
                balance=base.balance,
                max_fixpoint_iters=base.max_fixpoint_iters,
                rng_seed=base.rng_seed,
            )
            return solve(graph, dm, cfg), None
        except KctError as exc:
            return None, str(exc)

    workers = max(1, int(threads or 1))
    if workers == 1:
        results = [run(k) for k in ks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(run, ks))

    rows, errors = [], []
    for k, (sol, err) in zip(ks, results):
        if sol is None:
            logger.error("k=%d failed: %s", k, err)
            errors.append((k, err))
            continue
        rows.append(SweepRow(k, sol.R, sol.min_radius, sol.mean_radius,
                             sol.stddev_radius, sol.centers, sol))
    for prev, row in zip(rows, rows[1:]):
        if row.k > prev.k and row.R > prev.R:
            logger.warning("R grows from k=%d (%.1f) to k=%d (%.1f)", prev.k, prev.R, row.k, row.R)
    return SweepResult(tuple(rows), tuple(errors))
