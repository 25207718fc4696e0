import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from kct import RoadGraph, all_pairs, gen_random_graph  # noqa: E402

ACCEPTANCE_LINES = []


def path_graph(n, w=1):
    return RoadGraph([f"v{i}" for i in range(n)], [(i, i + 1, w) for i in range(n - 1)])


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def p4():
    return path_graph(4)


@pytest.fixture
def p3w():
    return RoadGraph(["a", "b", "c"], [(0, 1, 1), (1, 2, 5)])


@pytest.fixture
def k3():
    return RoadGraph(["a", "b", "c"], [(0, 1, 1), (1, 2, 2), (2, 0, 3)])


@pytest.fixture
def star():
    return RoadGraph(["s", "l1", "l2", "l3", "l4"], [(0, i, 1) for i in range(1, 5)])


@pytest.fixture
def grid3():
    """3x3 unit grid, vertex ``3*row + col`` at planar (col, row)."""
    edges = []
    for r in range(3):
        for c in range(3):
            v = 3 * r + c
            if c < 2:
                edges.append((v, v + 1, 1))
            if r < 2:
                edges.append((v, v + 3, 1))
    g = RoadGraph(9, edges)
    return g.with_planar([(v % 3, v // 3) for v in range(9)])


def random_small_graph(rng, n, *, integer_weights=None):
    """Connected random graph on ``n`` vertices, assorted shapes.

    Small integer weights are common so that distance ties (and the tie
    rule) get exercised.
    """
    if integer_weights is None:
        integer_weights = rng.random() < 0.6
    kind = rng.integers(3)
    if n == 1:
        return RoadGraph(1, [])
    if kind == 0:
        bundle = gen_random_graph(
            n,
            density=float(rng.uniform(1.0, 2.5)),
            weight_range=(1, 4) if integer_weights else (0.5, 20),
            rng_seed=int(rng.integers(2**31)),
        )
        if not integer_weights:
            return bundle.graph
        edges = [(u, v, int(rng.integers(1, 4))) for u, v, _ in bundle.graph.edges()]
        return RoadGraph(n, edges)
    edges = {}
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[rng.integers(i)])
        edges[(min(a, b), max(a, b))] = None
    p_extra = 0.0 if kind == 1 else float(rng.uniform(0.05, 0.5))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p_extra:
                edges[(a, b)] = None
    if integer_weights:
        ws = rng.integers(1, 4, size=len(edges))
    else:
        ws = np.round(rng.uniform(0.1, 20.0, size=len(edges)), 1)
    return RoadGraph(n, [(a, b, float(w)) for (a, b), w in zip(edges, ws)])


def to_oracle(graph):
    """(n, integer-tenth edges) for the brute-force oracles."""
    return graph.n, [(u, v, t) for u, v, t in graph.edges()]


@pytest.fixture
def random_graphs():
    def make(count, n_max, seed=0, n_min=1):
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            n = int(rng.integers(n_min, n_max + 1))
            g = random_small_graph(rng, n)
            out.append((g, all_pairs(g)))
        return out

    return make


def record_acceptance(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
