import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles as orc
from conftest import random_small_graph, to_oracle
from kct import (
    InputError,
    MetricError,
    RoadGraph,
    all_pairs,
    eccentricity,
    graph_stats,
    induced_subgraph,
    metric_summary,
    n_hop_neighborhood,
    sssp,
)
from kct.graph import minutes_to_tenths, sssp_tenths


def test_sssp_unit_path(p5):
    assert sssp(p5, 0).tolist() == [0, 1, 2, 3, 4]


def test_sssp_weighted_path(p3w):
    assert sssp(p3w, 0).tolist() == [0, 1, 6]


def test_sssp_unknown_source(p5):
    with pytest.raises(InputError):
        sssp(p5, 7)


def test_all_pairs_matches_sssp_rows(random_graphs):
    for g, dm in random_graphs(20, 15, seed=3):
        for v in range(g.n):
            np.testing.assert_array_equal(dm.tenths[v], sssp_tenths(g, v))


def test_all_pairs_threads_identical(random_graphs):
    for g, dm in random_graphs(5, 40, seed=4, n_min=20):
        assert all_pairs(g, threads=4) == dm


def test_disconnected_rejected():
    with pytest.raises(MetricError) as exc:
        RoadGraph(4, [(0, 1, 1), (2, 3, 1)])
    assert exc.value.unreachable == (0, 2)


def test_all_pairs_disconnected_names_pair():
    g = RoadGraph(3, [(0, 1, 1)], require_connected=False)
    with pytest.raises(MetricError, match="vertices 0 and 2"):
        all_pairs(g)


def test_parallel_edges_collapse_to_minimum():
    g = RoadGraph(2, [(0, 1, 5), (1, 0, 3)])
    assert g.edges() == ((0, 1, 30),)


@pytest.mark.parametrize("edges", [[(0, 0, 1)], [(0, 1, 0)], [(0, 1, -2)], [(0, 5, 1)]])
def test_invalid_edges(edges):
    with pytest.raises(InputError):
        RoadGraph(2, edges, require_connected=False)


def test_weights_are_tenths():
    assert minutes_to_tenths("12.3") == 123
    assert minutes_to_tenths(0.05) == 1
    assert minutes_to_tenths(7) == 70


def test_eccentricity(p5, p3w):
    assert eccentricity(all_pairs(p5), 2) == 2
    dm = all_pairs(p3w)
    assert [eccentricity(dm, v) for v in range(3)] == [6, 5, 6]
    assert eccentricity(all_pairs(RoadGraph(1, [])), 0) == 0


def test_summary_p4_two_centers(p4):
    s = metric_summary(all_pairs(p4))
    assert s.radius == 2 and s.center == (1, 2)


def test_stats_fixtures(p5, p3w):
    s = graph_stats(p5, all_pairs(p5))
    assert s.degree_histogram == (0, 2, 3)
    s = graph_stats(p3w, all_pairs(p3w))
    assert (s.edge_weight_min, s.edge_weight_max, s.edge_weight_mean) == (1, 5, 3)
    assert s.path_weight_mean == 4 and s.path_weight_mode == 1


def test_stats_mode_half_up_and_ties():
    # pair weights 1.5, 2.5, 4.0 -> whole minutes 2, 3, 4: tie, smallest wins
    g = RoadGraph(3, [(0, 1, 1.5), (1, 2, 2.5)])
    s = graph_stats(g, all_pairs(g))
    assert s.path_weight_mode == 2
    assert sum(s.degree_histogram) == 3


def test_induced_subgraph(p5, k3):
    sub = induced_subgraph(p5, {0, 1, 2})
    assert sub.n == 3 and [e[:2] for e in sub.edges()] == [(0, 1), (1, 2)]
    iso = induced_subgraph(p5, {0, 2, 4})
    assert iso.n_edges == 0 and not iso.is_connected()
    assert iso.parent_ids == (0, 2, 4)
    ab = induced_subgraph(k3, {0, 1})
    assert ab.edges() == ((0, 1, 10),)
    with pytest.raises(InputError):
        induced_subgraph(p5, set())


def test_induced_distances_dominate_global(random_graphs):
    rng = np.random.default_rng(0)
    for g, dm in random_graphs(30, 12, seed=5, n_min=3):
        vs = sorted(set(rng.choice(g.n, size=rng.integers(1, g.n + 1), replace=False).tolist()))
        sub = induced_subgraph(g, vs)
        d = orc.floyd_warshall(*to_oracle(sub))
        for i, a in enumerate(vs):
            for j, b in enumerate(vs):
                assert d[i][j] >= dm.tenths[a, b]


def test_n_hop(p5):
    assert n_hop_neighborhood(p5, 0, 2) == {0, 1, 2}
    assert n_hop_neighborhood(p5, 3, 0) == {3}
    assert n_hop_neighborhood(p5, 2, 10) == set(range(5))


def test_n_hop_matches_oracle(random_graphs):
    for g, _ in random_graphs(20, 12, seed=6):
        n, edges = to_oracle(g)
        for v in range(g.n):
            for h in (0, 1, 3):
                assert n_hop_neighborhood(g, v, h) == orc.hop_ball(n, edges, v, h)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_sssp_equals_simple_path_enumeration(n, seed):
    g = random_small_graph(np.random.default_rng(seed), n)
    expected = orc.simple_path_distances(*to_oracle(g))
    dm = all_pairs(g)
    assert dm.tenths.tolist() == expected


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 14), st.integers(0, 2**32 - 1))
def test_metric_properties(n, seed):
    g = random_small_graph(np.random.default_rng(seed), n)
    d = all_pairs(g).tenths
    assert (d == d.T).all() and (np.diag(d) == 0).all()
    assert (d[:, None, :] <= d[:, :, None] + d[None, :, :]).all()
    s = metric_summary(all_pairs(g))
    assert s.diameter <= 2 * s.radius
    ecc = d.max(axis=1) / 10
    assert all(ecc[c] == s.radius for c in s.center)
    assert all(ecc[c] == s.diameter for c in s.periphery)


def test_adjacency_order_irrelevant():
    rng = np.random.default_rng(11)
    g = random_small_graph(rng, 12)
    edges = [(u, v, t / 10) for u, v, t in g.edges()]
    shuffled = [edges[i] for i in rng.permutation(len(edges))]
    flipped = [(v, u, w) if rng.random() < 0.5 else (u, v, w) for u, v, w in shuffled]
    h = RoadGraph(12, flipped)
    assert h == g
    assert all_pairs(h) == all_pairs(g)
