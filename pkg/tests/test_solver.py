import logging
import math

import numpy as np
import pytest

import oracles as orc
import kct.solver as solver_mod
from conftest import path_graph, to_oracle
from kct import (
    BudgetExceededError,
    InputError,
    Objective,
    RoadGraph,
    SolverConfig,
    all_pairs,
    balance_min_radius,
    check_center_constraint,
    exact_solver,
    greedy_farthest_first,
    local_search,
    metric_summary,
    solve,
    sweep,
    voronoi_partition,
)


def test_greedy_examples(p5):
    dm = all_pairs(p5)
    assert greedy_farthest_first(dm, 2, 0) == (0, 4)
    assert greedy_farthest_first(dm, 3, 0) == (0, 2, 4)
    assert greedy_farthest_first(dm, 1, 3) == (3,)
    with pytest.raises(InputError):
        greedy_farthest_first(dm, 6, 0)
    with pytest.raises(InputError):
        greedy_farthest_first(dm, 0, 0)


def test_greedy_matches_oracle(random_graphs):
    rng = np.random.default_rng(0)
    for g, dm in random_graphs(50, 15, seed=20):
        k, start = int(rng.integers(1, g.n + 1)), int(rng.integers(g.n))
        assert greedy_farthest_first(dm, k, start) == orc.farthest_first(dm.tenths.tolist(), k, start)


def test_greedy_two_approximation(random_graphs):
    for g, dm in random_graphs(40, 12, seed=21):
        n, edges = to_oracle(g)
        d = dm.tenths.tolist()
        for k in (1, 2, 3):
            if k > g.n:
                continue
            opt = orc.exact(n, edges, d, k, constrained=False)[1]
            s = greedy_farthest_first(dm, k, 0)
            assert orc.voronoi_radius(d, s) <= 2 * opt


def test_local_search_p5(p5):
    dm = all_pairs(p5)
    res = local_search(p5, dm, [0, 4], 2)
    assert voronoi_partition(dm, res.centers).partition_radius == 1
    assert all(m.R < 2 for m in res.moves)


def test_local_search_optimal_unchanged(p5):
    dm = all_pairs(p5)
    res = local_search(p5, dm, [1, 4], 3)
    assert res.centers == (1, 4) and res.moves == () and res.passes == 1


def test_local_search_rejects_zero_hops(p5):
    with pytest.raises(InputError):
        local_search(p5, all_pairs(p5), [0], 0)


def test_local_search_moves_strictly_decrease(random_graphs):
    rng = np.random.default_rng(1)
    for g, dm in random_graphs(40, 20, seed=22, n_min=3):
        start = rng.choice(g.n, size=min(3, g.n), replace=False)
        r0 = voronoi_partition(dm, start).partition_radius
        res = local_search(g, dm, start, 2)
        rs = [r0] + [m.R for m in res.moves]
        assert all(b < a for a, b in zip(rs, rs[1:]))


def test_saturated_neighborhood_is_swap_local_optimum(random_graphs):
    rng = np.random.default_rng(2)
    for g, dm in random_graphs(30, 12, seed=23, n_min=3):
        k = min(3, g.n)
        start = rng.choice(g.n, size=k, replace=False)
        res = local_search(g, dm, start, 30)
        d = dm.tenths.tolist()
        base = orc.voronoi_radius(d, res.searched_centers)
        for pos in range(k):
            for cand in range(g.n):
                if cand in res.searched_centers:
                    continue
                trial = list(res.searched_centers)
                trial[pos] = cand
                assert orc.voronoi_radius(d, trial) >= base


def test_balance_examples(p4, p5):
    assert balance_min_radius(p4, all_pairs(p4), [1, 2], 5).centers == (1, 2)
    assert balance_min_radius(p5, all_pairs(p5), [1, 3], 5).centers == (1, 3)
    assert balance_min_radius(p5, all_pairs(p5), range(5), 5).centers == tuple(range(5))


def test_balance_p4_tie_rule(p4):
    # v2 ties between v1 and v3 and joins v1, leaving v3 alone with radius 0
    dm = all_pairs(p4)
    res = balance_min_radius(p4, dm, [1, 3], 5)
    p = voronoi_partition(dm, res.centers)
    assert p.partition_radius == 1 and p.min_radius == 1


def test_balance_keeps_radius_and_constraint(random_graphs):
    for g, dm in random_graphs(30, 20, seed=24, n_min=4):
        sol = solve(g, dm, SolverConfig(k=3 if g.n >= 3 else 1, seed_vertex=0))
        res = balance_min_radius(g, dm, sol.centers, 5)
        p = voronoi_partition(dm, res.centers)
        assert p.partition_radius <= sol.R
        assert p.min_radius >= sol.min_radius
        assert check_center_constraint(g, p).ok


def test_balance_objective_moves(random_graphs):
    for g, dm in random_graphs(20, 20, seed=25, n_min=5):
        start = greedy_farthest_first(dm, 3, 0)
        r0 = voronoi_partition(dm, start).partition_radius
        res = local_search(g, dm, start, 3, Objective.BALANCE)
        mins = [voronoi_partition(dm, start).min_radius] + [m.min_radius for m in res.moves]
        assert all(b > a for a, b in zip(mins, mins[1:]))
        assert all(m.R <= r0 for m in res.moves)


def test_solve_examples(p5):
    dm = all_pairs(p5)
    s = solve(p5, dm, SolverConfig(k=1))
    assert s.centers == (2,) and s.R == 2
    s = solve(p5, dm, SolverConfig(k=2, seed_vertex=0))
    assert s.R == 1 and s.constraint_ok
    s = solve(p5, dm, SolverConfig(k=5))
    assert s.R == 0


def test_solve_trace_and_metadata(p5):
    s = solve(p5, all_pairs(p5), SolverConfig(k=2, seed_vertex=0))
    assert s.stage_trace[0] == ("greedy", 2.0)
    rs = [r for _, r in s.stage_trace]
    assert all(b <= a for a, b in zip(rs, rs[1:]))
    assert s.start_vertex == 0 and s.rng_seed is None


def test_solve_random_start_reproducible(random_graphs):
    g, dm = random_graphs(1, 30, seed=26, n_min=30)[0]
    cfg = SolverConfig(k=4, rng_seed=123)
    a, b = solve(g, dm, cfg), solve(g, dm, cfg)
    assert a.centers == b.centers and a.stage_trace == b.stage_trace
    assert a.start_vertex == b.start_vertex and a.rng_seed == 123
    pinned = solve(g, dm, SolverConfig(k=4, seed_vertex=a.start_vertex))
    assert pinned.centers == a.centers


@pytest.mark.parametrize(
    "cfg",
    [SolverConfig(k=0), SolverConfig(k=6), SolverConfig(k=2, neighborhood_n=0),
     SolverConfig(k=2, neighborhood_n=31), SolverConfig(k=2, seed_vertex=9)],
)
def test_config_validation(p5, cfg):
    with pytest.raises(InputError):
        solve(p5, all_pairs(p5), cfg)


def test_solve_balance_flag(random_graphs):
    g, dm = random_graphs(1, 40, seed=27, n_min=40)[0]
    plain = solve(g, dm, SolverConfig(k=4, seed_vertex=0))
    bal = solve(g, dm, SolverConfig(k=4, seed_vertex=0, balance=True))
    assert bal.stage_trace[-1][0] == "balance"
    assert bal.R <= plain.R and bal.min_radius >= plain.min_radius and bal.constraint_ok


def test_exact_examples(p5, k3):
    assert exact_solver(p5, all_pairs(p5), 2) == ((0, 3), 1.0)
    assert exact_solver(p5, all_pairs(p5), 1) == ((2,), 2.0)
    assert exact_solver(k3, all_pairs(k3), 2, constrained=False) == ((0, 2), 1.0)


def test_exact_budget():
    g = path_graph(30)
    with pytest.raises(BudgetExceededError) as exc:
        exact_solver(g, all_pairs(g), 5, budget=1000)
    assert exc.value.count == math.comb(30, 5)


def test_exact_matches_oracle(random_graphs):
    for g, dm in random_graphs(40, 10, seed=28):
        n, edges = to_oracle(g)
        d = dm.tenths.tolist()
        for k in range(1, min(3, g.n) + 1):
            for constrained in (False, True):
                combo, r = orc.exact(n, edges, d, k, constrained)
                assert exact_solver(g, dm, k, constrained) == (combo, r / 10)


def test_exact_small_chunks_agree(random_graphs):
    for g, dm in random_graphs(10, 12, seed=29, n_min=6):
        for constrained in (False, True):
            assert exact_solver(g, dm, 3, constrained, chunk=7) == exact_solver(g, dm, 3, constrained)


def test_exact_monotone_in_k(random_graphs):
    for g, dm in random_graphs(20, 10, seed=30, n_min=4):
        rs = [exact_solver(g, dm, k, constrained=False)[1] for k in range(1, g.n + 1)]
        assert all(b <= a for a, b in zip(rs, rs[1:]))


def test_sweep_p5(p5):
    res = sweep(p5, all_pairs(p5), range(1, 6))
    assert [r.R for r in res.rows] == [2, 1, 1, 1, 0] and res.errors == ()


def test_sweep_single_vertex_and_star(star):
    g = RoadGraph(1, [])
    assert [r.R for r in sweep(g, all_pairs(g), [1]).rows] == [0]
    row = sweep(star, all_pairs(star), [1]).rows[0]
    assert row.R == 1 and row.centers == (0,)


def test_sweep_collects_errors(p5):
    res = sweep(p5, all_pairs(p5), [2, 9])
    assert [r.k for r in res.rows] == [2]
    assert res.errors[0][0] == 9


def test_sweep_threads_identical(random_graphs):
    g, dm = random_graphs(1, 40, seed=31, n_min=40)[0]
    a = sweep(g, dm, range(1, 7))
    b = sweep(g, dm, range(1, 7), threads=3)
    assert [(r.k, r.R, r.centers) for r in a.rows] == [(r.k, r.R, r.centers) for r in b.rows]


def test_sweep_warns_when_radius_grows(p5, monkeypatch, caplog):
    real = solver_mod.solve

    def fake(graph, dm, cfg):
        sol = real(graph, dm, cfg)
        if cfg.k == 3:
            return real(graph, dm, SolverConfig(k=1))
        return sol

    monkeypatch.setattr(solver_mod, "solve", fake)
    with caplog.at_level(logging.WARNING, logger="kct.solver"):
        sweep(p5, all_pairs(p5), [2, 3])
    assert "R grows" in caplog.text


def test_solve_k1_is_graph_center(random_graphs):
    for g, dm in random_graphs(40, 25, seed=32):
        s = solve(g, dm, SolverConfig(k=1, rng_seed=7))
        summary = metric_summary(dm)
        assert s.centers[0] in summary.center and s.R == summary.radius
