"""
Dividing a road graph into k units
==================================

Run the heuristic for one k, compare it with the exhaustive optimum on a
small graph, then sweep k.
"""
import kct

g = kct.gen_random_graph(400, rng_seed=5).graph
dm = kct.all_pairs(g)

sol = kct.solve(g, dm, kct.SolverConfig(k=8, balance=True, rng_seed=1))
print("R =", sol.R, "min   smallest unit radius =", sol.min_radius)
for stage, r in sol.stage_trace:
    print(f"  {stage:<13} {r:6.1f}")
print("center constraint holds:", sol.constraint_ok)

# on a small graph the exact optimum is cheap
small = kct.gen_random_graph(18, rng_seed=2).graph
sdm = kct.all_pairs(small)
for k in (1, 2, 3):
    heur = kct.solve(small, sdm, kct.SolverConfig(k=k)).R
    centers, opt = kct.exact_solver(small, sdm, k)
    print(f"k={k}: heuristic {heur:.1f}  optimum {opt:.1f} at {centers}")

# radius as a function of k
result = kct.sweep(g, dm, range(2, 13))
print(kct.emit_sweep_csv(result.rows, g))
