"""
Road graph metrics
==================

Radius, diameter, center and periphery of a synthetic road graph, and the
inequality d <= 2r that ties them together.
"""
import numpy as np

import kct

# 200 towns scattered over a 300 km square, about 1.64 roads per town
bundle = kct.gen_random_graph(200, rng_seed=11)
g = bundle.graph
print(g)

# all shortest travel times, in minutes
dm = kct.all_pairs(g)
print("farthest pair:", dm.minutes.max(), "min")

stats = kct.graph_stats(g, dm)
print("radius", stats.summary.radius, "diameter", stats.summary.diameter)
print("center", stats.summary.center, "median", stats.summary.median)
assert stats.summary.diameter <= 2 * stats.summary.radius

# eccentricity of every vertex; the center has the smallest
ecc = np.array([kct.eccentricity(dm, v) for v in range(g.n)])
print("eccentricity range", ecc.min(), ecc.max())
