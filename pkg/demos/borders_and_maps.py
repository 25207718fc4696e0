"""
Border sketches and maps
========================

Project a graph onto its best-fit plane, sketch unit borders from the
midpoints of the roads that cross them, and write GeoJSON and SVG files.
"""
import sys
from pathlib import Path

import kct
from kct.io import dumps_geojson

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

g, frame = kct.project_graph(kct.gen_random_graph(500, rng_seed=3).graph)
print("plane fit rms residual: %.3f km" % frame.rms_residual)

dm = kct.all_pairs(g)
sol = kct.solve(g, dm, kct.SolverConfig(k=6, seed_vertex=0))

# relative neighborhood graph versus minimum spanning tree
for method in ("rng", "mst"):
    sketch = kct.border_sketch(g, sol.partition, method=method)
    length = sum(p.graph.total_length for p in sketch.pieces)
    print(f"{method}: {sketch.n_segments} segments, {length:.1f} km")

sketch = kct.border_sketch(g, sol.partition, method="rng")
(out / "solution.json").write_text(kct.emit_solution(sol, g, sketch))
(out / "map.geojson").write_text(dumps_geojson(kct.emit_geojson(g, sol.partition, sketch)))
(out / "map.svg").write_text(kct.render_svg(g, sol.partition, sketch))
print("wrote", sorted(p.name for p in out.iterdir()))
