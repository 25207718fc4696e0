"""Command-line interface: ``kct <command> ...``.

Exit status is 0 on success, 1 on input errors and 2 when a computation is
refused (exhaustive-search budget, infeasible constraint).
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import io as kio
from .borders import border_sketch
from .errors import BudgetExceededError, InfeasibleError, InputError
from .geo import project_graph
from .graph import all_pairs, graph_stats
from .partition import check_center_constraint, voronoi_partition
from .render import RenderSpec, render_svg
from .solver import Solution, SolverConfig, exact_solver, solve, sweep

log = logging.getLogger("kct")


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get("KCT_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"KCT_THREADS must be an integer, got {env!r}") from None
    return 1


def _emit(text: str, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _load(args, need_planar=False):
    bundle = kio.load_graph(args.vertices, args.edges, getattr(args, "planar", None))
    graph = bundle.graph
    if need_planar and not graph.has_planar():
        graph, _ = project_graph(graph)
    return graph


def _vertex_by_key(graph, key):
    for v in graph.vertices:
        if v.key == key:
            return v.id
    raise InputError(f"unknown vertex id {key!r}")


def cmd_stats(args):
    graph = _load(args)
    dm = all_pairs(graph, threads=args.threads)
    report = graph_stats(graph, dm).to_dict()
    labels = graph.labels()
    for key in ("center", "periphery", "median"):
        report[key] = [{"id": i, "label": labels[i]} for i in report[key]]
    _emit(json.dumps(report, indent=2) + "\n", args.out)


def cmd_project(args):
    graph = _load(args)
    graph, frame = project_graph(graph)
    _emit(kio.planar_csv(graph), args.out)
    if args.frame_out:
        Path(args.frame_out).write_text(json.dumps(frame.to_dict(), indent=2) + "\n")
    log.info("plane fit rms residual %.3f km", frame.rms_residual)


def _config(args, graph, k):
    seed = _vertex_by_key(graph, args.seed_vertex) if args.seed_vertex is not None else None
    return SolverConfig(
        k=k,
        seed_vertex=seed,
        neighborhood_n=args.n,
        balance=args.balance,
        max_fixpoint_iters=args.max_fixpoint_iters,
        rng_seed=args.rng_seed,
    )


def cmd_solve(args):
    graph = _load(args)
    dm = all_pairs(graph, threads=args.threads)
    sol = solve(graph, dm, _config(args, graph, args.k))
    _emit(kio.emit_solution(sol, graph), args.out)


def cmd_voronoi(args):
    graph = _load(args)
    dm = all_pairs(graph, threads=args.threads)
    keys = [k.strip() for k in args.centers.split(",") if k.strip()]
    centers = tuple(sorted(_vertex_by_key(graph, k) for k in keys))
    p = voronoi_partition(dm, centers)
    sol = Solution(
        centers=p.centers,
        partition=p,
        stage_trace=(("voronoi", p.partition_radius),),
        constraint_ok=check_center_constraint(graph, p).ok,
    )
    _emit(kio.emit_solution(sol, graph), args.out)


def cmd_exact(args):
    graph = _load(args)
    dm = all_pairs(graph, threads=args.threads)
    centers, r = exact_solver(graph, dm, args.k, constrained=not args.unconstrained, budget=args.budget)
    labels = graph.labels()
    doc = {
        "k": args.k,
        "constrained": not args.unconstrained,
        "R_minutes": round(r, 1),
        "centers": [{"id": c, "label": labels[c]} for c in centers],
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)


def cmd_sweep(args):
    graph = _load(args)
    dm = all_pairs(graph, threads=args.threads)
    if args.k_min > args.k_max:
        raise InputError("--k-min exceeds --k-max")
    result = sweep(graph, dm, range(args.k_min, args.k_max + 1),
                   _config(args, graph, args.k_min), threads=args.threads)
    for k, err in result.errors:
        log.error("k=%d: %s", k, err)
    _emit(kio.emit_sweep_csv(result.rows, graph), args.out)


def cmd_borders(args):
    graph = _load(args, need_planar=True)
    dm = all_pairs(graph, threads=args.threads)
    sol = kio.read_solution(args.solution)
    p = voronoi_partition(dm, sol.centers)
    sketch = border_sketch(graph, p, method=args.method)
    if graph.has_geo():
        text = kio.dumps_geojson(kio.emit_geojson(graph, p, sketch))
    else:
        text = kio.emit_solution(sol, graph, sketch)
    _emit(text, args.out)


def cmd_render(args):
    graph = _load(args, need_planar=True)
    dm = all_pairs(graph, threads=args.threads)
    sol = kio.read_solution(args.solution)
    p = voronoi_partition(dm, sol.centers)
    sketch = None if args.borders == "none" else border_sketch(graph, p, method=args.borders)
    spec = RenderSpec(width=args.width, height=args.height, show_labels=args.labels)
    _emit(render_svg(graph, p, sketch, spec), args.out)


def cmd_gen(args):
    bundle = kio.gen_random_graph(
        args.n, args.density, (args.min_weight, args.max_weight), args.rng_seed
    )
    paths = kio.write_bundle(bundle, args.out_dir)
    log.info("wrote %s", ", ".join(str(p) for p in paths.values()))


def _graph_args(p, planar=True):
    p.add_argument("--vertices", required=True, help="vertices.csv (id,label,lat_deg,lon_deg)")
    p.add_argument("--edges", required=True, help="edges.csv (u,v,minutes)")
    if planar:
        p.add_argument("--planar", help="planar.csv (id,x_km,y_km); projected on the fly if omitted")
    p.add_argument("--out", help="output path (default stdout)")


def _solver_args(p):
    p.add_argument("--seed-vertex", help="vertex id to start farthest-first traversal from")
    p.add_argument("--n", type=int, default=5, help="hop radius of local search neighborhoods")
    p.add_argument("--balance", action="store_true", help="run the min-radius balancing step")
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--max-fixpoint-iters", type=int, default=100)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kct", description=__doc__.splitlines()[0])
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: $KCT_THREADS or 1)")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="graph statistics and metric invariants")
    _graph_args(p, planar=False)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("project", help="project geographic coordinates to planar.csv")
    _graph_args(p, planar=False)
    p.add_argument("--frame-out", help="write the fitted plane as JSON")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("solve", help="constrained k-center heuristic")
    _graph_args(p, planar=False)
    p.add_argument("--k", type=int, required=True)
    _solver_args(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("voronoi", help="Voronoi partition of preselected centers")
    _graph_args(p, planar=False)
    p.add_argument("--centers", required=True, help="comma separated vertex ids")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("exact", help="exhaustive optimum for small graphs")
    _graph_args(p, planar=False)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--unconstrained", action="store_true")
    p.add_argument("--budget", type=int, default=10**8, help="maximum number of subsets")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("sweep", help="solve over a range of k, CSV output")
    _graph_args(p, planar=False)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    _solver_args(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("borders", help="border sketch as GeoJSON")
    _graph_args(p)
    p.add_argument("--solution", required=True, help="solution JSON from solve/voronoi")
    p.add_argument("--method", choices=["rng", "mst"], default="rng")
    p.set_defaults(func=cmd_borders)

    p = sub.add_parser("render", help="SVG map of a solution")
    _graph_args(p)
    p.add_argument("--solution", required=True)
    p.add_argument("--borders", choices=["rng", "mst", "none"], default="rng")
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--height", type=int, default=800)
    p.add_argument("--labels", action="store_true")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("gen", help="write a random connected road-like graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--density", type=float, default=1.64, help="edges per vertex")
    p.add_argument("--min-weight", type=float, default=1.0)
    p.add_argument("--max-weight", type=float, default=37.0)
    p.add_argument("--rng-seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        args.threads = _threads(args.threads)
        args.func(args)
    except (BudgetExceededError, InfeasibleError) as exc:
        print(f"kct: refused: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"kct: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"kct: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
