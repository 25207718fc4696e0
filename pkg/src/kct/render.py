"""Deterministic SVG maps of a partitioned road graph."""
from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .graph import RoadGraph
from .partition import CenteredPartition

DEFAULT_PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
)


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 800
    palette: tuple[str, ...] = DEFAULT_PALETTE
    edge_color: str = "#bbbbbb"
    border_color: str = "#d00000"
    show_edges: bool = True
    show_centers: bool = True
    show_borders: bool = True
    show_labels: bool = False

    def color(self, tu_index: int) -> str:
        return self.palette[tu_index % len(self.palette)]


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def render_svg(graph: RoadGraph, partition: CenteredPartition, borders=None,
               spec: RenderSpec = RenderSpec()) -> str:
    """SVG 1.1 document; vertices colored by unit, centers outlined, borders overlaid.

    North is up: planar ``y`` is negated. The view box is the data bounding
    box plus a 5% margin on each side.
    """
    xy = graph.planar_array() * np.array([1.0, -1.0])
    lo, hi = xy.min(axis=0), xy.max(axis=0)
    extent = float(max(hi[0] - lo[0], hi[1] - lo[1])) or 1.0
    span = np.maximum(hi - lo, extent * 1e-3)
    margin = 0.05 * span
    x0, y0 = lo - margin
    w, h = span + 2 * margin
    dot = extent / 300
    stroke = extent / 1000

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" '
        f'height="{spec.height}" viewBox="{_f(x0)} {_f(y0)} {_f(w)} {_f(h)}">',
    ]
    if spec.show_edges and graph.n_edges:
        out.append(f'<g id="edges" stroke="{spec.edge_color}" stroke-width="{_f(stroke)}">')
        for u, v, _ in graph.edges():
            out.append(
                f'<line x1="{_f(xy[u, 0])}" y1="{_f(xy[u, 1])}" x2="{_f(xy[v, 0])}" y2="{_f(xy[v, 1])}"/>'
            )
        out.append("</g>")

    centers = set(partition.centers)
    out.append('<g id="vertices">')
    for v in range(graph.n):
        color = spec.color(int(partition.assignment[v]))
        if spec.show_centers and v in centers:
            out.append(
                f'<circle cx="{_f(xy[v, 0])}" cy="{_f(xy[v, 1])}" r="{_f(3 * dot)}" '
                f'fill="{color}" stroke="#000000" stroke-width="{_f(2 * stroke)}" class="center"/>'
            )
        else:
            out.append(f'<circle cx="{_f(xy[v, 0])}" cy="{_f(xy[v, 1])}" r="{_f(dot)}" fill="{color}"/>')
    out.append("</g>")

    segments = borders.segments() if (borders is not None and spec.show_borders) else []
    if segments:
        out.append(
            f'<g id="borders" stroke="{spec.border_color}" stroke-width="{_f(3 * stroke)}" fill="none">'
        )
        for _, a, b in segments:
            out.append(f'<polyline points="{_f(a[0])},{_f(-a[1])} {_f(b[0])},{_f(-b[1])}"/>')
        out.append("</g>")

    if spec.show_labels:
        out.append(f'<g id="labels" font-size="{_f(4 * dot)}" fill="#000000">')
        for v in graph.vertices:
            out.append(
                f'<text x="{_f(xy[v.id, 0] + dot)}" y="{_f(xy[v.id, 1] - dot)}" '
                f'data-id={quoteattr(v.key)}>{escape(v.label)}</text>'
            )
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
