"""Deterministic SVG figures: Y-index polar plots, network drawings, timeline.

Polar viewport mapping: with plot radius ``R`` (outermost gridline) and
``scale = (min(width, height) - 2 * margin) / R``, a data point (x, y) is
drawn at ``px = margin + x * scale`` and ``py = height - margin - y * scale``.
Every point carries ``data-entity`` and its pixel centre in ``cx``/``cy``, so
tests can invert the mapping with :meth:`PolarViewport.from_px`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape, quoteattr

DEFAULT_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)
LABEL_COLLISION_PX = 10.0


@dataclass(frozen=True)
class PlotSpec:
    width: int = 640
    height: int = 640
    margin: int = 60
    label_min_j: int = 0
    palette: tuple = DEFAULT_PALETTE
    node_radius_max: float = 18.0
    edge_width_max: float = 6.0

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("width and height must be positive")
        if not self.palette:
            raise ValueError("palette must be non-empty")


def _f(v: float) -> str:
    return f"{v:.2f}"


def _open(width, height, title):
    return [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{escape(title)}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]


def _close(parts) -> str:
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def grid_step(max_value: float, max_rings: int = 10) -> int:
    """Smallest 1-2-5 integer step giving at most ``max_rings`` gridlines."""
    step, k = 1, 0
    while math.ceil(max_value / step) > max_rings:
        k += 1
        step = (1, 2, 5)[k % 3] * 10 ** (k // 3)
    return step


@dataclass(frozen=True)
class PolarViewport:
    margin: float
    height: float
    scale: float
    radius: float

    @classmethod
    def fit(cls, max_j: float, spec: PlotSpec) -> "PolarViewport":
        step = grid_step(max(max_j, 1))
        radius = step * max(1, math.ceil(max_j / step))
        side = min(spec.width, spec.height) - 2 * spec.margin
        return cls(spec.margin, spec.height, side / radius, radius)

    def to_px(self, x: float, y: float) -> tuple[float, float]:
        return self.margin + x * self.scale, self.height - self.margin - y * self.scale

    def from_px(self, px: float, py: float) -> tuple[float, float]:
        return (px - self.margin) / self.scale, (self.height - self.margin - py) / self.scale


def render_polar(yindices, spec: PlotSpec = PlotSpec(), title: str = "Y-index") -> str:
    yindices = list(yindices)
    for y in yindices:
        if not 0 <= y.h <= math.pi / 2 + 1e-12:
            raise ValueError(f"h out of range for {y.entity!r}")
    view = PolarViewport.fit(max((y.j for y in yindices), default=1), spec)
    step = grid_step(view.radius)
    ox, oy = view.to_px(0, 0)
    parts = _open(spec.width, spec.height, title)

    parts.append('<g class="grid" fill="none" stroke="#cccccc" stroke-width="1">')
    for ring in range(step, int(view.radius) + 1, step):
        r = ring * view.scale
        parts.append(
            f'<path class="ring" data-j="{ring}" d="M {_f(ox + r)} {_f(oy)} A {_f(r)} {_f(r)} 0 0 0 {_f(ox)} {_f(oy - r)}"/>'
        )
    parts.append("</g>")
    parts.append('<g class="ring-labels" font-family="sans-serif" font-size="10" fill="#666666">')
    for ring in range(step, int(view.radius) + 1, step):
        px, _ = view.to_px(ring, 0)
        parts.append(f'<text x="{_f(px)}" y="{_f(oy + 14)}" text-anchor="middle">{ring}</text>')
    parts.append("</g>")

    end_x, end_y = view.to_px(view.radius, 0)
    top_x, top_y = view.to_px(0, view.radius)
    diag = view.radius / math.sqrt(2)
    dx, dy = view.to_px(diag, diag)
    parts.append(f'<line class="axis" x1="{_f(ox)}" y1="{_f(oy)}" x2="{_f(end_x)}" y2="{_f(end_y)}" stroke="#000000"/>')
    parts.append(f'<line class="axis" x1="{_f(ox)}" y1="{_f(oy)}" x2="{_f(top_x)}" y2="{_f(top_y)}" stroke="#000000"/>')
    parts.append(
        f'<line class="diagonal" x1="{_f(ox)}" y1="{_f(oy)}" x2="{_f(dx)}" y2="{_f(dy)}" '
        'stroke="#888888" stroke-dasharray="6 4"/>'
    )
    parts.append(
        f'<text x="{_f((ox + end_x) / 2)}" y="{_f(oy + 32)}" font-family="sans-serif" font-size="12" '
        'text-anchor="middle">j cos h (first author)</text>'
    )
    parts.append(
        f'<text x="{_f(ox - 36)}" y="{_f((oy + top_y) / 2)}" font-family="sans-serif" font-size="12" '
        f'text-anchor="middle" transform="rotate(-90 {_f(ox - 36)} {_f((oy + top_y) / 2)})">'
        "j sin h (corresponding author)</text>"
    )

    parts.append('<g class="points">')
    placed = []
    labels = []
    for y in yindices:
        px, py = view.to_px(y.x, y.y)
        parts.append(
            f'<circle class="point" data-entity={quoteattr(y.entity)} data-j="{y.j}" data-h="{y.h:.6f}" '
            f'cx="{_f(px)}" cy="{_f(py)}" r="3.5" fill="{spec.palette[0]}"/>'
        )
        if y.j >= spec.label_min_j:
            crowd = sum(1 for qx, qy in placed if math.hypot(px - qx, py - qy) < LABEL_COLLISION_PX)
            offset = 6 + 12 * crowd
            ux, uy = math.cos(y.h), -math.sin(y.h)
            labels.append(
                f'<text class="label" x="{_f(px + ux * offset)}" y="{_f(py + uy * offset)}">'
                f"{escape(y.entity)} ({y.j}, {y.h:.3f})</text>"
            )
            placed.append((px, py))
    parts.append("</g>")
    parts.append('<g class="labels" font-family="sans-serif" font-size="10" fill="#222222">')
    parts.extend(labels)
    parts.append("</g>")
    return _close(parts)


def render_network(network, partition, layout, degrees, spec: PlotSpec = PlotSpec(),
                   title: str = "co-authorship network", max_labels: int = 40) -> str:
    """Node radius grows with sqrt(total links); edge width with weight."""
    parts = _open(spec.width, spec.height, title)
    nodes = list(network.nodes)
    if not nodes:
        return _close(parts)
    xs = [layout.positions[n][0] for n in nodes]
    ys = [layout.positions[n][1] for n in nodes]
    pad = spec.margin
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    scale = (min(spec.width, spec.height) - 2 * pad) / span
    cx0 = (spec.width - (max(xs) - min(xs)) * scale) / 2
    cy0 = (spec.height - (max(ys) - min(ys)) * scale) / 2

    def px(n):
        x, y = layout.positions[n]
        return cx0 + (x - min(xs)) * scale, spec.height - (cy0 + (y - min(ys)) * scale)

    max_links = max(degrees[n] for n in nodes) or 1
    max_w = max((w for _, _, w in network.edges), default=1)
    parts.append('<g class="edges" stroke="#999999" stroke-opacity="0.7">')
    for u, v, w in network.edges:
        (x1, y1), (x2, y2) = px(u), px(v)
        parts.append(
            f'<line class="edge" data-u={quoteattr(u)} data-v={quoteattr(v)} data-weight="{w}" '
            f'x1="{_f(x1)}" y1="{_f(y1)}" x2="{_f(x2)}" y2="{_f(y2)}" '
            f'stroke-width="{w * spec.edge_width_max / max_w:.4f}"/>'
        )
    parts.append("</g>")
    parts.append('<g class="nodes" stroke="#ffffff" stroke-width="1">')
    for n in nodes:
        x, y = px(n)
        r = spec.node_radius_max * math.sqrt(degrees[n] / max_links)
        colour = spec.palette[partition.assignment[n] % len(spec.palette)]
        parts.append(
            f'<circle class="node" data-node={quoteattr(n)} data-community="{partition.assignment[n]}" '
            f'data-links="{degrees[n]}" cx="{_f(x)}" cy="{_f(y)}" r="{r:.4f}" fill="{colour}"/>'
        )
    parts.append("</g>")
    labelled = sorted(nodes, key=lambda n: (-degrees[n], n))[:max_labels]
    parts.append('<g class="labels" font-family="sans-serif" font-size="9" fill="#222222">')
    for n in sorted(labelled):
        x, y = px(n)
        parts.append(f'<text x="{_f(x)}" y="{_f(y - 4)}" text-anchor="middle">{escape(n)}</text>')
    parts.append("</g>")
    return _close(parts)


def render_timeline(periods, spec: PlotSpec = PlotSpec(width=720, height=420),
                    title: str = "publications and mean citations per period") -> str:
    """Bars for publication counts (left axis), a line for mean citations (right axis)."""
    periods = list(periods)
    if not periods:
        raise ValueError("at least one period is required")
    parts = _open(spec.width, spec.height, title)
    left, right = spec.margin, spec.width - spec.margin
    top, bottom = spec.margin, spec.height - spec.margin
    slot = (right - left) / len(periods)
    max_count = max(max(p.count for p in periods), 1)
    max_mean = max(max(p.mean_citations for p in periods), 1.0)
    count_scale = (bottom - top) / max_count
    mean_scale = (bottom - top) / max_mean

    parts.append(f'<line class="axis" x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="#000000"/>')
    parts.append(f'<line class="axis" x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="#000000"/>')
    parts.append(f'<line class="axis" x1="{right}" y1="{top}" x2="{right}" y2="{bottom}" stroke="#000000"/>')
    parts.append(
        f'<text x="{left}" y="{top - 10}" font-family="sans-serif" font-size="11" text-anchor="middle">'
        f"publications (max {max_count})</text>"
    )
    parts.append(
        f'<text x="{right}" y="{top - 10}" font-family="sans-serif" font-size="11" text-anchor="middle">'
        f"mean citations (max {max_mean:.1f})</text>"
    )
    parts.append(f'<g class="bars" fill="{spec.palette[0]}">')
    points = []
    for i, p in enumerate(periods):
        x = left + i * slot + slot * 0.15
        h = p.count * count_scale
        parts.append(
            f'<rect class="bar" data-period={quoteattr(p.label)} data-count="{p.count}" '
            f'x="{_f(x)}" y="{_f(bottom - h)}" width="{_f(slot * 0.7)}" height="{_f(h)}"/>'
        )
        points.append((left + (i + 0.5) * slot, bottom - p.mean_citations * mean_scale, p))
    parts.append("</g>")
    colour = spec.palette[1 % len(spec.palette)]
    path = " ".join(f"{_f(x)},{_f(y)}" for x, y, _ in points)
    parts.append(f'<polyline class="mean-line" points="{path}" fill="none" stroke="{colour}" stroke-width="2"/>')
    parts.append(f'<g class="mean-points" fill="{colour}">')
    for x, y, p in points:
        parts.append(
            f'<circle class="mean-point" data-period={quoteattr(p.label)} data-mean="{p.mean_citations:.4f}" '
            f'cx="{_f(x)}" cy="{_f(y)}" r="3"/>'
        )
    parts.append("</g>")
    parts.append('<g class="period-labels" font-family="sans-serif" font-size="11" text-anchor="middle">')
    for x, _, p in points:
        parts.append(f'<text x="{_f(x)}" y="{bottom + 16}">{escape(p.label)}</text>')
    parts.append("</g>")
    return _close(parts)
