"""Minimal deterministic SVG renderer for curve sets; no dependencies.

Output is a standalone SVG 1.1 document and is a pure function of the input:
identical curve sets render to byte-identical files.
"""

from __future__ import annotations

import math
from typing import Callable

WIDTH = 960
HEIGHT = 600
MARGIN_LEFT = 80
MARGIN_RIGHT = 85
MARGIN_TOP = 48
MARGIN_BOTTOM = 64

PALETTE = [
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#ff7f0e",
    "#9467bd",
    "#8c564b",
    "#17becf",
    "#7f7f7f",
    "#bcbd22",
    "#e377c2",
]

_FONT = 'font-family="Helvetica,Arial,sans-serif"'


def _escape(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;")
            .replace(">", "&gt;").replace('"', "&quot;"))


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return f"{v:g}"


def _scale(spec, lo_px: float, hi_px: float) -> Callable[[float], float]:
    """Pixel transform for an axis spec over the given pixel span."""
    if spec.scale == "log10":
        a, b = math.log10(spec.min), math.log10(spec.max)
        return lambda v: lo_px + (math.log10(v) - a) / (b - a) * (hi_px - lo_px)
    a, b = spec.min, spec.max
    return lambda v: lo_px + (v - a) / (b - a) * (hi_px - lo_px)


def _ticks(spec) -> list[float]:
    if spec.scale == "log10":
        lo = math.ceil(math.log10(spec.min) - 1e-9)
        hi = math.floor(math.log10(spec.max) + 1e-9)
        return [10.0 ** k for k in range(lo, hi + 1)]
    span = spec.max - spec.min
    raw = span / 6.0
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    first = math.ceil(spec.min / step) * step
    ticks = []
    v = first
    while v <= spec.max + step * 1e-9:
        ticks.append(round(v / step) * step)
        v += step
    return ticks


def _axis_title(spec) -> str:
    return f"{spec.label} ({spec.unit})" if spec.unit else spec.label


def render_svg(cs) -> str:
    """Render a CurveSet (lines or heatmap kind) to an SVG document string."""
    plot_l = MARGIN_LEFT
    plot_r = WIDTH - MARGIN_RIGHT
    plot_t = MARGIN_TOP
    plot_b = HEIGHT - MARGIN_BOTTOM

    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8" standalone="no"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">')
    out.append(f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>')
    out.append(
        f'<clipPath id="plot"><rect x="{plot_l}" y="{plot_t}" '
        f'width="{plot_r - plot_l}" height="{plot_b - plot_t}"/></clipPath>')
    out.append(
        f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" '
        f'font-size="17" {_FONT}>{_escape(cs.title)}</text>')

    x_px = _scale(cs.x_axis, plot_l, plot_r)
    y_px = _scale(cs.y_axis, plot_b, plot_t)

    # Frame, x ticks and labels (shared by both kinds).
    for v in _ticks(cs.x_axis):
        if not cs.x_axis.min <= v <= cs.x_axis.max:
            continue
        px = x_px(v)
        out.append(f'<line x1="{_fmt(px)}" y1="{plot_t}" x2="{_fmt(px)}" '
                   f'y2="{plot_b}" stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{_fmt(px)}" y="{plot_b + 20}" text-anchor="middle" '
                   f'font-size="12" {_FONT}>{_tick_label(v)}</text>')
    for v in _ticks(cs.y_axis):
        if not cs.y_axis.min <= v <= cs.y_axis.max:
            continue
        py = y_px(v)
        out.append(f'<line x1="{plot_l}" y1="{_fmt(py)}" x2="{plot_r}" '
                   f'y2="{_fmt(py)}" stroke="#dddddd" stroke-width="1"/>')
        out.append(f'<text x="{plot_l - 8}" y="{_fmt(py + 4)}" text-anchor="end" '
                   f'font-size="12" {_FONT}>{_tick_label(v)}</text>')

    if cs.kind == "heatmap":
        _render_heatmap(cs, out, x_px, y_px, plot_l, plot_r, plot_t, plot_b)
    else:
        _render_lines(cs, out, x_px, y_px, plot_l, plot_r, plot_t, plot_b)

    # Frame on top of data.
    out.append(f'<rect x="{plot_l}" y="{plot_t}" width="{plot_r - plot_l}" '
               f'height="{plot_b - plot_t}" fill="none" stroke="#000000" '
               f'stroke-width="1.5"/>')
    out.append(f'<text x="{(plot_l + plot_r) / 2:.1f}" y="{HEIGHT - 18}" '
               f'text-anchor="middle" font-size="14" {_FONT}>'
               f'{_escape(_axis_title(cs.x_axis))}</text>')
    mid_y = (plot_t + plot_b) / 2
    out.append(f'<text x="22" y="{mid_y:.1f}" text-anchor="middle" font-size="14" '
               f'{_FONT} transform="rotate(-90 22 {mid_y:.1f})">'
               f'{_escape(_axis_title(cs.y_axis))}</text>')
    if cs.y2_axis is not None:
        y2_px = _scale(cs.y2_axis, plot_b, plot_t)
        for v in _ticks(cs.y2_axis):
            if not cs.y2_axis.min <= v <= cs.y2_axis.max:
                continue
            py = y2_px(v)
            out.append(f'<text x="{plot_r + 8}" y="{_fmt(py + 4)}" '
                       f'text-anchor="start" font-size="12" {_FONT}>'
                       f'{_tick_label(v)}</text>')
        out.append(f'<text x="{WIDTH - 16}" y="{mid_y:.1f}" text-anchor="middle" '
                   f'font-size="14" {_FONT} transform="rotate(90 '
                   f'{WIDTH - 16} {mid_y:.1f})">'
                   f'{_escape(_axis_title(cs.y2_axis))}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_lines(cs, out, x_px, y_px, plot_l, plot_r, plot_t, plot_b) -> None:
    y2_px = _scale(cs.y2_axis, plot_b, plot_t) if cs.y2_axis is not None else None
    color_i = 0
    legend: list[tuple[str, str, str]] = []  # (label, color, marker)

    for s in cs.series:
        color = PALETTE[color_i % len(PALETTE)]
        color_i += 1
        to_y = y2_px if (s.axis == "y2" and y2_px is not None) else y_px
        pts = " ".join(f"{_fmt(x_px(x))},{_fmt(to_y(y))}" for x, y in s.points)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.8" '
                   f'clip-path="url(#plot)" points="{pts}"/>')
        legend.append((s.name, color, "line"))

    for ov in cs.overlays:
        color = PALETTE[color_i % len(PALETTE)]
        color_i += 1
        to_y = y2_px if (ov.axis == "y2" and y2_px is not None) else y_px
        for x, y in ov.points:
            out.append(f'<circle cx="{_fmt(x_px(x))}" cy="{_fmt(to_y(y))}" r="3.5" '
                       f'fill="{color}" stroke="#000000" stroke-width="0.6" '
                       f'clip-path="url(#plot)"/>')
        legend.append((ov.name, color, "dot"))

    lx = plot_l + 12
    ly = plot_t + 16
    for label, color, marker in legend:
        if marker == "line":
            out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 22}" y2="{ly - 4}" '
                       f'stroke="{color}" stroke-width="2.5"/>')
        else:
            out.append(f'<circle cx="{lx + 11}" cy="{ly - 4}" r="3.5" '
                       f'fill="{color}" stroke="#000000" stroke-width="0.6"/>')
        out.append(f'<text x="{lx + 28}" y="{ly}" font-size="12" {_FONT}>'
                   f'{_escape(label)}</text>')
        ly += 17


def _colormap(t: float) -> str:
    """Three-stop gradient dark blue -> teal -> yellow, t in [0, 1]."""
    stops = ((13, 8, 92), (0, 140, 140), (255, 230, 51))
    t = min(max(t, 0.0), 1.0)
    if t <= 0.5:
        a, b, u = stops[0], stops[1], t * 2.0
    else:
        a, b, u = stops[1], stops[2], (t - 0.5) * 2.0
    rgb = tuple(round(ca + (cb - ca) * u) for ca, cb in zip(a, b))
    return f"#{rgb[0]:02x}{rgb[1]:02x}{rgb[2]:02x}"


def _cell_edges(centers: list[float]) -> list[float]:
    """Cell boundaries at log-space midpoints, extended half a step outward."""
    logs = [math.log10(c) for c in centers]
    edges = [logs[0] - (logs[1] - logs[0]) / 2.0]
    for a, b in zip(logs, logs[1:]):
        edges.append((a + b) / 2.0)
    edges.append(logs[-1] + (logs[-1] - logs[-2]) / 2.0)
    return [10.0 ** e for e in edges]


def _render_heatmap(cs, out, x_px, y_px, plot_l, plot_r, plot_t, plot_b) -> None:
    # Rows are series tagged with a `level` (the y coordinate); the point y
    # values are the mapped quantity.  Color scale is log10 of the value.
    rows = sorted(cs.series, key=lambda s: s.level)
    xs = [x for x, _ in rows[0].points]
    values = [v for s in rows for _, v in s.points]
    vmin = math.log10(min(values))
    vmax = math.log10(max(values))
    span = (vmax - vmin) or 1.0

    x_edges = _cell_edges(xs)
    y_edges = _cell_edges([s.level for s in rows])
    for ri, s in enumerate(rows):
        y0 = y_px(min(y_edges[ri + 1], cs.y_axis.max))
        y1 = y_px(max(y_edges[ri], cs.y_axis.min))
        h = y1 - y0
        for ci, (_, v) in enumerate(s.points):
            x0 = x_px(max(x_edges[ci], cs.x_axis.min))
            x1 = x_px(min(x_edges[ci + 1], cs.x_axis.max))
            t = (math.log10(v) - vmin) / span
            out.append(f'<rect x="{_fmt(x0)}" y="{_fmt(y0)}" '
                       f'width="{_fmt(x1 - x0)}" height="{_fmt(h)}" '
                       f'fill="{_colormap(t)}"/>')

    # Overlay markers: measured (N, value) pairs are placed at the level the
    # model attributes to them, solved from value = 1/(1 + (N-1)*level).
    for ov in cs.overlays:
        for n, v in ov.points:
            if n < 2:
                continue
            level = (1.0 / v - 1.0) / (n - 1.0)
            if not cs.y_axis.min <= level <= cs.y_axis.max:
                continue
            out.append(f'<circle cx="{_fmt(x_px(n))}" cy="{_fmt(y_px(level))}" '
                       f'r="4" fill="#ffffff" stroke="#000000" stroke-width="1.2"/>')

    # Color bar with end labels.
    bar_x = plot_r + 18
    bar_t, bar_b = plot_t + 10, plot_b - 10
    steps = 24
    for i in range(steps):
        t0 = i / steps
        y0 = bar_b - (bar_b - bar_t) * (i + 1) / steps
        h = (bar_b - bar_t) / steps
        out.append(f'<rect x="{bar_x}" y="{_fmt(y0)}" width="12" '
                   f'height="{_fmt(h + 0.5)}" fill="{_colormap(t0)}"/>')
    out.append(f'<text x="{bar_x + 16}" y="{_fmt(bar_b + 4)}" font-size="11" '
               f'{_FONT}>{10.0 ** vmin:.2g}</text>')
    out.append(f'<text x="{bar_x + 16}" y="{_fmt(bar_t + 4)}" font-size="11" '
               f'{_FONT}>{10.0 ** vmax:.2g}</text>')
