"""Minimal self-contained SVG line charts (one polyline per series)."""

from __future__ import annotations

import math
from html import escape
from typing import Mapping, Sequence

WIDTH, HEIGHT = 720, 440
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 150, 40, 55
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
           "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _label(v: float) -> str:
    if v == 0:
        return "0"
    if abs(v) >= 1e4 or abs(v) < 1e-3:
        return f"{v:.0e}"
    return f"{v:g}"


def nice_ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / max(1, count - 1)
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + step * 1e-9:
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_chart(series: Mapping[str, Sequence[tuple[float, float]]], *, x_label: str = "x",
               y_label: str = "y", title: str = "", log_x: bool = False) -> str:
    """Render ``{name: [(x, y), ...]}`` to an SVG document string.

    Points are drawn in ascending x. With ``log_x`` all x must be positive
    and ticks fall on powers of ten.
    """
    pts = [p for s in series.values() for p in s]
    if not pts:
        raise ValueError("nothing to plot")
    xs = [float(x) for x, _ in pts]
    ys = [float(y) for _, y in pts]
    if log_x:
        if min(xs) <= 0:
            raise ValueError("log-scale x needs positive values")
        tx = math.log10
    else:
        tx = float
    x_lo, x_hi = tx(min(xs)), tx(max(xs))
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    y_lo, y_hi = min(0.0, min(ys)), max(ys)
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    y_ticks = nice_ticks(y_lo, y_hi)
    y_hi = max(y_hi, y_ticks[-1])

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def px(x: float) -> float:
        return MARGIN_L + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_T + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>')

    # axes
    x0, y0 = MARGIN_L, MARGIN_T + plot_h
    out.append(f'<g class="axes" stroke="black" fill="none">'
               f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}"/>'
               f'<line x1="{x0}" y1="{MARGIN_T}" x2="{x0}" y2="{y0}"/></g>')

    if log_x:
        x_ticks = [10.0 ** e for e in range(math.floor(x_lo), math.ceil(x_hi) + 1)
                   if x_lo - 1e-9 <= e <= x_hi + 1e-9]
    else:
        x_ticks = [t for t in nice_ticks(x_lo, x_hi) if x_lo - 1e-9 <= t <= x_hi + 1e-9]
    out.append('<g class="x-ticks" text-anchor="middle">')
    for t in x_ticks:
        x = px(t)
        out.append(f'<line x1="{_fmt(x)}" y1="{y0}" x2="{_fmt(x)}" y2="{y0 + 5}" stroke="black"/>'
                   f'<text x="{_fmt(x)}" y="{y0 + 18}">{escape(_label(t))}</text>')
    out.append("</g>")
    out.append('<g class="y-ticks" text-anchor="end">')
    for t in y_ticks:
        y = py(t)
        out.append(f'<line x1="{x0 - 5}" y1="{_fmt(y)}" x2="{x0 + plot_w}" y2="{_fmt(y)}" stroke="#ddd"/>'
                   f'<text x="{x0 - 8}" y="{_fmt(y + 4)}">{escape(_label(t))}</text>')
    out.append("</g>")
    suffix = " (log scale)" if log_x else ""
    out.append(f'<text x="{x0 + plot_w / 2:.1f}" y="{HEIGHT - 12}" text-anchor="middle">'
               f'{escape(x_label + suffix)}</text>')
    out.append(f'<text transform="translate(18 {MARGIN_T + plot_h / 2:.1f}) rotate(-90)" '
               f'text-anchor="middle">{escape(y_label)}</text>')

    legend_x = x0 + plot_w + 20
    for i, (name, points) in enumerate(series.items()):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{_fmt(px(x))},{_fmt(py(y))}" for x, y in sorted(points))
        out.append(f'<polyline class="series" data-series="{escape(str(name))}" fill="none" '
                   f'stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = MARGIN_T + 10 + 20 * i
        out.append(f'<g class="legend"><line x1="{legend_x}" y1="{ly}" x2="{legend_x + 24}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>'
                   f'<text x="{legend_x + 30}" y="{ly + 4}">{escape(str(name))}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
