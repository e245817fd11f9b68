"""Minimal SVG line charts for evaluation curves.

Each series becomes exactly one ``<polyline>``; axes, ticks and the nominal
reference line are drawn with ``<line>``/``<text>`` so that the polyline count
always equals the number of series.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence
from xml.sax.saxutils import escape, quoteattr

from binomci.evaluate import EvalPoint

WIDTH, HEIGHT = 800, 500
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 170, 30, 50

PALETTE = (
    "#d62728",  # red
    "#2ca02c",  # green
    "#e377c2",  # pink
    "#8c564b",  # brown
    "#17becf",  # cyan
    "#7f7f7f",  # grey
    "#1f77b4",  # blue
    "#ff7f0e",  # orange
    "#000000",
    "#9467bd",
)


@dataclass(frozen=True)
class PlotRequest:
    series: Sequence[tuple[str, Sequence[EvalPoint]]]
    output_path: str
    y_range: Optional[tuple[float, float]] = None
    nominal_line: Optional[float] = None
    title: str = ""
    y_label: str = ""

    def __post_init__(self) -> None:
        if not self.series:
            raise ValueError("a plot needs at least one series")
        labels = [label for label, _ in self.series]
        if len(set(labels)) != len(labels):
            raise ValueError("series labels must be unique")
        for label, points in self.series:
            if len(points) == 0:
                raise ValueError(f"series {label!r} is empty")


def _nice_ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


def render_svg(request: PlotRequest) -> str:
    xs = [pt.p for _, pts in request.series for pt in pts]
    ys = [pt.value for _, pts in request.series for pt in pts]
    if request.nominal_line is not None:
        ys.append(request.nominal_line)
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.01, x_hi + 0.01
    if request.y_range is not None:
        y_lo, y_hi = request.y_range
    else:
        y_lo, y_hi = min(ys), max(ys)
        pad = 0.05 * (y_hi - y_lo) or 0.01
        y_lo, y_hi = y_lo - pad, y_hi + pad

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def sx(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        y = min(max(y, y_lo), y_hi)
        return MARGIN_TOP + (y_hi - y) / (y_hi - y_lo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    if request.title:
        out.append(f'<text x="{WIDTH / 2:.1f}" y="18" text-anchor="middle">{escape(request.title)}</text>')

    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    out.append(f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="black"/>')
    out.append(f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="black"/>')
    for t in _nice_ticks(x_lo, x_hi):
        tx = sx(t)
        out.append(f'<line x1="{tx:.2f}" y1="{y0}" x2="{tx:.2f}" y2="{y0 + 5}" stroke="black"/>')
        out.append(f'<text x="{tx:.2f}" y="{y0 + 18}" text-anchor="middle">{t:.3g}</text>')
    for t in _nice_ticks(y_lo, y_hi):
        ty = sy(t)
        out.append(f'<line x1="{x0 - 5}" y1="{ty:.2f}" x2="{x0}" y2="{ty:.2f}" stroke="black"/>')
        out.append(f'<text x="{x0 - 8}" y="{ty + 4:.2f}" text-anchor="end">{t:.4g}</text>')
    out.append(f'<text x="{x0 + plot_w / 2:.1f}" y="{HEIGHT - 10}" text-anchor="middle">p</text>')
    if request.y_label:
        out.append(
            f'<text x="16" y="{MARGIN_TOP + plot_h / 2:.1f}" text-anchor="middle" '
            f'transform="rotate(-90 16 {MARGIN_TOP + plot_h / 2:.1f})">{escape(request.y_label)}</text>'
        )

    if request.nominal_line is not None:
        ny = sy(request.nominal_line)
        out.append(
            f'<line class="nominal" x1="{x0}" y1="{ny:.2f}" x2="{x0 + plot_w}" y2="{ny:.2f}" '
            f'stroke="black" stroke-dasharray="6,4"/>'
        )

    for i, (label, points) in enumerate(request.series):
        colour = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{sx(pt.p):.2f},{sy(pt.value):.2f}" for pt in points)
        out.append(
            f'<polyline fill="none" stroke="{colour}" stroke-width="1.2" '
            f"data-label={quoteattr(label)} points=\"{coords}\"/>"
        )
        ly = MARGIN_TOP + 10 + 18 * i
        lx = WIDTH - MARGIN_RIGHT + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 26}" y="{ly + 4}">{escape(label)}</text>')

    out.append("</svg>")
    return "\n".join(out) + "\n"
