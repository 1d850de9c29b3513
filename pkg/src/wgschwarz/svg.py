"""Minimal deterministic SVG line plots (no plotting dependency)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

WIDTH, HEIGHT = 640, 420
MARGIN = (60, 20, 30, 50)  # left, right, top, bottom
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


@dataclass
class Series:
    label: str
    x: list[float]
    y: list[float]  # NaN marks a gap
    dashed: bool = False


def _num(v: float) -> str:
    return f"{v:.2f}"


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(round(t, 12))
        t += step
    return ticks


def _segments(xs, ys):
    seg = []
    for x, y in zip(xs, ys):
        if math.isfinite(y):
            seg.append((x, y))
        elif seg:
            yield seg
            seg = []
    if seg:
        yield seg


def render(series: list[Series], title: str = "", xlabel: str = "", ylabel: str = "") -> str:
    if not series:
        raise ValueError("nothing to plot")
    xs = [x for s in series for x, y in zip(s.x, s.y) if math.isfinite(y)]
    ys = [y for s in series for y in s.y if math.isfinite(y)]
    if not xs:
        xs, ys = [0.0, 1.0], [0.0, 1.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(0.0, min(ys)), max(ys)
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    left, right, top, bottom = MARGIN
    pw, ph = WIDTH - left - right, HEIGHT - top - bottom

    def px(x):
        return left + (x - x0) / (x1 - x0) * pw

    def py(y):
        return top + ph - (y - y0) / (y1 - y0) * ph

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>']
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="18" text-anchor="middle" font-size="13">{escape(title)}</text>')
    out.append(f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>')
    for t in nice_ticks(x0, x1):
        if x0 <= t <= x1:
            X = _num(px(t))
            out.append(f'<line x1="{X}" y1="{top + ph}" x2="{X}" y2="{top + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{X}" y="{top + ph + 17}" text-anchor="middle">{t:g}</text>')
    for t in nice_ticks(y0, y1):
        if y0 <= t <= y1:
            Y = _num(py(t))
            out.append(f'<line x1="{left - 5}" y1="{Y}" x2="{left}" y2="{Y}" stroke="black"/>')
            out.append(f'<text x="{left - 8}" y="{Y}" text-anchor="end" dominant-baseline="middle">{t:g}</text>')
    if xlabel:
        out.append(f'<text x="{left + pw / 2:.2f}" y="{HEIGHT - 10}" text-anchor="middle">{escape(xlabel)}</text>')
    if ylabel:
        out.append(f'<text x="15" y="{top + ph / 2:.2f}" text-anchor="middle" '
                   f'transform="rotate(-90 15 {top + ph / 2:.2f})">{escape(ylabel)}</text>')
    for i, s in enumerate(series):
        color = "black" if s.dashed else PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="6 4"' if s.dashed else ""
        for seg in _segments(s.x, s.y):
            pts = " ".join(f"{_num(px(x))},{_num(py(y))}" for x, y in seg)
            out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
    if len(series) > 1:
        ly = top + 8
        for i, s in enumerate(series):
            color = "black" if s.dashed else PALETTE[i % len(PALETTE)]
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            y = ly + 14 * i
            out.append(f'<line x1="{left + pw - 110}" y1="{y}" x2="{left + pw - 85}" y2="{y}" '
                       f'stroke="{color}" stroke-width="1.5"{dash}/>')
            out.append(f'<text x="{left + pw - 80}" y="{y}" dominant-baseline="middle">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
