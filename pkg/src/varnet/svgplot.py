"""Minimal deterministic SVG charts: log-log scatter panels and line overlays."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")
W, H = 360, 280
PAD_L, PAD_R, PAD_T, PAD_B = 56, 16, 28, 44


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str
    style: str = "points"  # or "line"


@dataclass
class Panel:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    log: bool = True


def _f(v: float) -> str:
    return f"{v:.2f}"


def _range(vals: list[float], log: bool) -> tuple[float, float]:
    if log:
        lo, hi = math.floor(min(vals)), math.ceil(max(vals))
    else:
        lo, hi = min(0.0, min(vals)), max(1.0, max(vals))
    if hi <= lo:
        hi = lo + 1
    return lo, hi


def _panel_svg(panel: Panel, ox: float, oy: float) -> list[str]:
    tx = (lambda v: math.log10(v)) if panel.log else float
    pts = [
        [(tx(x), tx(y)) for x, y in zip(s.x, s.y) if not panel.log or (x > 0 and y > 0)]
        for s in panel.series
    ]
    xs = [p[0] for ser in pts for p in ser] or [0.0, 1.0]
    ys = [p[1] for ser in pts for p in ser] or [0.0, 1.0]
    x0, x1 = _range(xs, panel.log)
    y0, y1 = _range(ys, panel.log)
    pw, ph = W - PAD_L - PAD_R, H - PAD_T - PAD_B

    def sx(v: float) -> float:
        return ox + PAD_L + (v - x0) / (x1 - x0) * pw

    def sy(v: float) -> float:
        return oy + PAD_T + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<rect x="{_f(ox + PAD_L)}" y="{_f(oy + PAD_T)}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
        f'<text x="{_f(ox + W / 2)}" y="{_f(oy + 18)}" text-anchor="middle" font-size="13">{escape(panel.title)}</text>',
        f'<text x="{_f(ox + PAD_L + pw / 2)}" y="{_f(oy + H - 8)}" text-anchor="middle" font-size="11">{escape(panel.xlabel)}</text>',
        f'<text x="{_f(ox + 14)}" y="{_f(oy + PAD_T + ph / 2)}" text-anchor="middle" font-size="11" '
        f'transform="rotate(-90 {_f(ox + 14)} {_f(oy + PAD_T + ph / 2)})">{escape(panel.ylabel)}</text>',
    ]
    if panel.log:
        xticks = [(float(e), f"1e{e}") for e in range(int(x0), int(x1) + 1)]
        yticks = [(float(e), f"1e{e}") for e in range(int(y0), int(y1) + 1)]
    else:
        xticks = [(x0 + (x1 - x0) * i / 5, f"{x0 + (x1 - x0) * i / 5:.1f}") for i in range(6)]
        yticks = [(y0 + (y1 - y0) * i / 5, f"{y0 + (y1 - y0) * i / 5:.1f}") for i in range(6)]
    for v, lab in xticks:
        out.append(f'<text x="{_f(sx(v))}" y="{_f(oy + PAD_T + ph + 14)}" text-anchor="middle" font-size="9">{lab}</text>')
    for v, lab in yticks:
        out.append(f'<text x="{_f(ox + PAD_L - 4)}" y="{_f(sy(v) + 3)}" text-anchor="end" font-size="9">{lab}</text>')

    for k, (s, ser) in enumerate(zip(panel.series, pts)):
        color = PALETTE[k % len(PALETTE)]
        if s.style == "line" and len(ser) > 1:
            d = " ".join(f"{_f(sx(x))},{_f(sy(y))}" for x, y in ser)
            out.append(f'<polyline points="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        else:
            out.extend(f'<circle cx="{_f(sx(x))}" cy="{_f(sy(y))}" r="2" fill="{color}"/>' for x, y in ser)
        out.append(
            f'<text x="{_f(ox + PAD_L + pw - 4)}" y="{_f(oy + PAD_T + 12 + 12 * k)}" text-anchor="end" '
            f'font-size="10" fill="{color}">{escape(s.label)}</text>'
        )
    return out


def render(panels: Sequence[Panel], columns: int = 2) -> str:
    columns = max(1, min(columns, len(panels)))
    rows = math.ceil(len(panels) / columns)
    body: list[str] = []
    for i, panel in enumerate(panels):
        body.extend(_panel_svg(panel, (i % columns) * W, (i // columns) * H))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{columns * W}" height="{rows * H}" '
        f'font-family="sans-serif">\n' + "\n".join(body) + "\n</svg>\n"
    )
