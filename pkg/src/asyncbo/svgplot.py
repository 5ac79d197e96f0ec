"""Minimal static SVG line charts for benchmark curves.

Hand-rolled rather than delegating to a plotting library so that output
bytes are a pure function of the input curves: same data, same file.
Three panels per figure: (A) median loss against experiment count,
(B) median loss against effective optimization time, (C) inter-quartile
range of the loss against experiment count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from xml.sax.saxutils import escape

# Okabe-Ito palette: colorblind-safe, stable ordering.
PALETTE = (
    "#0072B2",
    "#D55E00",
    "#009E73",
    "#CC79A7",
    "#E69F00",
    "#56B4E9",
    "#F0E442",
    "#000000",
    "#999999",
    "#8B4513",
)

_MARGIN_L = 58
_MARGIN_R = 12
_MARGIN_T = 30
_MARGIN_B = 44
_LEGEND_W = 150

# Curves beyond the palette length repeat colors with these dash patterns.
_DASHES = ("", "6 3", "2 2", "8 3 2 3")


@dataclass(frozen=True)
class PlotStyle:
    """Figure geometry and scale options."""

    panel_width: int = 360
    panel_height: int = 300
    log_y: bool = False
    title: str = ""


def _nice_step(raw: float) -> float:
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        if mult * mag >= raw:
            return mult * mag
    return 10.0 * mag


def _linear_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    step = _nice_step((hi - lo) / target)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt_tick(v: float) -> str:
    return f"{v:.4g}"


class _Panel:
    """One set of axes; maps data coordinates to pixel coordinates."""

    def __init__(self, x0, y0, style, x_range, y_range, log_y, x_label, y_label, letter):
        self.x0, self.y0 = x0, y0
        self.w = style.panel_width - _MARGIN_L - _MARGIN_R
        self.h = style.panel_height - _MARGIN_T - _MARGIN_B
        self.log_y = log_y
        self.x_lo, self.x_hi = x_range
        self.y_lo, self.y_hi = y_range
        if self.x_hi <= self.x_lo:
            self.x_hi = self.x_lo + 1.0
        if self.y_hi <= self.y_lo:
            self.y_hi = self.y_lo + (1.0 if not log_y else 1.0)
        self.x_label, self.y_label, self.letter = x_label, y_label, letter

    def px(self, x: float) -> float:
        return self.x0 + _MARGIN_L + (x - self.x_lo) / (self.x_hi - self.x_lo) * self.w

    def py(self, y: float) -> float:
        return self.y0 + _MARGIN_T + self.h - (y - self.y_lo) / (self.y_hi - self.y_lo) * self.h

    def frame(self) -> list[str]:
        left, top = self.x0 + _MARGIN_L, self.y0 + _MARGIN_T
        parts = [
            f'<rect x="{left:.2f}" y="{top:.2f}" width="{self.w:.2f}" height="{self.h:.2f}" '
            'fill="none" stroke="#333333" stroke-width="1"/>',
            f'<text x="{left - 6:.2f}" y="{top - 10:.2f}" font-size="13" font-weight="bold" '
            f'text-anchor="start">{escape(self.letter)}</text>',
            f'<text x="{left + self.w / 2:.2f}" y="{self.y0 + _MARGIN_T + self.h + 32:.2f}" '
            f'font-size="11" text-anchor="middle">{escape(self.x_label)}</text>',
            f'<text x="{self.x0 + 14:.2f}" y="{top + self.h / 2:.2f}" font-size="11" '
            f'text-anchor="middle" transform="rotate(-90 {self.x0 + 14:.2f} '
            f'{top + self.h / 2:.2f})">{escape(self.y_label)}</text>',
        ]
        for t in _linear_ticks(self.x_lo, self.x_hi):
            x = self.px(t)
            y = top + self.h
            parts.append(
                f'<line x1="{x:.2f}" y1="{y:.2f}" x2="{x:.2f}" y2="{y + 4:.2f}" '
                'stroke="#333333" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{x:.2f}" y="{y + 15:.2f}" font-size="10" '
                f'text-anchor="middle">{_fmt_tick(t)}</text>'
            )
        for t, label in self._y_ticks():
            y = self.py(t)
            parts.append(
                f'<line x1="{left - 4:.2f}" y1="{y:.2f}" x2="{left:.2f}" y2="{y:.2f}" '
                'stroke="#333333" stroke-width="1"/>'
            )
            parts.append(
                f'<text x="{left - 6:.2f}" y="{y + 3:.2f}" font-size="10" '
                f'text-anchor="end">{label}</text>'
            )
        return parts

    def _y_ticks(self):
        if not self.log_y:
            return [(t, _fmt_tick(t)) for t in _linear_ticks(self.y_lo, self.y_hi)]
        ticks = []
        for e in range(math.ceil(self.y_lo - 1e-9), math.floor(self.y_hi + 1e-9) + 1):
            ticks.append((float(e), f"1e{e}"))
        if len(ticks) < 2:
            ticks = [(self.y_lo, f"{10 ** self.y_lo:.2g}"), (self.y_hi, f"{10 ** self.y_hi:.2g}")]
        return ticks

    def polyline(self, xs, ys, color: str, dash: str = "") -> str:
        pts = " ".join(f"{self.px(x):.2f},{self.py(y):.2f}" for x, y in zip(xs, ys))
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        return (
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="1.5" stroke-linejoin="round"{dash_attr}/>'
        )


def _y_transform(values, log_y: bool, floor: float):
    if not log_y:
        return values
    return [math.log10(max(v, floor)) for v in values]


def render_svg(curves, style: PlotStyle, path) -> None:
    """Write one three-panel figure with a polyline per curve.

    Curves are drawn in sorted cell order with a fixed palette, and all
    coordinates are formatted with fixed precision, so the output is
    deterministic. Raises ValueError when there is nothing to draw.
    """
    if not curves:
        raise ValueError("no curves to render")
    curves = sorted(curves, key=lambda c: c.cell)
    n = len(curves[0].median_loss)
    experiments = list(range(1, n + 1))

    positive = [
        v
        for c in curves
        for series in (c.median_loss, c.iqr)
        for v in series
        if v > 0
    ]
    floor = min(positive) if positive else 1e-12

    panels_data = []  # (x_label, y_label, letter, xs_per_curve, ys_per_curve)
    panels_data.append(
        ("experiment", "median loss", "A", [experiments] * len(curves),
         [list(c.median_loss) for c in curves])
    )
    panels_data.append(
        ("effective time", "median loss", "B", [list(c.effective_time) for c in curves],
         [list(c.median_loss) for c in curves])
    )
    panels_data.append(
        ("experiment", "IQR of loss", "C", [experiments] * len(curves),
         [list(c.iqr) for c in curves])
    )

    width = 3 * style.panel_width + _LEGEND_W
    top = 22 if style.title else 0
    legend_height = top + _MARGIN_T + 16 * len(curves) + 10
    height = max(style.panel_height + top, legend_height)
    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="Helvetica, Arial, sans-serif">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if style.title:
        parts.append(
            f'<text x="{width / 2:.2f}" y="15" font-size="13" font-weight="bold" '
            f'text-anchor="middle">{escape(style.title)}</text>'
        )

    for i, (x_label, y_label, letter, xs_list, ys_list) in enumerate(panels_data):
        ys_t = [_y_transform(ys, style.log_y, floor) for ys in ys_list]
        x_lo = min(min(xs) for xs in xs_list)
        x_hi = max(max(xs) for xs in xs_list)
        y_lo = min(min(ys) for ys in ys_t)
        y_hi = max(max(ys) for ys in ys_t)
        panel = _Panel(
            i * style.panel_width,
            top,
            style,
            (x_lo, x_hi),
            (y_lo, y_hi),
            style.log_y,
            x_label,
            y_label,
            letter,
        )
        parts.extend(panel.frame())
        for j, (xs, ys) in enumerate(zip(xs_list, ys_t)):
            color = PALETTE[j % len(PALETTE)]
            dash = _DASHES[(j // len(PALETTE)) % len(_DASHES)]
            parts.append(panel.polyline(xs, ys, color, dash))

    lx = 3 * style.panel_width + 10
    ly = top + _MARGIN_T + 6
    parts.append(
        f'<text x="{lx}" y="{ly - 10}" font-size="11" font-weight="bold">policies</text>'
    )
    for j, c in enumerate(curves):
        y = ly + 16 * j
        color = PALETTE[j % len(PALETTE)]
        dash = _DASHES[(j // len(PALETTE)) % len(_DASHES)]
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        parts.append(
            f'<line x1="{lx}" y1="{y}" x2="{lx + 22}" y2="{y}" stroke="{color}" '
            f'stroke-width="2"{dash_attr}/>'
        )
        parts.append(
            f'<text x="{lx + 28}" y="{y + 4}" font-size="11">{escape(c.label())}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
