"""Minimal SVG line charts for eyeballing sweep output.

The CSV is the contract; these figures only exist for quick visual
comparison, so the writer is a bare polyline plot with axes and a legend.
"""

from __future__ import annotations

import math

_WIDTH, _HEIGHT = 720, 480
_MARGIN = 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#7f7f7f", "#8c564b")


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def write_line_svg(path, x_values, series, title="", xlabel="", ylabel=""):
    """Write a multi-series line chart.

    ``series`` maps label -> list of y values (None for missing points),
    aligned with ``x_values``.
    """
    xs = [float(x) for x in x_values]
    ys = [y for vals in series.values() for y in vals if y is not None and math.isfinite(y)]
    if not xs or not ys:
        raise ValueError("nothing to plot")
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def sx(x):
        return _MARGIN + (x - x_lo) / (x_hi - x_lo) * (_WIDTH - 2 * _MARGIN)

    def sy(y):
        return _HEIGHT - _MARGIN - (y - y_lo) / (y_hi - y_lo) * (_HEIGHT - 2 * _MARGIN)

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<line x1="{_MARGIN}" y1="{_HEIGHT - _MARGIN}" x2="{_WIDTH - _MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
        f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
        f'y2="{_HEIGHT - _MARGIN}" stroke="black"/>',
    ]
    if title:
        lines.append(
            f'<text x="{_WIDTH / 2}" y="24" text-anchor="middle" '
            f'font-size="16">{title}</text>'
        )
    if xlabel:
        lines.append(
            f'<text x="{_WIDTH / 2}" y="{_HEIGHT - 16}" text-anchor="middle" '
            f'font-size="12">{xlabel}</text>'
        )
    if ylabel:
        lines.append(
            f'<text x="16" y="{_HEIGHT / 2}" text-anchor="middle" font-size="12" '
            f'transform="rotate(-90 16 {_HEIGHT / 2})">{ylabel}</text>'
        )
    # axis extents
    for x in (x_lo, x_hi):
        lines.append(
            f'<text x="{sx(x):.1f}" y="{_HEIGHT - _MARGIN + 18}" '
            f'text-anchor="middle" font-size="11">{_fmt(x)}</text>'
        )
    for y in (y_lo, y_hi):
        lines.append(
            f'<text x="{_MARGIN - 6}" y="{sy(y):.1f}" text-anchor="end" '
            f'font-size="11">{_fmt(y)}</text>'
        )
    for i, (label, vals) in enumerate(series.items()):
        color = _COLORS[i % len(_COLORS)]
        points = " ".join(
            f"{sx(x):.2f},{sy(y):.2f}"
            for x, y in zip(xs, vals)
            if y is not None and math.isfinite(y)
        )
        if points:
            lines.append(
                f'<polyline fill="none" stroke="{color}" stroke-width="1.5" '
                f'points="{points}"/>'
            )
        ly = _MARGIN + 16 * i
        lines.append(
            f'<line x1="{_WIDTH - _MARGIN - 110}" y1="{ly}" '
            f'x2="{_WIDTH - _MARGIN - 86}" y2="{ly}" stroke="{color}" stroke-width="2"/>'
        )
        lines.append(
            f'<text x="{_WIDTH - _MARGIN - 80}" y="{ly + 4}" '
            f'font-size="12">{label}</text>'
        )
    lines.append("</svg>")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
