"""Minimal SVG rendering of harness CSV output.

Line plots draw one polyline per series; scatter plots shade the two
quadrants where the CV statistic and the true elpd difference disagree in
sign and tag the points that fall there.
"""

from pathlib import Path

import numpy as np
import pandas as pd

from errors import InvalidArgumentError
from settings import app_logger

WIDTH, HEIGHT, MARGIN = 480, 360, 48
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
PLOT_KINDS = ("scatter", "line")


def read_plot_csv(path) -> pd.DataFrame:
    try:
        return pd.read_csv(path)
    except pd.errors.EmptyDataError:
        return pd.DataFrame()


class _Scale:
    def __init__(self, xs: np.ndarray, ys: np.ndarray):
        self.x0, self.x1 = _limits(xs)
        self.y0, self.y1 = _limits(ys)

    def x(self, value: float) -> float:
        return MARGIN + (value - self.x0) / (self.x1 - self.x0) * (WIDTH - 2 * MARGIN)

    def y(self, value: float) -> float:
        return HEIGHT - MARGIN - (value - self.y0) / (self.y1 - self.y0) * (HEIGHT - 2 * MARGIN)


def _limits(values: np.ndarray) -> tuple[float, float]:
    values = values[np.isfinite(values)]
    if values.size == 0:
        return 0.0, 1.0
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def _axes(x_label: str, y_label: str) -> list[str]:
    bottom, right = HEIGHT - MARGIN, WIDTH - MARGIN
    return [
        f'<line class="axis" x1="{MARGIN}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="black"/>',
        f'<line class="axis" x1="{MARGIN}" y1="{MARGIN}" x2="{MARGIN}" y2="{bottom}" stroke="black"/>',
        f'<text x="{WIDTH / 2}" y="{HEIGHT - 12}" text-anchor="middle">{x_label}</text>',
        f'<text x="14" y="{HEIGHT / 2}" transform="rotate(-90 14 {HEIGHT / 2})" text-anchor="middle">{y_label}</text>',
    ]


def _line_body(frame: pd.DataFrame, x: str, y: str, series: str | None, scale: _Scale) -> list[str]:
    groups = frame.groupby(series, sort=True) if series else [("", frame)]
    parts = []
    for i, (name, group) in enumerate(groups):
        group = group.sort_values(x)
        colour = PALETTE[i % len(PALETTE)]
        vertices = " ".join(f"{scale.x(a):.2f},{scale.y(b):.2f}" for a, b in zip(group[x], group[y]))
        parts.append(f'<polyline points="{vertices}" fill="none" stroke="{colour}"/>')
        if series:
            parts.append(f'<text class="legend" x="{WIDTH - MARGIN + 4}" y="{MARGIN + 14 * i}" fill="{colour}">{name}</text>')
    return parts


def _scatter_body(frame: pd.DataFrame, x: str, y: str, scale: _Scale) -> list[str]:
    parts = []
    x_zero, y_zero = scale.x(0.0), scale.y(0.0)
    left, right = MARGIN, WIDTH - MARGIN
    top, bottom = MARGIN, HEIGHT - MARGIN
    cx, cy = min(max(x_zero, left), right), min(max(y_zero, top), bottom)
    # x > 0, y < 0 and x < 0, y > 0
    for qx0, qx1, qy0, qy1 in ((cx, right, cy, bottom), (left, cx, top, cy)):
        if qx1 > qx0 and qy1 > qy0:
            parts.append(
                f'<rect class="adverse-region" x="{qx0:.2f}" y="{qy0:.2f}" width="{qx1 - qx0:.2f}" '
                f'height="{qy1 - qy0:.2f}" fill="#d62728" fill-opacity="0.12"/>'
            )
    for a, b in zip(frame[x], frame[y]):
        adverse = np.sign(a) * np.sign(b) < 0
        cls = "point adverse" if adverse else "point"
        colour = PALETTE[1] if adverse else PALETTE[0]
        parts.append(f'<circle class="{cls}" cx="{scale.x(a):.2f}" cy="{scale.y(b):.2f}" r="2.5" fill="{colour}"/>')
    return parts


def emit_plot(csv_path, kind: str, out_path, x: str | None = None, y: str | None = None,
              series: str | None = None, title: str = "") -> Path:
    """Renders a CSV as an SVG scatter or line plot; an empty CSV gives bare axes."""
    if kind not in PLOT_KINDS:
        raise InvalidArgumentError(f"plot kind must be one of {PLOT_KINDS}, got {kind!r}")
    frame = read_plot_csv(csv_path)
    columns = list(frame.columns)
    x = x or (columns[0] if columns else "x")
    y = y or (columns[1] if len(columns) > 1 else "y")
    body: list[str] = []
    if not frame.empty:
        for name in (x, y) + ((series,) if series else ()):
            if name not in frame.columns:
                raise InvalidArgumentError(f"column {name!r} not found in {csv_path}")
        frame = frame.dropna(subset=[x, y])
        scale = _Scale(frame[x].to_numpy(float), frame[y].to_numpy(float))
        if kind == "line":
            body = _line_body(frame, x, y, series, scale)
        else:
            body = _scatter_body(frame, x, y, scale)
    heading = f'<text x="{WIDTH / 2}" y="20" text-anchor="middle">{title}</text>' if title else ""
    svg = "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
            heading,
            *body,
            *_axes(x, y),
            "</svg>",
        ]
    )
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(svg)
    app_logger.info(f"Wrote {kind} plot of {len(frame)} rows to {out_path}")
    return out_path
