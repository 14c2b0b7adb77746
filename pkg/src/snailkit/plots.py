"""Minimal deterministic SVG plots: data points plus a model overlay.

No plotting library: the writer builds the SVG as a plain string so that
identical inputs produce byte-identical files (fixed canvas, fixed float
formatting, no timestamps or generated ids).  That makes plot output suitable
for golden-file comparison and for regression-diffing in CI.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadInput, IoError

_WIDTH, _HEIGHT = 860.0, 540.0
_LEFT, _RIGHT, _TOP, _BOTTOM = 72.0, 24.0, 42.0, 58.0
_POINT_COLOR = "#d62728"
_MODEL_COLOR = "#1f77b4"


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    """Round tick positions covering [lo, hi] at a 1-2-2.5-5 step."""
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if raw <= step:
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(t) < 1e-12 * step else t)
        t += step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _limits(arrays) -> tuple[float, float]:
    lo = min(float(np.min(a)) for a in arrays)
    hi = max(float(np.max(a)) for a in arrays)
    if hi == lo:
        lo, hi = lo - 1.0, hi + 1.0
    pad = 0.05 * (hi - lo)
    return lo - pad, hi + pad


def render_plot(
    points: tuple | None,
    model: tuple | None,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Render the SVG document as a string; see :func:`emit_plot`."""

    def clean(xy):
        if xy is None:
            return None
        x = np.asarray(xy[0], dtype=float).ravel()
        y = np.asarray(xy[1], dtype=float).ravel()
        if x.size == 0 or x.size != y.size:
            return None
        return x, y

    points = clean(points)
    model = clean(model)
    if points is None and model is None:
        raise BadInput("nothing to plot: both points and model are empty")

    xs = [p[0] for p in (points, model) if p is not None]
    ys = [p[1] for p in (points, model) if p is not None]
    xlo, xhi = _limits(xs)
    ylo, yhi = _limits(ys)
    plot_w = _WIDTH - _LEFT - _RIGHT
    plot_h = _HEIGHT - _TOP - _BOTTOM

    def sx(x):
        return _LEFT + (x - xlo) / (xhi - xlo) * plot_w

    def sy(y):
        return _TOP + plot_h - (y - ylo) / (yhi - ylo) * plot_h

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH:.0f}" '
        f'height="{_HEIGHT:.0f}" viewBox="0 0 {_WIDTH:.0f} {_HEIGHT:.0f}">',
        f'<rect width="{_WIDTH:.0f}" height="{_HEIGHT:.0f}" fill="white"/>',
        f'<rect x="{_LEFT:.1f}" y="{_TOP:.1f}" width="{plot_w:.1f}" '
        f'height="{plot_h:.1f}" fill="none" stroke="black" stroke-width="1"/>',
    ]
    for t in _ticks(xlo, xhi):
        px = sx(t)
        out.append(
            f'<line x1="{px:.2f}" y1="{_TOP + plot_h:.1f}" x2="{px:.2f}" '
            f'y2="{_TOP + plot_h + 5:.1f}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{px:.2f}" y="{_TOP + plot_h + 20:.1f}" font-size="12" '
            f'font-family="sans-serif" text-anchor="middle">{_fmt(t)}</text>'
        )
    for t in _ticks(ylo, yhi):
        py = sy(t)
        out.append(
            f'<line x1="{_LEFT - 5:.1f}" y1="{py:.2f}" x2="{_LEFT:.1f}" '
            f'y2="{py:.2f}" stroke="black" stroke-width="1"/>'
        )
        out.append(
            f'<text x="{_LEFT - 9:.1f}" y="{py + 4:.2f}" font-size="12" '
            f'font-family="sans-serif" text-anchor="end">{_fmt(t)}</text>'
        )
    if title:
        out.append(
            f'<text x="{_WIDTH / 2:.1f}" y="{_TOP - 14:.1f}" font-size="15" '
            f'font-family="sans-serif" text-anchor="middle">{title}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{_LEFT + plot_w / 2:.1f}" y="{_HEIGHT - 14:.1f}" font-size="13" '
            f'font-family="sans-serif" text-anchor="middle">{xlabel}</text>'
        )
    if ylabel:
        out.append(
            f'<text x="18" y="{_TOP + plot_h / 2:.1f}" font-size="13" '
            f'font-family="sans-serif" text-anchor="middle" '
            f'transform="rotate(-90 18 {_TOP + plot_h / 2:.1f})">{ylabel}</text>'
        )
    if model is not None:
        coords = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in zip(*model))
        out.append(
            f'<polyline points="{coords}" fill="none" stroke="{_MODEL_COLOR}" '
            'stroke-width="1.5"/>'
        )
    if points is not None:
        for x, y in zip(*points):
            out.append(
                f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" '
                f'fill="{_POINT_COLOR}" fill-opacity="0.85"/>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(
    points: tuple | None,
    model: tuple | None,
    path: str,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> None:
    """Write an SVG with scattered data points and/or a model polyline.

    ``points`` and ``model`` are (x, y) array pairs; either may be None or
    empty (but not both).  Identical inputs produce byte-identical files.

    Raises
    ------
    BadInput : nothing to draw.
    IoError : the file cannot be written.
    """
    svg = render_plot(points, model, title=title, xlabel=xlabel, ylabel=ylabel)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(svg)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
