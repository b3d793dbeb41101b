"""Minimal deterministic SVG line charts from tabular rows.

No plotting dependency: the output is a self-contained SVG whose bytes
depend only on the input rows and the spec, so charts can be golden-file
tested.  One polyline (plus circle markers) per series value; optional
faceting into side-by-side panels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"]

_PANEL_W = 360
_PANEL_H = 300
_MARGIN_L = 56
_MARGIN_R = 16
_MARGIN_T = 34
_MARGIN_B = 44
_LEGEND_H = 22


@dataclass(frozen=True)
class PlotSpec:
    """What to draw: x/y columns, one line per ``series`` value, optional facet column."""

    x: str
    y: str
    series: str
    facet: str | None = None
    title: str | None = None


def _num(text: str) -> float | None:
    if text is None or text == "":
        return None
    try:
        return float(text)
    except ValueError:
        return None


def _fmt(v: float) -> str:
    return f"{v:.6g}"


def _ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    import math
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / target))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= target:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(round(t, 12))
        t += step
    return ticks


def render_chart(rows: list[dict], spec: PlotSpec) -> str:
    """Render rows (dicts of strings, e.g. from csv.DictReader) to SVG text."""
    for col in [spec.x, spec.y, spec.series] + ([spec.facet] if spec.facet else []):
        if rows and col not in rows[0]:
            raise ConfigError(f"missing column {col!r} in input")

    points = []
    for row in rows:
        x, y = _num(row.get(spec.x)), _num(row.get(spec.y))
        if x is None or y is None:
            continue
        facet = row.get(spec.facet, "") if spec.facet else ""
        points.append((facet, str(row.get(spec.series, "")), x, y))
    if not points:
        raise ConfigError("no data rows")

    facets = sorted({p[0] for p in points})
    series = sorted({p[1] for p in points})
    colors = {s: _PALETTE[i % len(_PALETTE)] for i, s in enumerate(series)}

    xs = [p[2] for p in points]
    ys = [p[3] for p in points]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if x_hi == x_lo:
        x_lo, x_hi = x_lo - 0.5, x_hi + 0.5
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5

    width = len(facets) * _PANEL_W
    height = _PANEL_H + _LEGEND_H
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">']
    out.append(f'<rect width="{width}" height="{height}" fill="white"/>')

    plot_w = _PANEL_W - _MARGIN_L - _MARGIN_R
    plot_h = _PANEL_H - _MARGIN_T - _MARGIN_B

    def sx(x: float, panel: int) -> float:
        return panel * _PANEL_W + _MARGIN_L + (x - x_lo) / (x_hi - x_lo) * plot_w

    def sy(y: float) -> float:
        return _MARGIN_T + (y_hi - y) / (y_hi - y_lo) * plot_h

    for pi, facet in enumerate(facets):
        left = pi * _PANEL_W + _MARGIN_L
        out.append(f'<rect x="{left}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
                   f'fill="none" stroke="#444"/>')
        title = spec.title or ""
        if spec.facet:
            title = f"{title + ' ' if title else ''}{spec.facet}={facet}"
        if title:
            out.append(f'<text x="{left + plot_w / 2:.6g}" y="{_MARGIN_T - 12}" '
                       f'text-anchor="middle" font-weight="bold">{title}</text>')
        for t in _ticks(x_lo, x_hi):
            px = sx(t, pi)
            out.append(f'<line x1="{px:.6g}" y1="{_MARGIN_T + plot_h}" x2="{px:.6g}" '
                       f'y2="{_MARGIN_T + plot_h + 4}" stroke="#444"/>')
            out.append(f'<text x="{px:.6g}" y="{_MARGIN_T + plot_h + 16}" '
                       f'text-anchor="middle">{_fmt(t)}</text>')
        for t in _ticks(y_lo, y_hi):
            py = sy(t)
            out.append(f'<line x1="{left - 4}" y1="{py:.6g}" x2="{left}" y2="{py:.6g}" '
                       f'stroke="#444"/>')
            out.append(f'<text x="{left - 6}" y="{py + 3:.6g}" text-anchor="end">{_fmt(t)}</text>')
        out.append(f'<text x="{left + plot_w / 2:.6g}" y="{_PANEL_H - 8}" '
                   f'text-anchor="middle">{spec.x}</text>')
        out.append(f'<text x="{pi * _PANEL_W + 14}" y="{_MARGIN_T + plot_h / 2:.6g}" '
                   f'text-anchor="middle" transform="rotate(-90 {pi * _PANEL_W + 14} '
                   f'{_MARGIN_T + plot_h / 2:.6g})">{spec.y}</text>')

        for s in series:
            pts = sorted([(x, y) for f, sv, x, y in points if f == facet and sv == s])
            if not pts:
                continue
            coords = " ".join(f"{sx(x, pi):.6g},{sy(y):.6g}" for x, y in pts)
            if len(pts) > 1:
                out.append(f'<polyline points="{coords}" fill="none" '
                           f'stroke="{colors[s]}" stroke-width="1.5"/>')
            for x, y in pts:
                out.append(f'<circle cx="{sx(x, pi):.6g}" cy="{sy(y):.6g}" r="2.5" '
                           f'fill="{colors[s]}"/>')

    lx = _MARGIN_L
    ly = _PANEL_H + _LEGEND_H / 2
    for s in series:
        out.append(f'<line x1="{lx}" y1="{ly:.6g}" x2="{lx + 18}" y2="{ly:.6g}" '
                   f'stroke="{colors[s]}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 22}" y="{ly + 3:.6g}">{s}</text>')
        lx += 30 + 7 * len(s)
    out.append("</svg>")
    return "\n".join(out) + "\n"
