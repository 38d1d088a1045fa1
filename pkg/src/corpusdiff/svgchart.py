"""Self-contained SVG time-series charts.

One chart shows, per source: raw yearly points, a smoothed overlay with
its confidence band, and grey vertical bands over years where the
between-source difference was not significant. Pure string assembly, no
rendering dependency; output is stable byte-for-byte for fixed input.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from xml.sax.saxutils import escape

SOURCE_COLORS = ("#d95f02", "#1b9e77", "#7570b3", "#e7298a")


@dataclass
class RawSeries:
    name: str
    color: str
    x: list[float]
    y: list[float]


@dataclass
class SmoothOverlay:
    name: str
    color: str
    x: list[float]
    fitted: list[float]
    lower: list[float]
    upper: list[float]


@dataclass
class ChartSpec:
    title: str
    x_label: str
    y_label: str
    series: list[RawSeries] = field(default_factory=list)
    overlays: list[SmoothOverlay] = field(default_factory=list)
    shaded_years: list[int] = field(default_factory=list)


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def render_svg(spec: ChartSpec, width: int = 720, height: int = 420) -> str:
    """Render the chart as a standalone SVG document string."""
    margin_left, margin_right, margin_top, margin_bottom = 64, 20, 40, 48
    plot_w = width - margin_left - margin_right
    plot_h = height - margin_top - margin_bottom

    xs = [v for s in spec.series for v in s.x]
    xs += [v for o in spec.overlays for v in o.x]
    ys = [v for s in spec.series for v in s.y]
    for o in spec.overlays:
        ys += list(o.lower) + list(o.upper)
    if not xs or not ys:
        raise ValueError("chart has no data")
    x_lo, x_hi = min(xs) - 0.5, max(xs) + 0.5
    y_lo, y_hi = min(ys), max(ys)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.05 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad

    def px(x: float) -> float:
        return margin_left + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return margin_top + (y_hi - y) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{escape(spec.title)}</text>',
    ]

    # Non-significant years shaded first, behind everything else.
    for year in sorted(spec.shaded_years):
        x0, x1 = px(year - 0.5), px(year + 0.5)
        parts.append(
            f'<rect x="{_fmt(x0)}" y="{margin_top}" width="{_fmt(x1 - x0)}" '
            f'height="{plot_h}" fill="#cccccc" fill-opacity="0.5" '
            f'data-year="{year}"/>'
        )

    # Axes.
    parts.append(
        f'<line x1="{margin_left}" y1="{margin_top + plot_h}" '
        f'x2="{margin_left + plot_w}" y2="{margin_top + plot_h}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{margin_left}" y1="{margin_top}" '
        f'x2="{margin_left}" y2="{margin_top + plot_h}" stroke="black"/>'
    )
    years = sorted({round(v) for s in spec.series for v in s.x})
    for year in years:
        parts.append(
            f'<text x="{_fmt(px(year))}" y="{margin_top + plot_h + 18}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="10">'
            f"{year}</text>"
        )
    for tick in _ticks(y_lo, y_hi):
        parts.append(
            f'<text x="{margin_left - 6}" y="{_fmt(py(tick) + 3)}" '
            f'text-anchor="end" font-family="sans-serif" font-size="10">'
            f"{tick:.4g}</text>"
        )
    parts.append(
        f'<text x="{width / 2:.0f}" y="{height - 8}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{escape(spec.x_label)}</text>'
    )
    parts.append(
        f'<text x="16" y="{height / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {height / 2:.0f})">{escape(spec.y_label)}</text>'
    )

    # Confidence bands, then smoothed lines, then raw points.
    for overlay in spec.overlays:
        band = [(px(x), py(u)) for x, u in zip(overlay.x, overlay.upper)]
        band += [
            (px(x), py(lo_v))
            for x, lo_v in reversed(list(zip(overlay.x, overlay.lower)))
        ]
        pts = " ".join(f"{_fmt(a)},{_fmt(b)}" for a, b in band)
        parts.append(
            f'<polygon points="{pts}" fill="{overlay.color}" fill-opacity="0.18"/>'
        )
    for overlay in spec.overlays:
        pts = " ".join(
            f"{_fmt(px(x))},{_fmt(py(v))}" for x, v in zip(overlay.x, overlay.fitted)
        )
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{overlay.color}" '
            f'stroke-width="2"/>'
        )
    for series in spec.series:
        for x, v in zip(series.x, series.y):
            parts.append(
                f'<circle cx="{_fmt(px(x))}" cy="{_fmt(py(v))}" r="3" '
                f'fill="{series.color}"/>'
            )

    # Legend.
    legend_y = margin_top + 6
    for i, series in enumerate(spec.series):
        y0 = legend_y + 16 * i
        parts.append(
            f'<circle cx="{margin_left + plot_w - 120}" cy="{y0}" r="4" '
            f'fill="{series.color}"/>'
        )
        parts.append(
            f'<text x="{margin_left + plot_w - 110}" y="{y0 + 4}" '
            f'font-family="sans-serif" font-size="11">{escape(series.name)}</text>'
        )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
