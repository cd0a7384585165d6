"""Minimal hand-rolled SVG scatter plots: transfer score against alignment,
one glyph shape per model and one color per language. No plotting dependency;
output is deterministic for identical input."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import atomic_write_bytes

_GLYPHS = ("circle", "square", "triangle", "diamond", "cross")
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")

_WIDTH, _HEIGHT = 640, 480
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 64, 168, 32, 48


@dataclass(frozen=True)
class ScatterPoint:
    x: float
    y: float
    model: str
    language: str


def _fmt(v: float) -> str:
    return format(v, ".6g")


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return [lo + (hi - lo) * k / (count - 1) for k in range(count)]


def _marker(glyph: str, x: float, y: float, color: str) -> str:
    attrs = f'class="marker" fill="{color}" stroke="black" stroke-width="0.5"'
    r = 4.5
    if glyph == "circle":
        return f'<circle {attrs} cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}"/>'
    if glyph == "square":
        return (
            f'<rect {attrs} x="{_fmt(x - r)}" y="{_fmt(y - r)}" '
            f'width="{2 * r}" height="{2 * r}"/>'
        )
    if glyph == "triangle":
        pts = f"{_fmt(x)},{_fmt(y - r)} {_fmt(x - r)},{_fmt(y + r)} {_fmt(x + r)},{_fmt(y + r)}"
        return f'<polygon {attrs} points="{pts}"/>'
    if glyph == "diamond":
        pts = f"{_fmt(x)},{_fmt(y - r)} {_fmt(x + r)},{_fmt(y)} {_fmt(x)},{_fmt(y + r)} {_fmt(x - r)},{_fmt(y)}"
        return f'<polygon {attrs} points="{pts}"/>'
    # cross
    pts = (
        f"M {_fmt(x - r)} {_fmt(y - r)} L {_fmt(x + r)} {_fmt(y + r)} "
        f"M {_fmt(x - r)} {_fmt(y + r)} L {_fmt(x + r)} {_fmt(y - r)}"
    )
    return f'<path class="marker" stroke="{color}" stroke-width="2" fill="none" d="{pts}"/>'


def render_scatter(
    points: list[ScatterPoint],
    x_label: str = "alignment",
    y_label: str = "transfer",
    title: str = "",
) -> str:
    """Render the scatter as an SVG document string."""
    models = sorted({p.model for p in points})
    languages = sorted({p.language for p in points})
    glyph_of = {m: _GLYPHS[i % len(_GLYPHS)] for i, m in enumerate(models)}
    color_of = {l: _COLORS[i % len(_COLORS)] for i, l in enumerate(languages)}

    xs = [p.x for p in points] or [0.0]
    ys = [p.y for p in points] or [0.0]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    x_pad = (x_hi - x_lo) * 0.05 or 0.5
    y_pad = (y_hi - y_lo) * 0.05 or 0.5
    x_lo, x_hi = x_lo - x_pad, x_hi + x_pad
    y_lo, y_hi = y_lo - y_pad, y_hi + y_pad

    plot_w = _WIDTH - _MARGIN_L - _MARGIN_R
    plot_h = _HEIGHT - _MARGIN_T - _MARGIN_B

    def sx(v: float) -> float:
        return _MARGIN_L + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _MARGIN_T + plot_h - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_MARGIN_L}" y="{_MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#444"/>',
    ]
    if title:
        parts.append(
            f'<text x="{_MARGIN_L + plot_w / 2}" y="{_MARGIN_T - 10}" '
            f'text-anchor="middle" font-size="13">{title}</text>'
        )
    for tick in _ticks(x_lo, x_hi):
        px = sx(tick)
        parts.append(
            f'<line x1="{_fmt(px)}" y1="{_MARGIN_T + plot_h}" '
            f'x2="{_fmt(px)}" y2="{_MARGIN_T + plot_h + 5}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{_fmt(px)}" y="{_MARGIN_T + plot_h + 18}" '
            f'text-anchor="middle">{format(tick, ".3g")}</text>'
        )
    for tick in _ticks(y_lo, y_hi):
        py = sy(tick)
        parts.append(
            f'<line x1="{_MARGIN_L - 5}" y1="{_fmt(py)}" '
            f'x2="{_MARGIN_L}" y2="{_fmt(py)}" stroke="#444"/>'
        )
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{_fmt(py + 4)}" '
            f'text-anchor="end">{format(tick, ".3g")}</text>'
        )
    parts.append(
        f'<text x="{_MARGIN_L + plot_w / 2}" y="{_HEIGHT - 10}" '
        f'text-anchor="middle">{x_label}</text>'
    )
    parts.append(
        f'<text x="16" y="{_MARGIN_T + plot_h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 16 {_MARGIN_T + plot_h / 2})">{y_label}</text>'
    )

    for p in points:
        parts.append(_marker(glyph_of[p.model], sx(p.x), sy(p.y), color_of[p.language]))

    legend_x = _MARGIN_L + plot_w + 16
    legend_y = _MARGIN_T + 8
    parts.append(f'<text x="{legend_x}" y="{legend_y}" font-weight="bold">models</text>')
    for i, m in enumerate(models):
        y = legend_y + 16 * (i + 1)
        parts.append(_marker(glyph_of[m], legend_x + 6, y - 4, "#777").replace('class="marker" ', ""))
        parts.append(f'<text x="{legend_x + 18}" y="{y}">{m}</text>')
    lang_y = legend_y + 16 * (len(models) + 2)
    parts.append(f'<text x="{legend_x}" y="{lang_y}" font-weight="bold">languages</text>')
    for i, l in enumerate(languages):
        y = lang_y + 16 * (i + 1)
        parts.append(
            f'<rect x="{legend_x}" y="{y - 9}" width="12" height="12" fill="{color_of[l]}"/>'
        )
        parts.append(f'<text x="{legend_x + 18}" y="{y}">{l}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_scatter_svg(
    path: str,
    points: list[ScatterPoint],
    x_label: str = "alignment",
    y_label: str = "transfer",
    title: str = "",
) -> None:
    atomic_write_bytes(path, render_scatter(points, x_label, y_label, title).encode("utf-8"))
