"""Minimal SVG output: line charts and heatmaps without a plotting library."""

import math
from xml.sax.saxutils import escape

import numpy as np

BLUE = "#2166AC"
WHITE = "#FFFFFF"
RED = "#B2182B"
SHADE = "#D1E5F0"
SERIES_COLORS = ("#1B9E77", "#D95F02", "#7570B3", "#E7298A", "#66A61E", "#E6AB02")

WIDTH, HEIGHT = 640, 480
LEFT, RIGHT, TOP, BOTTOM = 80, 120, 40, 60


def _rgb(hex_color):
    h = hex_color.lstrip("#")
    return np.array([int(h[i:i + 2], 16) for i in (0, 2, 4)], dtype=float)


def _hex(rgb):
    return "#" + "".join(f"{int(round(c)):02X}" for c in rgb)


def _blend(c0, c1, t):
    t = min(max(t, 0.0), 1.0)
    return _hex((1 - t) * _rgb(c0) + t * _rgb(c1))


def diverging_color(value, vmax):
    """Blue below zero, white at zero, red above; saturates at ``+-vmax``."""
    if not math.isfinite(value):
        return "#7F7F7F"
    if vmax <= 0:
        return WHITE
    t = value / vmax
    if t >= 0:
        return _blend(WHITE, RED, t)
    return _blend(WHITE, BLUE, -t)


def sequential_color(value, vmin, vmax):
    """White at ``vmin`` to red at ``vmax``."""
    if not math.isfinite(value):
        return "#7F7F7F"
    span = vmax - vmin
    return _blend(WHITE, RED, (value - vmin) / span if span > 0 else 0.0)


def _fmt(v):
    return f"{v:.2f}"


def _label(v):
    return f"{v:.3g}"


def _ticks(lo, hi, log=False, n=5):
    if log:
        k0, k1 = math.floor(math.log10(lo)), math.ceil(math.log10(hi))
        ticks = [10.0**k for k in range(k0, k1 + 1) if lo <= 10.0**k <= hi]
        return ticks or [lo, hi]
    return [float(t) for t in np.linspace(lo, hi, n)]


class _Frame:
    """Maps data coordinates into the plotting rectangle."""

    def __init__(self, xlim, ylim, logx=False):
        self.logx = logx
        self.x0, self.x1 = (math.log10(v) for v in xlim) if logx else xlim
        self.y0, self.y1 = ylim
        if self.y1 == self.y0:
            self.y0, self.y1 = self.y0 - 1, self.y1 + 1
        self.w = WIDTH - LEFT - RIGHT
        self.h = HEIGHT - TOP - BOTTOM

    def px(self, x):
        u = math.log10(x) if self.logx else x
        return LEFT + (u - self.x0) / (self.x1 - self.x0) * self.w

    def py(self, y):
        return TOP + (self.y1 - y) / (self.y1 - self.y0) * self.h


def _document(body, title):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">'
    )
    title_el = f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>'
    return "\n".join([head, title_el] + body + ["</svg>"]) + "\n"


def _axes(frame, xticks, yticks, xlabel, ylabel):
    out = [
        f'<rect x="{LEFT}" y="{TOP}" width="{frame.w}" height="{frame.h}" '
        'fill="none" stroke="black"/>'
    ]
    base = TOP + frame.h
    for t in xticks:
        x = _fmt(frame.px(t))
        out.append(f'<line x1="{x}" y1="{base}" x2="{x}" y2="{base + 5}" stroke="black"/>')
        out.append(f'<text x="{x}" y="{base + 18}" text-anchor="middle">{_label(t)}</text>')
    for t in yticks:
        y = _fmt(frame.py(t))
        out.append(f'<line x1="{LEFT - 5}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y}" text-anchor="end" dominant-baseline="middle">{_label(t)}</text>')
    out.append(
        f'<text x="{LEFT + frame.w / 2}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="20" y="{TOP + frame.h / 2}" text-anchor="middle" '
        f'transform="rotate(-90 20 {TOP + frame.h / 2})">{escape(ylabel)}</text>'
    )
    return out


def line_chart(series, title="", xlabel="", ylabel="", logx=False, shaded=()):
    """Line chart of ``series = [(label, xs, ys), ...]``.

    ``shaded`` lists ``(x_lo, x_hi)`` bands drawn behind the curves.
    """
    xs_all = [x for _, xs, _ in series for x in xs]
    ys_all = [y for _, _, ys in series for y in ys if math.isfinite(y)]
    xlim = (min(xs_all), max(xs_all))
    ylim = (min(ys_all), max(ys_all)) if ys_all else (0.0, 1.0)
    frame = _Frame(xlim, ylim, logx)
    body = []
    for lo, hi in shaded:
        x0, x1 = frame.px(lo), frame.px(hi)
        body.append(
            f'<rect x="{_fmt(x0)}" y="{TOP}" width="{_fmt(max(x1 - x0, 1.0))}" '
            f'height="{frame.h}" fill="{SHADE}"/>'
        )
    body += _axes(frame, _ticks(*xlim, log=logx), _ticks(frame.y0, frame.y1), xlabel, ylabel)
    for i, (label, xs, ys) in enumerate(series):
        color = SERIES_COLORS[i % len(SERIES_COLORS)]
        pts = [(frame.px(x), frame.py(y)) for x, y in zip(xs, ys) if math.isfinite(y)]
        if not pts:
            continue
        d = "M" + " L".join(f"{_fmt(u)},{_fmt(w)}" for u, w in pts)
        body.append(f'<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = TOP + 15 + 18 * i
        lx = WIDTH - RIGHT + 10
        body.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        body.append(f'<text x="{lx + 25}" y="{ly}" dominant-baseline="middle">{escape(label)}</text>')
    return _document(body, title)


def heatmap(xs, ys, values, title="", xlabel="", ylabel="", palette="diverging"):
    """Heatmap of ``values[i][j]`` at ``(xs[i], ys[j])``; x runs right, y up.

    ``palette="diverging"`` centres white at zero with a symmetric range;
    ``"sequential"`` runs white to red from the minimum to the maximum.
    """
    z = np.asarray(values, dtype=float)
    finite = z[np.isfinite(z)]
    frame = _Frame((min(xs), max(xs)), (min(ys), max(ys)))
    nx, ny = len(xs), len(ys)
    cw, ch = frame.w / nx, frame.h / ny
    if palette == "diverging":
        vmax = float(np.max(np.abs(finite))) if finite.size else 0.0
        vmin = -vmax

        def color(v):
            return diverging_color(v, vmax)
    else:
        vmin = float(np.min(finite)) if finite.size else 0.0
        vmax = float(np.max(finite)) if finite.size else 1.0

        def color(v):
            return sequential_color(v, vmin, vmax)

    body = []
    for i in range(nx):
        for j in range(ny):
            x = LEFT + i * cw
            y = TOP + (ny - 1 - j) * ch
            body.append(
                f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(cw + 0.3)}" '
                f'height="{_fmt(ch + 0.3)}" fill="{color(z[i, j])}"/>'
            )
    # Cell centres are at the grid values; ticks use the same mapping.
    tick_frame = _Frame(
        (xs[0] - (xs[-1] - xs[0]) / (2 * (nx - 1)), xs[-1] + (xs[-1] - xs[0]) / (2 * (nx - 1))),
        (ys[0] - (ys[-1] - ys[0]) / (2 * (ny - 1)), ys[-1] + (ys[-1] - ys[0]) / (2 * (ny - 1))),
    )
    body += _axes(tick_frame, _ticks(xs[0], xs[-1]), _ticks(ys[0], ys[-1]), xlabel, ylabel)
    body += _colorbar(vmin, vmax, color)
    return _document(body, title)


def _colorbar(vmin, vmax, color, steps=50):
    x = WIDTH - RIGHT + 30
    h = (HEIGHT - TOP - BOTTOM) / steps
    out = []
    for k in range(steps):
        v = vmax - (k + 0.5) * (vmax - vmin) / steps
        out.append(
            f'<rect x="{x}" y="{_fmt(TOP + k * h)}" width="20" height="{_fmt(h + 0.3)}" fill="{color(v)}"/>'
        )
    out.append(f'<text x="{x + 25}" y="{TOP + 5}">{_label(vmax)}</text>')
    out.append(f'<text x="{x + 25}" y="{HEIGHT - BOTTOM}">{_label(vmin)}</text>')
    return out


def _shaded_bands(xs, flags):
    bands = []
    start = None
    for i, flag in enumerate(flags):
        if flag and start is None:
            start = i
        if not flag and start is not None:
            bands.append((xs[start], xs[i - 1]))
            start = None
    if start is not None:
        bands.append((xs[start], xs[-1]))
    return bands


def render_dataset(dataset):
    """SVG for a sweep: heatmap for two surface axes, line chart otherwise."""
    from .sweep import PLOT_COLUMN

    spec = dataset.spec
    column = PLOT_COLUMN[spec.target]
    values = dataset.column(column)
    title = f"{spec.name or spec.target} ({spec.coupling.value}): {column}"
    first = spec.axes[0]
    xs = first.values()
    if spec.target in ("p0_surface", "work_surface", "classical_otto_surface"):
        ys = spec.axes[1].values()
        grid = np.array(values, dtype=float).reshape(len(xs), len(ys))
        palette = "sequential" if column == "p0" else "diverging"
        return heatmap(xs, ys, grid, title, first.name, spec.axes[1].name, palette)

    logx = first.scale == "log"
    if len(spec.axes) == 1:
        series = [(column, xs, values)]
        groups = [list(range(len(xs)))]
    else:
        inner = spec.axes[1].values()
        n = len(inner)
        series = [
            (f"{spec.axes[1].name}={_label(w)}", xs, values[j::n]) for j, w in enumerate(inner)
        ]
        groups = [list(range(i * n, (i + 1) * n)) for i in range(len(xs))]
    shaded = ()
    if "flagged" in dataset.columns:
        flags = dataset.column("flagged")
        shaded = _shaded_bands(xs, [any(flags[k] for k in g) for g in groups])
    return line_chart(series, title, first.name, column, logx, shaded)
