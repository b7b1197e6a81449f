"""Standalone SVG line charts rendered straight from a results CSV.

Every curve is a ``<polyline>`` carrying ``data-series``, ``data-x`` and
``data-y`` attributes with the exact CSV strings, so values can be read back
from the file without inverting the pixel transform.
"""
import math
from pathlib import Path
from xml.sax.saxutils import quoteattr

from .experiment import read_csv

WIDTH, HEIGHT = 640, 420
MARGIN = dict(left=70, right=150, top=30, bottom=50)
PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")


def _finite(v):
    try:
        f = float(v)
    except (TypeError, ValueError):
        return None
    return f if math.isfinite(f) else None


class Axes:
    def __init__(self, xs, ys):
        self.x0, self.x1 = min(xs), max(xs)
        self.y0, self.y1 = min(ys), max(ys)
        if self.x1 == self.x0:
            self.x0, self.x1 = self.x0 - 1, self.x1 + 1
        pad = 0.05 * (self.y1 - self.y0 or 1.0)
        self.y0 -= pad
        self.y1 += pad
        self.pw = WIDTH - MARGIN["left"] - MARGIN["right"]
        self.ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def px(self, x):
        return MARGIN["left"] + (x - self.x0) / (self.x1 - self.x0) * self.pw

    def py(self, y):
        return MARGIN["top"] + (self.y1 - y) / (self.y1 - self.y0) * self.ph

    def inv_y(self, py):
        return self.y1 - (py - MARGIN["top"]) / self.ph * (self.y1 - self.y0)


def render(series, title, ylabel, path):
    """``series``: list of (name, [(log10 R, y_str)], dashed)."""
    xs = [x for _, pts, _ in series for x, _ in pts]
    ys = [float(y) for _, pts, _ in series for _, y in pts]
    axes = Axes(xs or [0.0, 1.0], ys or [0.0, 1.0])
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'data-y0="{axes.y0!r}" data-y1="{axes.y1!r}" data-x0="{axes.x0!r}" data-x1="{axes.x1!r}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="18" text-anchor="middle" font-size="14">{title}</text>',
        f'<rect x="{MARGIN["left"]}" y="{MARGIN["top"]}" width="{axes.pw}" height="{axes.ph}" '
        'fill="none" stroke="black"/>',
    ]
    for i in range(6):
        yv = axes.y0 + i * (axes.y1 - axes.y0) / 5
        out.append(f'<text x="{MARGIN["left"] - 6}" y="{axes.py(yv) + 4:.2f}" text-anchor="end" '
                   f'font-size="10">{yv:.2f}</text>')
        xv = axes.x0 + i * (axes.x1 - axes.x0) / 5
        out.append(f'<text x="{axes.px(xv):.2f}" y="{HEIGHT - MARGIN["bottom"] + 16}" text-anchor="middle" '
                   f'font-size="10">{10 ** xv:.3g}</text>')
    out.append(f'<text x="{MARGIN["left"] + axes.pw / 2}" y="{HEIGHT - 10}" text-anchor="middle" '
               'font-size="12">R = (tau_d+1)/(2 B_D+1)</text>')
    out.append(f'<text x="16" y="{MARGIN["top"] + axes.ph / 2}" font-size="12" '
               f'transform="rotate(-90 16 {MARGIN["top"] + axes.ph / 2})" text-anchor="middle">{ylabel}</text>')
    for i, (name, pts, dashed) in enumerate(series):
        color = PALETTE[i % len(PALETTE)]
        coords = " ".join(f"{axes.px(x):.4f},{axes.py(float(y)):.4f}" for x, y in pts)
        dash = ' stroke-dasharray="6,4"' if dashed else ""
        out.append(
            f'<polyline class="curve" data-series={quoteattr(name)} '
            f'data-x="{" ".join(repr(x) for x, _ in pts)}" data-y="{" ".join(y for _, y in pts)}" '
            f'points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>'
        )
        ly = MARGIN["top"] + 14 * (i + 1)
        lx = WIDTH - MARGIN["right"] + 10
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 20}" y2="{ly - 4}" stroke="{color}"{dash}/>')
        out.append(f'<text x="{lx + 25}" y="{ly}" font-size="11">{name}</text>')
    out.append("</svg>")
    Path(path).write_text("\n".join(out) + "\n")


def _by_method(rows, column):
    series = {}
    for r in rows:
        y = r.get(column, "")
        if not r["method"] or _finite(y) is None:
            continue
        series.setdefault(r["method"], []).append((math.log10(float(r["ratio"])), y))
    return [(m, sorted(pts), False) for m, pts in series.items()]


def _reference(rows, column, label):
    pts = {}
    for r in rows:
        if _finite(r.get(column)) is not None:
            pts[r["ratio"]] = (math.log10(float(r["ratio"])), r[column])
    return [(label, sorted(pts.values()), True)] if pts else []


def plot(results_csv, out_dir=None):
    """Write ``gain_vs_R.svg`` and ``sinr_vs_R.svg``; returns both paths."""
    results_csv = Path(results_csv)
    rows = read_csv(results_csv)
    out_dir = Path(out_dir) if out_dir else results_csv.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    gain_path = out_dir / "gain_vs_R.svg"
    sinr_path = out_dir / "sinr_vs_R.svg"
    render(_by_method(rows, "gain"), "Localization vs R", "gain", gain_path)
    sinr = _by_method(rows, "sinr_analytic_db")
    sinr += _reference(rows, "upper_db", "upper")
    sinr += _reference(rows, "lower_noblt_db", "lower")
    render(sinr, "SINR vs R", "SINR [dB]", sinr_path)
    return gain_path, sinr_path
