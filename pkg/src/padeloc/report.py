"""CSV and SVG output for power curves."""

from __future__ import annotations

import csv
import math
from collections import OrderedDict
from xml.sax.saxutils import escape

from .sim import CSV_FIELDS

__all__ = ["format_value", "emit_csv", "emit_svg", "read_points_csv"]

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f")

WIDTH, HEIGHT = 640, 420
LEFT, RIGHT, TOP, BOTTOM = 70, 190, 30, 60


def format_value(v):
    """Shortest round-trip text for floats, plain text otherwise."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit_csv(rows, path):
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_FIELDS)
        for row in rows:
            writer.writerow([format_value(v) for v in row.values()])


def _fmt(x):
    return f"{x:.2f}"


def emit_svg(rows, path, title=None):
    """Power (linear, [0, 1]) against SNR (log10) with one polyline per (statistic, test).

    Rows with ``snr <= 0`` cannot be placed on a log axis and are skipped.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to write")
    pos = [r for r in rows if r.snr > 0]
    if pos:
        lo = math.log10(min(r.snr for r in pos))
        hi = math.log10(max(r.snr for r in pos))
    else:
        lo, hi = -2.0, 1.0
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    pw = WIDTH - LEFT - RIGHT
    ph = HEIGHT - TOP - BOTTOM

    def px(snr):
        return LEFT + (math.log10(snr) - lo) / (hi - lo) * pw

    def py(power):
        return TOP + (1.0 - power) * ph

    curves = OrderedDict()
    for r in pos:
        curves.setdefault((r.statistic, r.test), []).append(r)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    if title:
        out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{TOP - 10}" text-anchor="middle">{escape(title)}</text>')
    for k in range(6):
        v = k / 5
        y = py(v)
        out.append(f'<line x1="{LEFT - 5}" y1="{_fmt(y)}" x2="{LEFT}" y2="{_fmt(y)}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{_fmt(y + 4)}" text-anchor="end">{v:.1f}</text>')
    for e in range(math.floor(lo), math.ceil(hi) + 1):
        if lo - 1e-9 <= e <= hi + 1e-9:
            x = px(10.0**e)
            out.append(f'<line x1="{_fmt(x)}" y1="{TOP + ph}" x2="{_fmt(x)}" y2="{TOP + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{_fmt(x)}" y="{TOP + ph + 18}" text-anchor="middle">1e{e}</text>')
    out.append(f'<text x="{LEFT + pw / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">SNR (log scale)</text>')
    out.append(
        f'<text x="18" y="{TOP + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {TOP + ph / 2:.2f})">power</text>'
    )
    for idx, ((stat, test), pts) in enumerate(curves.items()):
        color = _PALETTE[idx % len(_PALETTE)]
        pts = sorted(pts, key=lambda r: r.snr)
        coords = " ".join(f"{_fmt(px(r.snr))},{_fmt(py(r.power))}" for r in pts)
        out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{coords}"/>')
        ly = TOP + 15 + 18 * idx
        lx = LEFT + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 32}" y="{ly + 4}">{escape(stat)} / {escape(test)}</text>')
    out.append("</svg>")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(out) + "\n")


def read_points_csv(path):
    """Read ``re,im`` rows (optional header) into a list of pairs."""
    pts = []
    with open(path, newline="") as fh:
        for i, rec in enumerate(csv.reader(fh)):
            if not rec or not "".join(rec).strip():
                continue
            try:
                pts.append((float(rec[0]), float(rec[1])))
            except (ValueError, IndexError):
                if i == 0:
                    continue
                raise ValueError(f"{path}: line {i + 1}: expected 're,im', got {rec!r}") from None
    return pts
