"""Minimal dependency-free SVG writer for semi-log convergence plots."""

from __future__ import annotations

import math

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
_WIDTH, _HEIGHT = 640, 480
_ML, _MR, _MT, _MB = 80, 24, 36, 56
_FLOOR = 1e-300


def write_semilog_svg(path, series, xlabel: str = "W",
                      ylabel: str = "relative error (%)", title: str = ""):
    """Write a semi-log (log10 y) line plot.

    `series` is a list of (label, xs, ys) triples with positive-or-zero ys;
    zeros are clamped to a tiny floor before taking logs.
    """
    if not series:
        raise ValueError("nothing to plot")
    xs_all = [x for _, xs, _ in series for x in xs]
    logy_all = [math.log10(max(y, _FLOOR)) for _, _, ys in series for y in ys]
    x_lo, x_hi = min(xs_all), max(xs_all)
    if x_lo == x_hi:
        x_lo, x_hi = x_lo - 1.0, x_hi + 1.0
    y_lo = math.floor(min(logy_all))
    y_hi = math.ceil(max(logy_all))
    if y_lo == y_hi:
        y_lo, y_hi = y_lo - 1, y_hi + 1

    plot_w = _WIDTH - _ML - _MR
    plot_h = _HEIGHT - _MT - _MB

    def px(x):
        return _ML + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(logy):
        return _MT + (y_hi - logy) / (y_hi - y_lo) * plot_h

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect width="{_WIDTH}" height="{_HEIGHT}" fill="white"/>',
        f'<rect x="{_ML}" y="{_MT}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{_WIDTH / 2:.1f}" y="{_MT - 12}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="14">{title}</text>')

    # y ticks at integer decades (thinned to at most ~10 labels)
    step = max(1, (y_hi - y_lo) // 10 + (1 if (y_hi - y_lo) % 10 else 0))
    for d in range(y_lo, y_hi + 1, step):
        y = py(d)
        parts.append(f'<line x1="{_ML - 5}" y1="{y:.1f}" x2="{_ML}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_ML - 9}" y="{y + 4:.1f}" text-anchor="end" '
                     f'font-family="sans-serif" font-size="11">1e{d}</text>')

    xticks = sorted(set(xs_all))
    if len(xticks) > 12:
        stride = (len(xticks) + 11) // 12
        xticks = xticks[::stride]
    for xv in xticks:
        x = px(xv)
        parts.append(f'<line x1="{x:.1f}" y1="{_MT + plot_h}" x2="{x:.1f}" '
                     f'y2="{_MT + plot_h + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{_MT + plot_h + 18}" text-anchor="middle" '
                     f'font-family="sans-serif" font-size="11">{xv:g}</text>')

    parts.append(f'<text x="{_ML + plot_w / 2:.1f}" y="{_HEIGHT - 14}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13">{xlabel}</text>')
    parts.append(f'<text x="20" y="{_MT + plot_h / 2:.1f}" text-anchor="middle" '
                 f'font-family="sans-serif" font-size="13" '
                 f'transform="rotate(-90 20 {_MT + plot_h / 2:.1f})">{ylabel}</text>')

    for i, (label, xs, ys) in enumerate(series):
        color = _COLORS[i % len(_COLORS)]
        pts = " ".join(f"{px(x):.2f},{py(math.log10(max(y, _FLOOR))):.2f}"
                       for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        ly = _MT + 16 + 16 * i
        lx = _ML + plot_w - 150
        parts.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 30}" y="{ly}" font-family="sans-serif" '
                     f'font-size="11">{label}</text>')

    parts.append("</svg>")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")
