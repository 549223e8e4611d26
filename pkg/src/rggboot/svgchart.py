"""Minimal single-file SVG line chart (stdlib only)."""

from __future__ import annotations

import math
import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import ParameterError

WIDTH, HEIGHT = 720, 440
MARGIN = {"left": 70, "right": 150, "top": 30, "bottom": 55}
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
MARKER_STYLE = {"p'": "#555555", "p''": "#000000"}


def _ticks_linear(lo, hi, count=5):
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * i / count for i in range(count + 1)]


def _ticks_log(lo, hi):
    return [10.0 ** k for k in range(math.floor(math.log10(lo)), math.ceil(math.log10(hi)) + 1)]


def emit_chart(series, bounds=None, path="chart.svg", log_x: bool = True, title: str = "",
               y_field: str = "full_fraction") -> None:
    """Plot ``y_field`` against p for each series, with dashed verticals at the bounds.

    ``series`` is a list of sweep rows or a mapping label -> rows.
    ``bounds`` is a :class:`ThresholdBounds`, a dict of label -> x, or None.
    """
    if not isinstance(series, dict):
        series = {"fully active": series}
    if not series or not any(series.values()):
        raise ParameterError("no rows to plot")
    if bounds is None:
        markers = {}
    elif isinstance(bounds, dict):
        markers = dict(bounds)
    else:
        markers = {"p'": bounds.p_prime, "p''": bounds.p_double_prime}

    pts = {k: [(r.p, getattr(r, y_field)) for r in rows if not log_x or r.p > 0] for k, rows in series.items()}
    xs = [x for v in pts.values() for x, _ in v] + [m for m in markers.values() if not log_x or m > 0]
    if not xs:
        raise ParameterError("nothing to plot on a log axis")
    x_lo, x_hi = min(xs), max(xs)
    if x_lo == x_hi:
        x_lo, x_hi = (x_lo / 2, x_hi * 2) if log_x else (x_lo - 0.5, x_hi + 0.5)
    if log_x:
        x_lo, x_hi = 10.0 ** math.floor(math.log10(x_lo)), 10.0 ** math.ceil(math.log10(x_hi))
        fx = lambda x: math.log10(x)
    else:
        fx = lambda x: x

    pw = WIDTH - MARGIN["left"] - MARGIN["right"]
    ph = HEIGHT - MARGIN["top"] - MARGIN["bottom"]

    def sx(x):
        return MARGIN["left"] + pw * (fx(x) - fx(x_lo)) / (fx(x_hi) - fx(x_lo))

    def sy(y):
        return MARGIN["top"] + ph * (1.0 - y)

    svg = ET.Element("svg", xmlns="http://www.w3.org/2000/svg", width=str(WIDTH), height=str(HEIGHT),
                     viewBox=f"0 0 {WIDTH} {HEIGHT}")
    ET.SubElement(svg, "rect", x="0", y="0", width=str(WIDTH), height=str(HEIGHT), fill="white")
    if title:
        t = ET.SubElement(svg, "text", x=str(WIDTH / 2), y="18", attrib={"text-anchor": "middle", "font-size": "14"})
        t.text = title

    axes = ET.SubElement(svg, "g", stroke="black", attrib={"stroke-width": "1", "font-size": "11"})
    x0, x1, y0, y1 = sx(x_lo), sx(x_hi), sy(0), sy(1)
    ET.SubElement(axes, "line", x1=f"{x0:.2f}", y1=f"{y0:.2f}", x2=f"{x1:.2f}", y2=f"{y0:.2f}")
    ET.SubElement(axes, "line", x1=f"{x0:.2f}", y1=f"{y0:.2f}", x2=f"{x0:.2f}", y2=f"{y1:.2f}")
    for tx in (_ticks_log(x_lo, x_hi) if log_x else _ticks_linear(x_lo, x_hi)):
        X = sx(tx)
        ET.SubElement(axes, "line", x1=f"{X:.2f}", y1=f"{y0:.2f}", x2=f"{X:.2f}", y2=f"{y0 + 5:.2f}")
        lab = ET.SubElement(axes, "text", x=f"{X:.2f}", y=f"{y0 + 18:.2f}", stroke="none",
                            attrib={"text-anchor": "middle"})
        lab.text = f"{tx:.0e}" if log_x else f"{tx:.3g}"
    for ty in _ticks_linear(0.0, 1.0):
        Y = sy(ty)
        ET.SubElement(axes, "line", x1=f"{x0 - 5:.2f}", y1=f"{Y:.2f}", x2=f"{x0:.2f}", y2=f"{Y:.2f}")
        lab = ET.SubElement(axes, "text", x=f"{x0 - 8:.2f}", y=f"{Y + 4:.2f}", stroke="none",
                            attrib={"text-anchor": "end"})
        lab.text = f"{100 * ty:.0f}%"
    xl = ET.SubElement(svg, "text", x=f"{(x0 + x1) / 2:.2f}", y=str(HEIGHT - 12), attrib={"text-anchor": "middle"})
    xl.text = "initial activation probability p" + (" (log scale)" if log_x else "")
    yl = ET.SubElement(svg, "text", x="16", y=f"{(y0 + y1) / 2:.2f}",
                       transform=f"rotate(-90 16 {(y0 + y1) / 2:.2f})", attrib={"text-anchor": "middle"})
    yl.text = "fully active runs" if y_field == "full_fraction" else y_field

    for i, (label, xy) in enumerate(pts.items()):
        color = COLORS[i % len(COLORS)]
        ET.SubElement(svg, "polyline", fill="none", stroke=color, attrib={
            "stroke-width": "2", "class": "series", "data-label": label,
            "points": " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in xy)})
        for x, y in xy:
            ET.SubElement(svg, "circle", cx=f"{sx(x):.2f}", cy=f"{sy(y):.2f}", r="2.5", fill=color)
        leg = ET.SubElement(svg, "text", x=str(WIDTH - MARGIN["right"] + 12), y=str(MARGIN["top"] + 16 * i + 10),
                            fill=color, attrib={"font-size": "12"})
        leg.text = label

    for j, (label, xm) in enumerate(markers.items()):
        if log_x and xm <= 0 or not x_lo <= xm <= x_hi:
            continue
        X = sx(xm)
        color = MARKER_STYLE.get(label, "#777777")
        ET.SubElement(svg, "line", x1=f"{X:.2f}", y1=f"{y0:.2f}", x2=f"{X:.2f}", y2=f"{y1:.2f}", stroke=color,
                      attrib={"stroke-dasharray": "6,4", "stroke-width": "1.5", "class": "marker", "data-label": label})
        lab = ET.SubElement(svg, "text", x=f"{X + 4:.2f}", y=f"{y1 + 12 + 14 * j:.2f}", fill=color,
                            attrib={"font-size": "11"})
        lab.text = f"{label}={xm:.4g}"

    ET.ElementTree(svg).write(Path(path), encoding="utf-8", xml_declaration=True)
