"""Deterministic SVG rendering of fronts.

Output depends only on the diagram, epsilon and the sample count; every
number is written with a fixed number of decimals so files are
byte-stable and diffable as golden files.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .front import FrontDiagram
from .puiseux import evaluate_re

WIDTH = 720.0
HEIGHT = 360.0
MARGIN = 30.0
TICK = 6.0
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")

HEADER = """<?xml version="1.0" standalone="no"?>
<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" "http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">
<svg width="{w:.0f}" height="{h:.0f}" viewBox="0 0 {w:.0f} {h:.0f}" version="1.1" xmlns="http://www.w3.org/2000/svg">
<rect x="0" y="0" width="{w:.0f}" height="{h:.0f}" style="fill:#ffffff"/>
"""


def _fmt(points) -> str:
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in points)


def _graph_heights(d: FrontDiagram, eps: float, samples: int):
    seam = 2 * math.pi * float(d.seam_turns)
    thetas = [seam + 2 * math.pi * k / samples for k in range(samples + 1)]
    sheets = d.formal_type.sheets()
    curves = [[evaluate_re(c, eps, t) for t in thetas] for _, _, c in sheets]
    marks = []
    for c in d.crossings:
        t = c.angle.radians
        marks.append((t, evaluate_re(sheets[c.lower][2], eps, t)))
    return thetas, curves, marks


def _schematic_heights(d: FrontDiagram):
    seam = 2 * math.pi * float(d.seam_turns)
    cuts = [seam] + [c.angle.radians for c in d.crossings] + [seam + 2 * math.pi]
    curves = [[] for _ in range(d.strands)]
    thetas = []
    for k, order in enumerate(d.sector_orders):
        lo, hi = cuts[k], cuts[k + 1]
        for t in (lo, hi):
            thetas.append(t)
            for s in range(d.strands):
                pos = order.index(s)
                if t == lo and k > 0 and d.crossings[k - 1].slot in (pos, pos - 1) \
                        and s in (d.crossings[k - 1].lower, d.crossings[k - 1].upper):
                    pos = d.crossings[k - 1].slot + 0.5
                if t == hi and k < len(d.crossings) and s in (d.crossings[k].lower,
                                                              d.crossings[k].upper):
                    pos = d.crossings[k].slot + 0.5
                curves[s].append(float(pos))
    marks = [(c.angle.radians, c.slot + 0.5) for c in d.crossings]
    return thetas, curves, marks


def emit_svg(d: FrontDiagram, eps: object | None = None, samples: int = 256) -> str:
    """Render ``d`` as an SVG 1.1 document.

    Fronts carrying a formal type are drawn as sampled height graphs; other
    fronts (e.g. braid closures) are drawn schematically by strand position.
    """
    if samples < 16:
        raise ValueError("at least 16 samples are required")
    if d.formal_type is not None:
        e = d.epsilon if eps is None else Fraction(eps)
        thetas, curves, marks = _graph_heights(d, float(e), samples)
    else:
        thetas, curves, marks = _schematic_heights(d)

    lo = min([min(c) for c in curves] + [0.0])
    hi = max([max(c) for c in curves] + [0.0])
    if hi - lo < 1e-12:
        lo, hi = lo - 1.0, hi + 1.0
    t0, t1 = thetas[0], thetas[0] + 2 * math.pi

    def px(t: float, h: float) -> tuple[float, float]:
        x = MARGIN + (t - t0) / (t1 - t0) * (WIDTH - 2 * MARGIN)
        y = MARGIN + (hi - h) / (hi - lo) * (HEIGHT - 2 * MARGIN)
        return x, y

    out = [HEADER.format(w=WIDTH, h=HEIGHT)]
    out.append(f'<line x1="{MARGIN:.3f}" y1="{HEIGHT - MARGIN:.3f}" x2="{WIDTH - MARGIN:.3f}" '
               f'y2="{HEIGHT - MARGIN:.3f}" style="stroke:#888888;stroke-width:1"/>\n')
    for s, curve in enumerate(curves):
        color = PALETTE[s % len(PALETTE)]
        pts = [px(t, h) for t, h in zip(thetas, curve)]
        out.append(f'<polyline class="strand" data-strand="{s}" points="{_fmt(pts)}" '
                   f'style="fill:none;stroke:{color};stroke-width:1.5"/>\n')
        step = max(1, len(pts) // 12)
        for x, y in pts[step // 2::step]:
            out.append(f'<line class="coorientation" x1="{x:.3f}" y1="{y:.3f}" x2="{x:.3f}" '
                       f'y2="{y + TICK:.3f}" style="stroke:{color};stroke-width:1"/>\n')
    for k, (t, h) in enumerate(marks):
        x, y = px(t, h)
        out.append(f'<circle class="crossing" data-crossing="{k}" cx="{x:.3f}" cy="{y:.3f}" '
                   f'r="4.000" style="fill:none;stroke:#000000;stroke-width:1"/>\n')
    out.append("</svg>\n")
    return "".join(out)
