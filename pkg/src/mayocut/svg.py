"""Static SVG pictures of planar instances, shapes and cuts.

Output depends only on the input data: fixed canvas, fixed palette, numbers
printed with three decimals.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from .shapes import Ball, Box

WIDTH = 480
MARGIN = 24
PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _f(v):
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


class _Frame:
    def __init__(self, lo, hi):
        (x0, y0), (x1, y1) = lo, hi
        span = max(x1 - x0, y1 - y0, 1e-9)
        pad = 0.08 * span
        self.x0, self.y0 = x0 - pad, y0 - pad
        self.x1, self.y1 = x1 + pad, y1 + pad
        self.scale = (WIDTH - 2 * MARGIN) / max(self.x1 - self.x0, self.y1 - self.y0)
        self.w = (self.x1 - self.x0) * self.scale + 2 * MARGIN
        self.h = (self.y1 - self.y0) * self.scale + 2 * MARGIN

    def xy(self, x, y):
        return (MARGIN + (x - self.x0) * self.scale,
                MARGIN + (self.y1 - y) * self.scale)

    def clip_line(self, u, c):
        """Endpoints of {u.x = c} inside the padded data box, or None."""
        ux, uy = u
        pts = []
        if uy != 0:
            for x in (self.x0, self.x1):
                y = (c - ux * x) / uy
                if self.y0 - 1e-12 <= y <= self.y1 + 1e-12:
                    pts.append((x, y))
        if ux != 0:
            for y in (self.y0, self.y1):
                x = (c - uy * y) / ux
                if self.x0 - 1e-12 <= x <= self.x1 + 1e-12:
                    pts.append((x, y))
        pts = sorted(set(pts))
        if len(pts) < 2:
            return None
        return pts[0], pts[-1]


def render(measures=(), shapes=(), plane=None) -> str:
    """SVG document for atomic measures and/or shapes in the plane."""
    xs, ys = [], []
    for mu in measures:
        for p in mu.points:
            xs.append(float(p[0]))
            ys.append(float(p[1]))
    for s in shapes:
        lo, hi = s.bounds()
        xs += [lo[0], hi[0]]
        ys += [lo[1], hi[1]]
    if not xs:
        raise ValueError("nothing to plot")
    frame = _Frame((min(xs), min(ys)), (max(xs), max(ys)))
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(frame.w)}" height="{_f(frame.h)}" '
        f'viewBox="0 0 {_f(frame.w)} {_f(frame.h)}">',
        f'<rect x="0" y="0" width="{_f(frame.w)}" height="{_f(frame.h)}" fill="white"/>',
    ]
    for k, s in enumerate(shapes):
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<g id="shape-{escape(s.name)}" fill="none" stroke="{color}" stroke-width="1.5">')
        for comp in s.components:
            if isinstance(comp, Ball):
                cx, cy = frame.xy(*comp.center)
                out.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(comp.radius * frame.scale)}"/>')
            elif isinstance(comp, Box):
                x, y = frame.xy(comp.lo[0], comp.hi[1])
                w = (comp.hi[0] - comp.lo[0]) * frame.scale
                h = (comp.hi[1] - comp.lo[1]) * frame.scale
                out.append(f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}"/>')
        out.append("</g>")
    heaviest = max((float(m) for mu in measures for m in mu.masses), default=1.0)
    for k, mu in enumerate(measures):
        color = PALETTE[k % len(PALETTE)]
        out.append(f'<g id="set-{escape(mu.name)}" fill="{color}">')
        for p, m in mu.atoms:
            cx, cy = frame.xy(float(p[0]), float(p[1]))
            r = 2.0 + 3.0 * math.sqrt(float(m) / heaviest)
            out.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(r)}"/>')
        out.append("</g>")
    if plane is not None:
        H = plane.unit()
        seg = frame.clip_line(H.normal, H.offset)
        if seg is not None:
            (ax, ay), (bx, by) = frame.xy(*seg[0]), frame.xy(*seg[1])
            out.append(f'<line id="cut" x1="{_f(ax)}" y1="{_f(ay)}" x2="{_f(bx)}" y2="{_f(by)}" '
                       f'stroke="black" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
