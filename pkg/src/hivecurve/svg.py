"""Deterministic SVG emission for honeycombs, amoebas and patchwork charts.

Conventions: y points down, the viewBox is computed from the drawing window,
and every file starts with a version comment so outputs diff cleanly apart
from that single line.
"""

import math

VERSION_COMMENT = "<!-- hivecurve/1 -->"


def _fmt(x):
    return f"{x:.4f}"


class _Canvas:
    def __init__(self, window, size=480, pad=0.5):
        x0, x1, y0, y1 = window
        self.x0, self.x1 = x0 - pad, x1 + pad
        self.y0, self.y1 = y0 - pad, y1 + pad
        self.scale = size / max(self.x1 - self.x0, self.y1 - self.y0)
        self.w = (self.x1 - self.x0) * self.scale
        self.h = (self.y1 - self.y0) * self.scale
        self.parts = []

    def pt(self, x, y):
        # y-down: flip the vertical axis
        return ((x - self.x0) * self.scale, (self.y1 - y) * self.scale)

    def line(self, a, b, stroke="black", width=2.0, dash=None):
        (xa, ya), (xb, yb) = self.pt(*a), self.pt(*b)
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.parts.append(
            f'<line x1="{_fmt(xa)}" y1="{_fmt(ya)}" x2="{_fmt(xb)}" y2="{_fmt(yb)}"'
            f' stroke="{stroke}" stroke-width="{width}"{d} />')

    def circle(self, c, r=2.0, fill="black", stroke=None):
        x, y = self.pt(*c)
        s = f' stroke="{stroke}" stroke-width="0.8"' if stroke else ""
        self.parts.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}" fill="{fill}"{s} />')

    def clip_to_window(self, a, d):
        """Clip the ray a + s*d (s >= 0) to the window; None if it exits at once."""
        smax = math.inf
        smin = 0.0
        for (lo, hi, p, v) in ((self.x0, self.x1, a[0], d[0]),
                               (self.y0, self.y1, a[1], d[1])):
            if v == 0:
                if not lo <= p <= hi:
                    return None
                continue
            s1, s2 = (lo - p) / v, (hi - p) / v
            if s1 > s2:
                s1, s2 = s2, s1
            smin, smax = max(smin, s1), min(smax, s2)
        if smax <= smin:
            return None
        return (a[0] + smax * d[0], a[1] + smax * d[1])

    def render(self):
        header = (f'<svg xmlns="http://www.w3.org/2000/svg" '
                  f'viewBox="0 0 {_fmt(self.w)} {_fmt(self.h)}">')
        return "\n".join([VERSION_COMMENT, header] + self.parts + ["</svg>"]) + "\n"


def _curve_window(curve):
    xs = [float(x) for (x, _y) in curve.vertices] or [0.0]
    ys = [float(y) for (_x, y) in curve.vertices] or [0.0]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    m = 0.35 * span + 0.5
    return (min(xs) - m, max(xs) + m, min(ys) - m, max(ys) + m)


def svg_honeycomb(curve, window=None, size=480):
    """Tropical curve: bounded edges, clipped rays, vertices."""
    win = window or _curve_window(curve)
    cv = _Canvas(win, size)
    for (v1, v2, _d, mult) in curve.edges:
        a = (float(curve.vertices[v1][0]), float(curve.vertices[v1][1]))
        b = (float(curve.vertices[v2][0]), float(curve.vertices[v2][1]))
        cv.line(a, b, width=1.5 + 0.8 * (mult - 1))
    for (vi, d, mult, _side) in curve.rays:
        a = (float(curve.vertices[vi][0]), float(curve.vertices[vi][1]))
        end = cv.clip_to_window(a, d)
        if end is not None:
            cv.line(a, end, width=1.5 + 0.8 * (mult - 1))
    for (x, y) in curve.vertices:
        cv.circle((float(x), float(y)), r=2.5)
    return cv.render()


def svg_amoeba(cloud, curve=None, size=480, scale=1.0):
    """Amoeba sample cloud, optionally overlaid on a scaled tropical curve."""
    pts = [(float(x) * scale, float(y) * scale) for (x, y) in cloud.points]
    if pts:
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        win = (min(xs), max(xs), min(ys), max(ys))
    else:
        win = (-1.0, 1.0, -1.0, 1.0)
    cv = _Canvas(win, size)
    for p in pts:
        cv.circle(p, r=1.2, fill="steelblue")
    if curve is not None:
        for (v1, v2, _d, _m) in curve.edges:
            a = (float(curve.vertices[v1][0]), float(curve.vertices[v1][1]))
            b = (float(curve.vertices[v2][0]), float(curve.vertices[v2][1]))
            cv.line(a, b, stroke="firebrick", width=1.2)
        for (vi, d, _m, _side) in curve.rays:
            a = (float(curve.vertices[vi][0]), float(curve.vertices[vi][1]))
            end = cv.clip_to_window(a, d)
            if end is not None:
                cv.line(a, end, stroke="firebrick", width=1.2)
    return cv.render()


_QUAD_SIGNS = {(1, 1, 1): (1, 1), (-1, 1, 1): (-1, 1),
               (1, -1, 1): (1, -1), (1, 1, -1): (-1, -1)}


def svg_patchwork(charts, size=480):
    """The four glued charts on the diamond, triangulation light, curve bold."""
    by_eps = {ch.epsilon: ch for ch in (charts.values() if isinstance(charts, dict) else charts)}
    tris = by_eps[(1, 1, 1)].triangles
    n = sum(tris[0][0]) if tris else 1
    cv = _Canvas((-2 * n, 2 * n, -2 * n, 2 * n), size)
    cv.line((-2 * n, 0), (2 * n, 0), stroke="lightgray", width=0.6)
    cv.line((0, -2 * n), (0, 2 * n), stroke="lightgray", width=0.6)
    for eps, (s1, s2) in _QUAD_SIGNS.items():
        ch = by_eps[eps]
        for tri in tris:
            pts = [(2 * s1 * v[0], 2 * s2 * v[1]) for v in tri]
            for a in range(3):
                cv.line(pts[a], pts[(a + 1) % 3], stroke="silver", width=0.6)
        for (m1, m2) in ch.segments:
            cv.line((s1 * m1[0], s2 * m1[1]), (s1 * m2[0], s2 * m2[1]),
                    stroke="black", width=2.2)
        for idx, sign in ch.vertex_signs.items():
            cv.circle((2 * s1 * idx[0], 2 * s2 * idx[1]), r=2.0,
                      fill="black" if sign > 0 else "white",
                      stroke=None if sign > 0 else "black")
    return cv.render()
