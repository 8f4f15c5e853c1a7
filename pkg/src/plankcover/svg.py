"""Minimal SVG 1.1 figures for planar instances.

Fixed 1000 x 1000 viewBox, one colour per role.  Coordinates are written
with a fixed number of decimals so identical input gives identical bytes.
"""
from __future__ import annotations

import numpy as np

from .geom import Polytope, box

SIZE = 1000
PAD = 40

STYLE = {
    "body": 'fill="#c6dbef" fill-opacity="0.6" stroke="#1f77b4" stroke-width="3"',
    "piece": 'fill="#d62728" fill-opacity="0.18" stroke="#d62728" stroke-width="2"',
    "homothet": 'fill="none" stroke="#9467bd" stroke-width="2" stroke-dasharray="8 5"',
    "normal": 'stroke="#ff7f0e" stroke-width="3"',
    "contact": 'fill="#000000"',
    "witness": 'fill="#2ca02c" stroke="#000000" stroke-width="2"',
}


def clip_to_box(P: Polytope, lo, hi) -> np.ndarray | None:
    """Vertices of ``P`` intersected with the box ``[lo, hi]`` (planar)."""
    bx = box(lo, hi)
    try:
        return Polytope(np.vstack([P.A, bx.A]), np.concatenate([P.b, bx.b])).with_vertices().vertices
    except ValueError:
        return None


class Figure:
    def __init__(self):
        self.polys: list = []
        self.points: list = []
        self.segments: list = []

    def polygon(self, vertices, role: str = "body"):
        self.polys.append((np.asarray(vertices, dtype=float), role))
        return self

    def point(self, p, role: str = "witness", r: float = 9.0):
        self.points.append((np.asarray(p, dtype=float), role, r))
        return self

    def segment(self, p, q, role: str = "normal"):
        self.segments.append((np.asarray(p, dtype=float), np.asarray(q, dtype=float), role))
        return self

    def _fit(self, extent=None):
        if extent is None:
            pts = [v for v, _ in self.polys] + [p[None, :] for p, _, _ in self.points]
            pts += [np.vstack([p, q]) for p, q, _ in self.segments]
            allp = np.vstack(pts)
            lo, hi = allp.min(axis=0), allp.max(axis=0)
        else:
            lo, hi = (np.asarray(e, dtype=float) for e in extent)
        span = float(max((hi - lo).max(), 1e-12))
        s = (SIZE - 2 * PAD) / span
        centre = (lo + hi) / 2
        return lambda p: (SIZE / 2 + s * (p[0] - centre[0]), SIZE / 2 - s * (p[1] - centre[1]))

    def render(self, extent=None) -> str:
        tf = self._fit(extent)
        out = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {SIZE} {SIZE}" '
            f'width="{SIZE}" height="{SIZE}">',
            f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="#ffffff"/>',
        ]
        for V, role in self.polys:
            pts = " ".join("%.3f,%.3f" % tf(v) for v in V)
            out.append(f'<polygon class="{role}" points="{pts}" {STYLE[role]}/>')
        for p, q, role in self.segments:
            (x1, y1), (x2, y2) = tf(p), tf(q)
            out.append(
                f'<line class="{role}" x1="{x1:.3f}" y1="{y1:.3f}" x2="{x2:.3f}" y2="{y2:.3f}" {STYLE[role]}/>'
            )
        for p, role, r in self.points:
            x, y = tf(p)
            out.append(f'<circle class="{role}" cx="{x:.3f}" cy="{y:.3f}" r="{r:.1f}" {STYLE[role]}/>')
        out.append("</svg>")
        return "\n".join(out) + "\n"


def contact_figure(K: Polytope, L: Polytope, lam: float, shift, system) -> str:
    """Container, inscribed homothet, contact points and their normals."""
    Kv = K.with_vertices().vertices
    inner = lam * Kv + np.asarray(shift)
    lo, hi = inner.min(axis=0), inner.max(axis=0)
    pad = 0.5 * float((hi - lo).max()) + 1e-9
    outer = L.with_vertices().vertices if L.bounded else clip_to_box(L, lo - pad, hi + pad)
    fig = Figure()
    if outer is not None:
        fig.polygon(outer, "body")
    fig.polygon(inner, "homothet")
    span = float(np.ptp(inner, axis=0).max())
    for u, v in zip(system.u, system.v):
        p = u + system.origin
        fig.segment(p, p + 0.25 * span * v / np.linalg.norm(v), "normal")
        fig.point(p, "contact", 5.0)
    return fig.render()


def cover_figure(B: Polytope, placed, point=None) -> str:
    """Covered body, translated pieces (clipped to a frame around B), witness."""
    Bv = B.with_vertices().vertices
    lo, hi = Bv.min(axis=0), Bv.max(axis=0)
    pad = 0.15 * float((hi - lo).max())
    lo, hi = lo - pad, hi + pad
    fig = Figure().polygon(Bv, "body")
    for C in placed:
        V = clip_to_box(C, lo, hi)
        if V is not None:
            fig.polygon(V, "piece")
    if point is not None:
        fig.point(point, "witness")
    return fig.render(extent=(lo, hi))
