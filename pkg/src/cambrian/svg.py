"""Stereographic picture of a rank-3 fan.

Each cone wall is a great-circle arc between two unit rays. The sphere is
projected from a point ``p`` onto the plane through the origin orthogonal to
``p``; arcs passing close to ``p`` are cut rather than drawn to infinity.
"""
from __future__ import annotations

from typing import Optional, Sequence
from xml.sax.saxutils import escape

import numpy as np

from .errors import RankNot3
from .geomkernel import unit
from .pipeline import Construction

ARC_STEPS = 48
NEAR_POLE = 1e-3


def default_projection_point(k: Construction, seed: int = 42, clearance: float = 1e-3) -> np.ndarray:
    """Central direction of F(c), so that F(c) becomes the unbounded outer region.

    A ray of any cone would be a vertex of the picture and land at infinity.
    """
    p = k.fan[k.lattice.coxeter.index].rays.sum(axis=0)
    return clear_of_walls(k, p, seed, clearance)


def clear_of_walls(k: Construction, p, seed: int = 42, clearance: float = 1e-3) -> np.ndarray:
    p = unit(p)
    roots = k.rs.positive_roots
    rng = np.random.default_rng(seed)
    scale = 0.02
    while np.abs(roots @ p).min() < clearance:
        p = unit(p + scale * rng.standard_normal(3))
    return p


class Projector:
    def __init__(self, point):
        self.p = unit(point)
        # orthonormal basis of the image plane
        helper = np.eye(3)[int(np.argmin(np.abs(self.p)))]
        self.e1 = unit(helper - (helper @ self.p) * self.p)
        self.e2 = np.cross(self.p, self.e1)

    def __call__(self, x) -> Optional[tuple[float, float]]:
        x = unit(x)
        denom = 1.0 - x @ self.p
        if denom < NEAR_POLE:
            return None
        return float(x @ self.e1 / denom), float(x @ self.e2 / denom)


def _arc(a, b, steps: int = ARC_STEPS) -> list[np.ndarray]:
    a, b = unit(a), unit(b)
    angle = np.arccos(np.clip(a @ b, -1.0, 1.0))
    if angle < 1e-12:
        return [a]
    out = []
    for t in np.linspace(0.0, 1.0, steps + 1):
        out.append((np.sin((1 - t) * angle) * a + np.sin(t * angle) * b) / np.sin(angle))
    return out


def _label(positions: Sequence[int]) -> str:
    return "∅" if not positions else ",".join(str(p) for p in positions)


def render_svg(k: Construction, point=None, seed: int = 42, size: int = 800) -> str:
    """SVG of the fan: walls as arcs, mu(rho_i) directions as dots, regions labelled by Pi_w."""
    if k.rs.n != 3:
        raise RankNot3(f"stereographic picture needs rank 3, got {k.rs.n}")
    proj = Projector(default_projection_point(k, seed) if point is None else clear_of_walls(k, point, seed))

    walls = set()
    paths = []
    for cone in k.fan:
        for i in range(3):
            for j in range(i + 1, 3):
                key = tuple(sorted((tuple(np.round(cone.rays[i], 9)), tuple(np.round(cone.rays[j], 9)))))
                if key in walls:
                    continue
                walls.add(key)
                runs, current = [], []
                for x in _arc(cone.rays[i], cone.rays[j]):
                    q = proj(x)
                    if q is None:
                        if len(current) > 1:
                            runs.append(current)
                        current = []
                    else:
                        current.append(q)
                if len(current) > 1:
                    runs.append(current)
                paths.extend(runs)

    mu = k.fan.mu
    dots = []
    for p in k.rho.ax_range:
        q = proj(mu.of_position(p))
        if q is not None:
            dots.append((p, q))

    labels = []
    for cone in k.fan:
        centre = unit(cone.rays.sum(axis=0))
        labels.append((cone.ncp_id, _label(cone.neg_normals), proj(centre)))

    pts = np.array([q for _, q in dots]) if dots else np.zeros((1, 2))
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    centre, half = (lo + hi) / 2, 0.6 * float(max(hi - lo) or 1.0)
    lo, hi = centre - half, centre + half
    scale = size / (2 * half)

    def xy(q):
        x = (min(max(q[0], lo[0]), hi[0]) - lo[0]) * scale
        y = (hi[1] - min(max(q[1], lo[1]), hi[1])) * scale
        return x, y

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<title>{escape(k.rs.descriptor.label)} fan, stereographic projection from '
        f'({proj.p[0]:.4f}, {proj.p[1]:.4f}, {proj.p[2]:.4f})</title>',
        '<rect width="100%" height="100%" fill="white"/>',
        '<g class="walls" fill="none" stroke="black" stroke-width="1.2">',
    ]
    for run in paths:
        d = " ".join(("M" if i == 0 else "L") + f"{x:.2f},{y:.2f}" for i, (x, y) in enumerate(map(xy, run)))
        out.append(f'<path class="wall" d="{d}"/>')
    out.append("</g>")
    out.append('<g class="vertices" fill="black">')
    for p, q in dots:
        x, y = xy(q)
        out.append(f'<circle class="vertex" data-rho="{p}" cx="{x:.2f}" cy="{y:.2f}" r="4"/>')
    out.append("</g>")
    out.append('<g class="labels" font-family="sans-serif" font-size="11" text-anchor="middle" fill="#1a4f9c">')
    for ncp_id, text, q in labels:
        x, y = xy(q) if q is not None else (size - 40.0, 20.0)
        out.append(f'<text class="region" data-ncp="{ncp_id}" x="{x:.2f}" y="{y:.2f}">{escape(text)}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
