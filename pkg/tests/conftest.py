"""Shared test helpers: randomized geometry generators and small builders."""

from __future__ import annotations

import random

from hapticslider.geometry import Point2, Polyline, Profile


def random_monotonic_profile(rng: random.Random, side: str = "right",
                             y0: float = -2.0, y1: float = 12.0,
                             x_min: float = 0.0, x_max: float = 3.5,
                             max_slope: float = 1.0) -> Profile:
    """Random strictly y-monotonic contour with |dx/dy| <= max_slope, x within
    [x_min, x_max].  Matches the profile conventions of a right-side assembly
    mounted at x = 0 (material toward -x)."""
    n = rng.randint(4, 24)
    ys = sorted(rng.uniform(y0, y1) for _ in range(n))
    pts = []
    x = rng.uniform(x_min, x_max)
    prev_y = y0 - 1.0
    for y in [y0] + ys + [y1]:
        if y - prev_y < 1e-3:
            continue
        if pts:
            dy = y - pts[-1][1]
            lo = max(x_min, pts[-1][0] - max_slope * dy)
            hi = min(x_max, pts[-1][0] + max_slope * dy)
            x = rng.uniform(lo, hi)
        pts.append((x, y))
        prev_y = y
    if len(pts) < 2:
        pts = [(x, y0), (x, y1)]
    poly = Polyline(pts)
    material = -1 if side == "right" else 1
    if side == "left":
        poly = Polyline([Point2(-p.x, p.y) for p in poly.points])
    return Profile(poly, side=side, material_side=material)


def random_polyline(rng: random.Random, closed: bool = False) -> Polyline:
    n = rng.randint(2, 12)
    pts = []
    while len(pts) < n:
        p = (rng.uniform(-50, 50), rng.uniform(-50, 50))
        if not pts or abs(p[0] - pts[-1][0]) + abs(p[1] - pts[-1][1]) > 1e-6:
            pts.append(p)
    if closed and len(pts) < 3:
        pts.append((pts[-1][0] + 1.0, pts[-1][1] + 1.0))
    return Polyline(pts, closed=closed)
