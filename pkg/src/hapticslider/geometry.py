"""2D geometry kernel: points, polylines, slider edge profiles, closest-point
queries and penetration tests.

Coordinate convention used throughout the package: the slider travels along -y
(pressing the slider increases displacement s >= 0) and side springs deflect
along +-x.  Edge profiles are stored in rest coordinates with the travel
coordinate equal to y, so a profile contour must be strictly monotonic in y.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field

COORD_EPS = 1e-9


class GeometryError(ValueError):
    """Invalid geometric input (degenerate or inconsistent)."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite coordinates ({self.x}, {self.y})")

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Point2":
        return Point2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Point2") -> float:
        return self.x * other.x + self.y * other.y

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def distance(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def normalized(self) -> "Point2":
        n = self.norm()
        if n < COORD_EPS:
            raise GeometryError("cannot normalize a near-zero vector")
        return Point2(self.x / n, self.y / n)

    def perp_cw(self) -> "Point2":
        """Perpendicular, rotated -90 degrees (clockwise)."""
        return Point2(self.y, -self.x)

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Polyline:
    points: tuple[Point2, ...]
    closed: bool = False

    def __init__(self, points, closed: bool = False):
        pts = tuple(
            p if isinstance(p, Point2) else Point2(p[0], p[1]) for p in points
        )
        if len(pts) < 2:
            raise GeometryError("polyline needs at least 2 points")
        for a, b in zip(pts, pts[1:]):
            if a.distance(b) <= COORD_EPS:
                raise GeometryError("consecutive polyline points coincide")
        if closed and pts[0].distance(pts[-1]) <= COORD_EPS:
            pts = pts[:-1]
            if len(pts) < 2:
                raise GeometryError("degenerate closed polyline")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "closed", closed)

    def segments(self):
        """Yield (index, start, end) for every segment."""
        pts = self.points
        for i in range(len(pts) - 1):
            yield i, pts[i], pts[i + 1]
        if self.closed:
            yield len(pts) - 1, pts[-1], pts[0]

    @property
    def segment_count(self) -> int:
        return len(self.points) - 1 + (1 if self.closed else 0)

    def length(self) -> float:
        return sum(a.distance(b) for _, a, b in self.segments())

    def bounds(self) -> tuple[float, float, float, float]:
        xs = [p.x for p in self.points]
        ys = [p.y for p in self.points]
        return min(xs), min(ys), max(xs), max(ys)


@dataclass(frozen=True)
class Profile:
    """A slider's edge contour: an open polyline, strictly monotonic in the
    travel (y) axis.  material_side indicates which x half-plane relative to
    the contour is solid slider material (+1 for +x, -1 for -x)."""

    contour: Polyline
    side: str = "right"
    material_side: int = -1

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise GeometryError(f"profile side must be left or right, got {self.side!r}")
        if self.material_side not in (-1, 1):
            raise GeometryError("material_side must be +1 or -1")
        if self.contour.closed:
            raise GeometryError("profile contour must be an open polyline")
        pts = self.contour.points
        for a, b in zip(pts, pts[1:]):
            if b.y - a.y <= COORD_EPS:
                raise GeometryError(
                    "profile contour must be strictly monotonic in the travel axis"
                )

    @property
    def travel_span(self) -> tuple[float, float]:
        return self.contour.points[0].y, self.contour.points[-1].y

    def x_at(self, y: float) -> float:
        """Contour x at travel coordinate y (clamped beyond the endpoints)."""
        pts = self.contour.points
        ys = [p.y for p in pts]
        if y <= ys[0]:
            return pts[0].x
        if y >= ys[-1]:
            return pts[-1].x
        i = bisect_right(ys, y) - 1
        a, b = pts[i], pts[i + 1]
        t = (y - a.y) / (b.y - a.y)
        return a.x + t * (b.x - a.x)


@dataclass(frozen=True)
class ClosestPointResult:
    point: Point2
    distance: float
    segment_index: int
    normal: Point2
    tangent: Point2
    at_vertex: bool = field(default=False)


def _segment_tangents(contour: Polyline) -> list[Point2]:
    return [(b - a).normalized() for _, a, b in contour.segments()]


def closest_point(contour: Polyline, query: Point2) -> ClosestPointResult:
    """Closest point on a polyline.  The normal points toward the query's side
    of the contour (or the clockwise perpendicular when the query lies on it);
    use profile_closest_point for the material-side convention."""
    if contour.length() < COORD_EPS:
        raise GeometryError("degenerate contour")
    best_d2 = math.inf
    best = None  # (seg_index, t, point)
    for i, a, b in contour.segments():
        ab = b - a
        denom = ab.dot(ab)
        t = max(0.0, min(1.0, (query - a).dot(ab) / denom))
        p = a + ab * t
        d2 = (query - p).dot(query - p)
        # strict improvement keeps the first (smallest travel coordinate) on ties
        if d2 < best_d2 - COORD_EPS * COORD_EPS:
            best_d2 = d2
            best = (i, t, p)
    i, t, p = best
    tangents = _segment_tangents(contour)
    at_vertex = False
    # Vertex case: angle-bisector tangent/normal for a continuous normal field.
    vtol = 1e-9
    n_seg = contour.segment_count
    if t <= vtol and (i > 0 or contour.closed):
        prev = (i - 1) % n_seg
        avg = tangents[prev] + tangents[i]
        if avg.norm() > COORD_EPS:
            tangent = avg.normalized()
            at_vertex = True
        else:
            tangent = tangents[i]
    elif t >= 1.0 - vtol and (i < n_seg - 1 or contour.closed):
        nxt = (i + 1) % n_seg
        avg = tangents[i] + tangents[nxt]
        if avg.norm() > COORD_EPS:
            tangent = avg.normalized()
            at_vertex = True
        else:
            tangent = tangents[i]
    else:
        tangent = tangents[i]
    normal = tangent.perp_cw()
    off = query - p
    if off.dot(normal) < 0:
        normal = normal * -1.0
    return ClosestPointResult(
        point=p,
        distance=math.sqrt(best_d2),
        segment_index=i,
        normal=normal,
        tangent=tangent,
        at_vertex=at_vertex,
    )


def profile_closest_point(profile: Profile, query: Point2) -> ClosestPointResult:
    """Closest point on a profile contour with the profile conventions:
    tangent oriented toward increasing travel coordinate (+y), normal pointing
    away from the material side."""
    res = closest_point(profile.contour, query)
    tangent = res.tangent
    if tangent.y < 0:
        tangent = tangent * -1.0
    normal = tangent.perp_cw() * float(-profile.material_side)
    return ClosestPointResult(
        point=res.point,
        distance=res.distance,
        segment_index=res.segment_index,
        normal=normal,
        tangent=tangent,
        at_vertex=res.at_vertex,
    )


def penetrates(profile: Profile, query: Point2) -> bool:
    """True iff the query point lies strictly on the material side of the
    contour.  Beyond the contour's travel span the contour is extended
    vertically (constant x)."""
    return (query.x - profile.x_at(query.y)) * profile.material_side > 0.0


def translate(contour: Polyline, offset: Point2) -> Polyline:
    if not isinstance(offset, Point2):
        offset = Point2(offset[0], offset[1])
    return Polyline([p + offset for p in contour.points], closed=contour.closed)


def mirror_x(contour: Polyline) -> Polyline:
    """Reflect a polyline about the y axis (x -> -x)."""
    return Polyline([Point2(-p.x, p.y) for p in contour.points], closed=contour.closed)
