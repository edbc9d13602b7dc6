"""Laser-ready swatch drawings and fabrication feasibility checks.

A swatch is the hand-held test assembly: slider (carrying the edge profile),
chassis plate, side spring(s), optional base spring, and fastener holes.
Feasibility follows the POM laser-cutting rules: no wall thinner than 1 mm,
measured by medial-width sampling between opposing cut edges.  The kerf
default (0.2 mm) is informational: raising it above the reference narrows the
effective wall in the check, but cut paths are never silently offset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Point2, Polyline, translate, mirror_x
from .springs import (
    MIN_WALL_MM,
    generate_base_spring_outline,
    generate_side_spring_outline,
)
from .estimator import Mechanism
from .svg_io import DrawingMetadata, export_polyline_svg

SHEET_THICKNESS_MM = 3.0
KERF_REFERENCE_MM = 0.2
PART_SPACING_MM = 3.0  # nesting gap, >= the 2 mm minimum
M3_CLEARANCE_DIAMETER = 3.2
WALL_SAMPLE_STEP_MM = 0.25
# ignore outline portions this close (along the path) to the sample point so a
# sample is not compared against its own segment's continuation
SELF_ARC_CUTOFF_MM = 1.5

# laser settings used for 3 mm POM (emitted as structured comments)
LASER_SETTINGS = (
    "laser: speed 3.4 mm/s",
    "laser: power 7.8 W (first pass), 3.0 W (second pass)",
    "laser: frequency 500 Hz",
    "laser: material POM, sheet 3.0 mm",
)


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class FeasibilityRule:
    min_wall: float = MIN_WALL_MM
    min_feature_spacing: float = 2.0
    kerf: float = KERF_REFERENCE_MM

    def __post_init__(self):
        if min(self.min_wall, self.min_feature_spacing, self.kerf) <= 0:
            raise ValueError("feasibility rule values must be positive")


@dataclass(frozen=True)
class Violation:
    part: str
    location: Point2
    measured_wall: float
    message: str


@dataclass(frozen=True)
class SwatchDrawing:
    # part name -> cut polylines, already placed on the sheet
    parts: dict[str, list[Polyline]]
    layers: dict[str, list[Polyline]]
    sheet_thickness: float = SHEET_THICKNESS_MM
    metadata: DrawingMetadata = field(default_factory=DrawingMetadata)
    # assembly-space info kept for inspection (e.g. spring mount symmetry)
    spring_mounts: dict[str, Point2] = field(default_factory=dict)


def _circle(center: Point2, r: float, n: int = 64) -> Polyline:
    pts = [
        Point2(center.x + r * math.cos(2 * math.pi * i / n),
               center.y + r * math.sin(2 * math.pi * i / n))
        for i in range(n)
    ]
    return Polyline(pts, closed=True)


def _rectangle(x0, y0, x1, y1) -> Polyline:
    return Polyline(
        [Point2(x0, y0), Point2(x1, y0), Point2(x1, y1), Point2(x0, y1)], closed=True
    )


def _bbox(polys: list[Polyline]):
    xs0, ys0, xs1, ys1 = zip(*(p.bounds() for p in polys))
    return min(xs0), min(ys0), max(xs1), max(ys1)


def _place(polys: list[Polyline], offset: Point2) -> list[Polyline]:
    return [translate(p, offset) for p in polys]


def _slider_outline(mechanism: Mechanism, blank_halfwidth: float,
                    extra: float) -> Polyline:
    """Slider blank with the profile contour(s) incorporated as its edge(s).

    Profiles are stored in per-side assembly coordinates (baseline near x = 0);
    on the physical part each contour is shifted outward so its innermost
    coordinate sits on the blank edge and any bumps protrude beyond it.
    """
    by_side = {a.profile.side: a.profile for a in mechanism.sides}
    spans = [p.travel_span for p in by_side.values()]
    y_lo = min(s[0] for s in spans) - extra
    y_hi = max(s[1] for s in spans) + extra
    for p in by_side.values():
        minx, _, maxx, _ = p.contour.bounds()
        if maxx - minx > blank_halfwidth - MIN_WALL_MM:
            raise LayoutError(
                f"profile spans {maxx - minx:.2f} mm across the travel axis, "
                f"more than the {blank_halfwidth:g} mm slider blank can carry"
            )
    pts: list[Point2] = []
    # right edge bottom->top: profile contour (aligned to the blank edge) or
    # the straight blank edge itself
    if "right" in by_side:
        contour = by_side["right"].contour
        dx = blank_halfwidth - contour.bounds()[0]
        c = translate(contour, Point2(dx, 0.0)).points
        pts += [Point2(c[0].x, y_lo)] + list(c) + [Point2(c[-1].x, y_hi)]
    else:
        pts += [Point2(blank_halfwidth, y_lo), Point2(blank_halfwidth, y_hi)]
    # left edge top->bottom
    if "left" in by_side:
        contour = by_side["left"].contour
        dx = -blank_halfwidth - contour.bounds()[2]
        c = translate(contour, Point2(dx, 0.0)).points
        pts += [Point2(c[-1].x, y_hi)] + list(reversed(c)) + [Point2(c[0].x, y_lo)]
    else:
        pts += [Point2(-blank_halfwidth, y_hi), Point2(-blank_halfwidth, y_lo)]
    dedup = [pts[0]]
    for p in pts[1:]:
        if p.distance(dedup[-1]) > 1e-9:
            dedup.append(p)
    return Polyline(dedup, closed=True)


def layout_swatch(mechanism: Mechanism, blank_halfwidth: float = 12.0,
                  name: str = "swatch") -> SwatchDrawing:
    """Nest the mechanism's parts on a rectangular sheet.

    Parts: slider (with profile edges), chassis plate with travel slot,
    side spring per profile, optional base spring, M3 fastener holes.
    """
    slider = _slider_outline(mechanism, blank_halfwidth, extra=2.0)

    # chassis: plate with a clearance slot for the slider
    sl_x0, sl_y0, sl_x1, sl_y1 = slider.bounds()
    slot_w = (sl_x1 - sl_x0) + 1.0
    slot_h = (sl_y1 - sl_y0) + mechanism.travel + 2.0
    plate_margin = 14.0
    chassis = [
        _rectangle(-slot_w / 2 - plate_margin, -slot_h / 2 - plate_margin,
                   slot_w / 2 + plate_margin, slot_h / 2 + plate_margin),
        _rectangle(-slot_w / 2, -slot_h / 2, slot_w / 2, slot_h / 2),
    ]

    parts: dict[str, list[Polyline]] = {}
    spring_mounts: dict[str, Point2] = {}
    parts["slider"] = [slider]
    parts["chassis"] = chassis
    for assembly in mechanism.sides:
        side = assembly.profile.side
        outline = generate_side_spring_outline(assembly.spring)
        if side == "left":
            outline = [mirror_x(p) for p in outline]
        parts[f"side_spring_{side}"] = outline
        spring_mounts[side] = assembly.arm.pivot
    if mechanism.base_spring is not None:
        parts["base_spring"] = generate_base_spring_outline(mechanism.base_spring)
    hole_pitch = 10.0
    parts["fastener_holes"] = [
        _circle(Point2(dx, dy), M3_CLEARANCE_DIAMETER / 2.0)
        for dx in (-hole_pitch, hole_pitch)
        for dy in (-hole_pitch, hole_pitch)
    ]

    # nest left-to-right with uniform spacing
    placed: dict[str, list[Polyline]] = {}
    cursor = 0.0
    for pname, polys in parts.items():
        x0, y0, x1, y1 = _bbox(polys)
        placed[pname] = _place(polys, Point2(cursor - x0, -y0))
        cursor += (x1 - x0) + PART_SPACING_MM
    cut = [p for polys in placed.values() for p in polys]
    x0, y0, x1, y1 = _bbox(cut)
    label = _rectangle(x0, y1 + 2.0, x0 + 20.0, y1 + 8.0)
    return SwatchDrawing(
        parts=placed,
        layers={"cut": cut, "engrave": [label]},
        metadata=DrawingMetadata(title=name, comments=LASER_SETTINGS),
        spring_mounts=spring_mounts,
    )


# ---------------------------------------------------------------------------
# feasibility


def _segment_arrays(polys: list[Polyline]):
    """(starts, ends, poly_index, cumulative arc position of segment start)."""
    a_list, b_list, poly_idx, arc0 = [], [], [], []
    for pi, poly in enumerate(polys):
        acc = 0.0
        for _, a, b in poly.segments():
            a_list.append((a.x, a.y))
            b_list.append((b.x, b.y))
            poly_idx.append(pi)
            arc0.append(acc)
            acc += a.distance(b)
    return (
        np.asarray(a_list),
        np.asarray(b_list),
        np.asarray(poly_idx),
        np.asarray(arc0),
    )


def _sample_points(poly: Polyline, step: float):
    """(point, arc position) samples along the polyline."""
    out = []
    acc = 0.0
    for _, a, b in poly.segments():
        seg_len = a.distance(b)
        n = max(1, int(math.ceil(seg_len / step)))
        for k in range(n):
            t = k / n
            out.append(((a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t), acc + seg_len * t))
        acc += seg_len
    return out


def measure_min_wall(polys: list[Polyline], step: float = WALL_SAMPLE_STEP_MM):
    """Smallest medial width between opposing cut edges of one part.

    Returns (width, location).  Two exclusions keep the measurement to real
    walls: edges of the same polyline within SELF_ARC_CUTOFF_MM of the sample
    along the path are skipped (a sample is not measured against its own local
    neighbourhood), and measurements whose direction is closer than 45 degrees
    to either edge's tangent are skipped (those are corner wedges and tapering
    tips, not walls between opposing cuts).
    """
    A, B, poly_idx, arc0 = _segment_arrays(polys)
    AB = B - A
    ab2 = np.einsum("ij,ij->i", AB, AB)
    ab2[ab2 == 0] = 1e-30
    lengths = [p.length() for p in polys]
    seg_len = np.sqrt(ab2)
    tangents = AB / seg_len[:, None]
    best = (math.inf, Point2(0.0, 0.0))
    cos45 = math.cos(math.pi / 4.0) + 1e-9
    for pi, poly in enumerate(polys):
        total = lengths[pi]
        sample_tangents = {}
        acc = 0.0
        for si, (_, a, b) in enumerate(poly.segments()):
            sample_tangents[si] = ((b - a).normalized(), acc)
            acc += a.distance(b)
        for (px, py), arc in _sample_points(poly, step):
            # tangent of the segment this sample lies on
            own = None
            for si, (tan, a0) in sample_tangents.items():
                if arc >= a0 - 1e-9:
                    own = tan
            P = np.array([px, py])
            t = np.clip(np.einsum("ij,j->i", AB, P) - np.einsum("ij,ij->i", AB, A), 0, None)
            t = np.clip(t / ab2, 0.0, 1.0)
            proj = A + AB * t[:, None]
            dx = proj[:, 0] - px
            dy = proj[:, 1] - py
            d = np.hypot(dx, dy)
            same = poly_idx == pi
            if poly.closed and total > 0:
                arc_proj = arc0 + t * seg_len
                gap = np.abs(arc_proj - arc)
                gap = np.minimum(gap, total - gap)
                near_self = same & (gap < SELF_ARC_CUTOFF_MM)
            else:
                arc_proj = arc0 + t * seg_len
                near_self = same & (np.abs(arc_proj - arc) < SELF_ARC_CUTOFF_MM)
            safe_d = np.where(d > 1e-12, d, 1.0)
            tangential = (
                (np.abs(dx * own.x + dy * own.y) > cos45 * safe_d)
                | (np.abs(dx * tangents[:, 0] + dy * tangents[:, 1]) > cos45 * safe_d)
            ) & (d > 1e-12)
            d[near_self | tangential] = math.inf
            i = int(np.argmin(d))
            if d[i] < best[0]:
                best = (float(d[i]), Point2(px, py))
    return best


def check_feasibility(drawing: SwatchDrawing,
                      rules: FeasibilityRule = FeasibilityRule()) -> list[Violation]:
    """Report every wall thinner than the rule (after extra-kerf narrowing).

    The 1 mm wall rule already assumes the reference 0.2 mm kerf; only kerf in
    excess of the reference narrows the effective wall."""
    extra_kerf = max(0.0, rules.kerf - KERF_REFERENCE_MM)
    violations = []
    for name, polys in drawing.parts.items():
        width, where = measure_min_wall(polys)
        effective = width - extra_kerf
        if effective < rules.min_wall - 1e-3:
            violations.append(
                Violation(
                    part=name,
                    location=where,
                    measured_wall=width,
                    message=(
                        f"{name}: wall {width:.3f} mm (effective {effective:.3f} mm "
                        f"with kerf {rules.kerf:g}) below the "
                        f"{rules.min_wall:g} mm rule at "
                        f"({where.x:.2f}, {where.y:.2f})"
                    ),
                )
            )
    return violations


def export_fabrication_svg(drawing: SwatchDrawing) -> str:
    if not any(drawing.layers.values()):
        raise ValueError("empty drawing: nothing to export")
    meta = DrawingMetadata(
        title=drawing.metadata.title,
        comments=tuple(drawing.metadata.comments) + LASER_SETTINGS
        if not set(LASER_SETTINGS) <= set(drawing.metadata.comments)
        else drawing.metadata.comments,
    )
    return export_polyline_svg([], metadata=meta, groups=drawing.layers)
