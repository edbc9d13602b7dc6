"""Parametric side and base spring models.

The side spring behaves like a torsion spring: a compliant ring with a rigid
straight arm whose tip (shaped with 45 degree slopes on both sides) rides on
the slider's edge profile.  For simulation the side spring is abstracted into
an arm pivoting about the ring centre; the spring coefficient k (N/mm) is
defined against the horizontal deflection of the tip.

The base spring is a serpentine stack of cantilevered beams that returns the
slider to rest with a near-linear force k_B * s.

Spring coefficients come from a versioned lookup table
(``data/spring_coefficients.csv``) holding FEA-derived slopes and their
empirically adjusted values (x0.57 for side springs, x0.49 for base springs).
Lookups interpolate linearly between adjacent grid points; queries outside a
family's tabulated thickness range are rejected rather than extrapolated.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from importlib import resources

from .geometry import Point2, Polyline

MAX_SIDE_DEFLECTION_MM = 4.0
MIN_WALL_MM = 1.0
SIDE_ADJUSTMENT_FACTOR = 0.57
BASE_ADJUSTMENT_FACTOR = 0.49

# Geometry defaults not fixed by the coefficient table.  The families share an
# arm length; ring size grows with family.  All overridable per spec instance.
FAMILY_GEOMETRY = {
    "A": {"ring_outer_radius": 6.0, "arm_length": 40.0},
    "B": {"ring_outer_radius": 7.0, "arm_length": 40.0},
    "C": {"ring_outer_radius": 8.0, "arm_length": 40.0},
}

TABLE_ENV_VAR = "HAPTICSLIDER_TABLE"


class SpringRangeError(ValueError):
    """Requested parameters fall outside the tabulated grid."""


class FeasibilityError(ValueError):
    """Parameters would produce geometry that cannot be laser cut."""


@dataclass(frozen=True)
class SideRow:
    family: str
    thickness: float
    fea_slope: float
    adjusted_slope: float


@dataclass(frozen=True)
class BaseRow:
    width: float
    thickness: float
    beam_length: float
    fea_slope: float
    adjusted_slope: float


@dataclass(frozen=True)
class CoefficientTable:
    side_rows: tuple[SideRow, ...]
    base_rows: tuple[BaseRow, ...]
    version: int = 1
    side_factor: float = SIDE_ADJUSTMENT_FACTOR
    base_factor: float = BASE_ADJUSTMENT_FACTOR

    def side_family(self, family: str) -> list[SideRow]:
        rows = sorted(
            (r for r in self.side_rows if r.family == family),
            key=lambda r: r.thickness,
        )
        if not rows:
            raise SpringRangeError(f"unknown side spring family {family!r}")
        return rows

    def base_widths(self) -> list[float]:
        return sorted({r.width for r in self.base_rows})


def parse_coefficient_table(text: str) -> CoefficientTable:
    version = 1
    lines = []
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped.startswith("#"):
            if "version" in stripped:
                digits = "".join(ch for ch in stripped if ch.isdigit())
                if digits:
                    version = int(digits)
            continue
        if stripped:
            lines.append(raw)
    reader = csv.DictReader(io.StringIO("\n".join(lines)))
    side_rows, base_rows = [], []
    for row in reader:
        kind = row["kind"].strip()
        if kind == "side":
            side_rows.append(
                SideRow(
                    family=row["family"].strip(),
                    thickness=float(row["thickness"]),
                    fea_slope=float(row["fea_slope"]),
                    adjusted_slope=float(row["adjusted_slope"]),
                )
            )
        elif kind == "base":
            base_rows.append(
                BaseRow(
                    width=float(row["family"]),
                    thickness=float(row["thickness"]),
                    beam_length=float(row["beam_length"]),
                    fea_slope=float(row["fea_slope"]),
                    adjusted_slope=float(row["adjusted_slope"]),
                )
            )
        else:
            raise ValueError(f"unknown coefficient row kind {kind!r}")
    return CoefficientTable(tuple(side_rows), tuple(base_rows), version=version)


def load_coefficient_table(path: str | None = None) -> CoefficientTable:
    if path is None:
        path = os.environ.get(TABLE_ENV_VAR)
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_coefficient_table(fh.read())
    text = resources.files("hapticslider").joinpath("data/spring_coefficients.csv").read_text()
    return parse_coefficient_table(text)


_DEFAULT_TABLE: CoefficientTable | None = None


def default_table() -> CoefficientTable:
    global _DEFAULT_TABLE
    if _DEFAULT_TABLE is None:
        _DEFAULT_TABLE = load_coefficient_table()
    return _DEFAULT_TABLE


def _interp_1d(x: float, xs: list[float], ys: list[float], what: str) -> float:
    if x < xs[0] - 1e-9 or x > xs[-1] + 1e-9:
        raise SpringRangeError(
            f"{what} {x:g} outside the tabulated range [{xs[0]:g}, {xs[-1]:g}]"
        )
    x = min(max(x, xs[0]), xs[-1])
    for i in range(len(xs) - 1):
        if x <= xs[i + 1] + 1e-12:
            t = (x - xs[i]) / (xs[i + 1] - xs[i])
            return ys[i] + t * (ys[i + 1] - ys[i])
    return ys[-1]


def side_spring_coefficient(family: str, ring_thickness: float,
                            table: CoefficientTable | None = None) -> float:
    """Adjusted side spring coefficient (N/mm), linearly interpolated within
    the family's tabulated thickness range."""
    table = table or default_table()
    rows = table.side_family(family)
    xs = [r.thickness for r in rows]
    ys = [r.adjusted_slope for r in rows]
    return _interp_1d(ring_thickness, xs, ys, f"side spring {family} ring thickness")


def _base_column(table: CoefficientTable, width: float) -> list[BaseRow]:
    rows = sorted(
        (r for r in table.base_rows if abs(r.width - width) < 1e-9),
        key=lambda r: r.thickness,
    )
    return rows


def _base_interp(width: float, thickness: float, table: CoefficientTable,
                 attr: str) -> float:
    widths = table.base_widths()
    if width < widths[0] - 1e-9 or width > widths[-1] + 1e-9:
        raise SpringRangeError(
            f"base spring width {width:g} outside the tabulated grid "
            f"[{widths[0]:g}, {widths[-1]:g}]"
        )
    # value along thickness within each tabulated width, then along width
    def column_value(w):
        rows = _base_column(table, w)
        xs = [r.thickness for r in rows]
        ys = [getattr(r, attr) for r in rows]
        return _interp_1d(thickness, xs, ys, f"base spring arm thickness (W={w:g})")

    for w in widths:
        if abs(width - w) < 1e-9:
            return column_value(w)
    hi = next(i for i, w in enumerate(widths) if w > width)
    w0, w1 = widths[hi - 1], widths[hi]
    t = (width - w0) / (w1 - w0)
    return column_value(w0) + t * (column_value(w1) - column_value(w0))


def base_spring_coefficient(width: float, arm_thickness: float,
                            table: CoefficientTable | None = None) -> float:
    """Adjusted base spring coefficient (N/mm), bilinear inside the (W, T) grid."""
    return _base_interp(width, arm_thickness, table or default_table(), "adjusted_slope")


def base_beam_length(width: float, arm_thickness: float,
                     table: CoefficientTable | None = None) -> float:
    """Tabulated clear beam length B (mm) for a base spring geometry."""
    return _base_interp(width, arm_thickness, table or default_table(), "beam_length")


# ---------------------------------------------------------------------------
# spring specifications


@dataclass(frozen=True)
class SideSpringSpec:
    family: str
    ring_thickness: float
    arm_length: float = None  # type: ignore[assignment]
    ring_outer_radius: float = None  # type: ignore[assignment]
    max_deflection: float = MAX_SIDE_DEFLECTION_MM
    coefficient_k: float = None  # type: ignore[assignment]
    tip_radius: float = 0.0  # point contact by default

    def __post_init__(self):
        if self.family not in FAMILY_GEOMETRY:
            raise SpringRangeError(f"unknown side spring family {self.family!r}")
        if self.ring_thickness < MIN_WALL_MM:
            raise FeasibilityError(
                f"ring thickness {self.ring_thickness:g} mm is below the "
                f"{MIN_WALL_MM:g} mm laser-cutting wall rule"
            )
        defaults = FAMILY_GEOMETRY[self.family]
        if self.arm_length is None:
            object.__setattr__(self, "arm_length", defaults["arm_length"])
        if self.ring_outer_radius is None:
            object.__setattr__(self, "ring_outer_radius", defaults["ring_outer_radius"])
        if self.coefficient_k is None:
            object.__setattr__(
                self, "coefficient_k",
                side_spring_coefficient(self.family, self.ring_thickness),
            )
        if self.coefficient_k <= 0:
            raise ValueError("spring coefficient must be positive")
        if self.ring_outer_radius - self.ring_thickness < 1.0:
            raise FeasibilityError("ring inner radius too small for the requested thickness")

    @property
    def arm_width(self) -> float:
        # rigid arm: thicker than the compliant ring
        return self.ring_thickness + 1.0


@dataclass(frozen=True)
class BaseSpringSpec:
    width: float
    arm_thickness: float
    beam_length: float = None  # type: ignore[assignment]
    coefficient_kB: float = None  # type: ignore[assignment]
    beam_gap: float = 1.2
    beam_count: int = 5

    def __post_init__(self):
        if self.arm_thickness < MIN_WALL_MM:
            raise FeasibilityError(
                f"arm thickness {self.arm_thickness:g} mm is below the "
                f"{MIN_WALL_MM:g} mm laser-cutting wall rule"
            )
        if self.beam_length is None:
            object.__setattr__(
                self, "beam_length", base_beam_length(self.width, self.arm_thickness)
            )
        if self.coefficient_kB is None:
            object.__setattr__(
                self, "coefficient_kB",
                base_spring_coefficient(self.width, self.arm_thickness),
            )
        if self.coefficient_kB <= 0:
            raise ValueError("base spring coefficient must be positive")
        if self.width - self.beam_length < MIN_WALL_MM:
            raise FeasibilityError("side post thinner than the 1 mm wall rule")
        if self.beam_gap < MIN_WALL_MM:
            raise FeasibilityError("beam spacing below the 1 mm rule")


# ---------------------------------------------------------------------------
# arm abstraction


@dataclass(frozen=True)
class ArmMount:
    rest_tip: Point2
    side: str = "right"  # which side of the slider the spring sits on

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("mount side must be left or right")


@dataclass(frozen=True)
class ArmModel:
    """Side spring abstracted as a rigid arm pivoting about the ring centre.

    tip_position(theta) = pivot + arm_length * (sign * cos(theta), sin(theta))
    with sign = +1 for a right-side spring (deflection along +x) and -1 for a
    left-side spring.  Deflection d(theta) is the horizontal displacement of
    the tip from rest; d is strictly monotonic on [rest_angle, max_angle] and
    d(max_angle) equals the spring's maximum deflection.
    """

    pivot: Point2
    arm_length: float
    rest_angle: float
    max_angle: float
    coefficient_k: float
    deflection_sign: int = 1
    max_deflection: float = MAX_SIDE_DEFLECTION_MM

    def __post_init__(self):
        if self.max_angle <= self.rest_angle:
            raise ValueError("max_angle must exceed rest_angle")
        if not (-math.pi < self.rest_angle < 0 and -math.pi < self.max_angle <= 0):
            raise ValueError("arm angles must lie in (-pi, 0] for monotonic deflection")
        if self.deflection_sign not in (-1, 1):
            raise ValueError("deflection_sign must be +1 or -1")

    def tip_position(self, theta: float) -> Point2:
        return Point2(
            self.pivot.x + self.deflection_sign * self.arm_length * math.cos(theta),
            self.pivot.y + self.arm_length * math.sin(theta),
        )

    def deflection(self, theta: float) -> float:
        """Horizontal tip deflection (mm, >= 0) at arm angle theta."""
        return self.arm_length * (math.cos(theta) - math.cos(self.rest_angle))

    def angle_for_deflection(self, d: float) -> float:
        c = math.cos(self.rest_angle) + d / self.arm_length
        if c > 1.0:
            raise ValueError(f"deflection {d:g} mm geometrically unreachable")
        return -math.acos(c)

    @property
    def rest_tip(self) -> Point2:
        return self.tip_position(self.rest_angle)


def abstract_arm(spec: SideSpringSpec, mount: ArmMount) -> ArmModel:
    """Abstract a side spring into its pivoting-arm simulation model.

    The pivot sits at the ring centre, directly above the rest tip (the arm
    hangs along -y at rest), so the rest angle is -pi/2 and the maximum angle
    is where the horizontal tip deflection reaches the spring's limit.
    """
    rest_angle = -math.pi / 2.0
    max_angle = -math.acos(spec.max_deflection / spec.arm_length)
    pivot = Point2(mount.rest_tip.x, mount.rest_tip.y + spec.arm_length)
    return ArmModel(
        pivot=pivot,
        arm_length=spec.arm_length,
        rest_angle=rest_angle,
        max_angle=max_angle,
        coefficient_k=spec.coefficient_k,
        deflection_sign=1 if mount.side == "right" else -1,
        max_deflection=spec.max_deflection,
    )


# ---------------------------------------------------------------------------
# outline generation (fabrication geometry, part-local coordinates)


def _circle_points(center: Point2, radius: float, n: int, start: float = 0.0,
                   end: float = 2.0 * math.pi):
    return [
        Point2(center.x + radius * math.cos(start + (end - start) * i / n),
               center.y + radius * math.sin(start + (end - start) * i / n))
        for i in range(n + 1)
    ]


def generate_side_spring_outline(spec: SideSpringSpec, arc_segments: int = 720
                                 ) -> list[Polyline]:
    """Closed cut outlines for a side spring: outer boundary (ring + rigid arm
    + 45-degree wedge tip) and the inner ring hole.

    Local coordinates: pivot (ring centre) at the origin, arm hanging along
    -y, tip apex at (0, -arm_length).
    """
    T = spec.ring_thickness
    ro = spec.ring_outer_radius
    ri = ro - T
    w = spec.arm_width
    L = spec.arm_length
    if T < MIN_WALL_MM:
        raise FeasibilityError("ring wall below the 1 mm rule")
    if w / 2.0 >= ri:
        raise FeasibilityError("arm too wide for the ring hole")

    # outer boundary: arc from the right arm edge, counterclockwise over the
    # top, to the left arm edge; then the arm and wedge tip
    y_join = -math.sqrt(ro * ro - (w / 2.0) ** 2)
    a_right = math.atan2(y_join, w / 2.0)
    a_left = math.atan2(y_join, -w / 2.0)
    arc = _circle_points(Point2(0.0, 0.0), ro, arc_segments, start=a_right,
                         end=a_left + 2.0 * math.pi if a_left < a_right else a_left)
    outer_pts = arc + [
        Point2(-w / 2.0, -L + w / 2.0),
        Point2(0.0, -L),          # wedge apex: two 45 degree slopes
        Point2(w / 2.0, -L + w / 2.0),
    ]
    outer = Polyline(outer_pts, closed=True)
    # inner hole sampled from the same start angle so outer/inner vertices pair
    # up radially (the ring wall is measurable exactly at the aligned pair)
    inner = Polyline(
        _circle_points(Point2(0.0, 0.0), ri, arc_segments,
                       start=a_right, end=a_right + 2.0 * math.pi)[:-1],
        closed=True,
    )
    return [outer, inner]


def generate_base_spring_outline(spec: BaseSpringSpec) -> list[Polyline]:
    """Closed cut outline for a serpentine base spring.

    Rectilinear serpentine: ``beam_count`` horizontal beams of thickness T
    separated by slots of depth ``beam_length`` cut alternately from the right
    and left, leaving side posts of width W - B.  Local coordinates: bottom
    left corner at the origin, overall width = spec.width.
    """
    W = spec.width
    T = spec.arm_thickness
    B = spec.beam_length
    g = spec.beam_gap
    n = spec.beam_count
    slots = n - 1
    H = n * T + slots * g

    def slot_y(k):
        bottom = (k + 1) * T + k * g
        return bottom, bottom + g

    pts = [Point2(0.0, 0.0), Point2(W, 0.0)]
    # right edge upward, slots at even indices cut from the right
    for k in range(slots):
        if k % 2 == 0:
            yb, yt = slot_y(k)
            pts += [Point2(W, yb), Point2(W - B, yb), Point2(W - B, yt), Point2(W, yt)]
    pts += [Point2(W, H), Point2(0.0, H)]
    # left edge downward, slots at odd indices cut from the left
    for k in reversed(range(slots)):
        if k % 2 == 1:
            yb, yt = slot_y(k)
            pts += [Point2(0.0, yt), Point2(B, yt), Point2(B, yb), Point2(0.0, yb)]
    return [Polyline(pts, closed=True)]
