"""Bundled example profiles and mechanisms.

These reconstruct the canonical test shapes used throughout the docs and the
acceptance suite: a single bump (detent), a 45-degree ramp, a latching wall, a
flat no-contact profile, and staggered/asymmetric variants.  All use the
standard frame: travel along -y, profile baseline at x = 0, side spring rest
tip touching the baseline at travel coordinate 0.
"""

from __future__ import annotations

from .geometry import Point2, Polyline, Profile, mirror_x
from .springs import ArmMount, BaseSpringSpec, SideSpringSpec
from .estimator import Mechanism, SideAssembly

# engagement margin beyond the travel zone at both contour ends
ENGAGEMENT_MARGIN_MM = 2.0

DEFAULT_SPRING = dict(family="A", ring_thickness=1.0)  # k = 0.13 N/mm


def _profile(points, side="right") -> Profile:
    poly = Polyline(points)
    if side == "left":
        poly = mirror_x(poly)
    return Profile(poly, side=side, material_side=-1 if side == "right" else 1)


def bump_profile(side: str = "right", amplitude: float = 2.0, center: float = 5.0,
                 half_width: float = 2.0, travel: float = 10.0) -> Profile:
    """Single triangular bump (45-degree flanks by default): one detent."""
    y0 = -ENGAGEMENT_MARGIN_MM
    y1 = travel + ENGAGEMENT_MARGIN_MM
    return _profile(
        [
            (0.0, y0),
            (0.0, center - half_width),
            (amplitude, center),
            (0.0, center + half_width),
            (0.0, y1),
        ],
        side,
    )


def ramp_profile(side: str = "right", start: float = 3.0, slope_height: float = 4.0,
                 travel: float = 5.0) -> Profile:
    """A 45-degree rising ramp that keeps climbing past the travel end, so the
    mechanism never sees a descending flank (no sticking anywhere)."""
    y_top = travel + ENGAGEMENT_MARGIN_MM
    return _profile(
        [
            (0.0, -ENGAGEMENT_MARGIN_MM),
            (0.0, start),
            (y_top - start, y_top),
        ],
        side,
    )


def wall_profile(side: str = "right", ramp_start: float = 2.0, depth: float = 2.0,
                 travel: float = 10.0) -> Profile:
    """45-degree ramp up to a constant-deflection wall running parallel to the
    travel axis: the wall span has no outward force component, so friction
    makes the reverse curve dip below zero (sticking)."""
    wall_start = ramp_start + depth
    y_top = travel + ENGAGEMENT_MARGIN_MM
    return _profile(
        [
            (0.0, -ENGAGEMENT_MARGIN_MM),
            (0.0, ramp_start),
            (depth, wall_start),
            (depth, y_top),
        ],
        side,
    )


def flat_profile(side: str = "right", travel: float = 10.0) -> Profile:
    return _profile(
        [(0.0, -ENGAGEMENT_MARGIN_MM), (0.0, travel + ENGAGEMENT_MARGIN_MM)], side
    )


def _assembly(profile: Profile, clearance: float = 0.0, **spring_kwargs) -> SideAssembly:
    spring = SideSpringSpec(**{**DEFAULT_SPRING, **spring_kwargs})
    mount = None
    if clearance:
        sign = 1 if profile.side == "right" else -1
        mount = ArmMount(
            rest_tip=Point2(profile.x_at(0.0) + sign * clearance, 0.0),
            side=profile.side,
        )
    return SideAssembly(profile=profile, spring=spring, mount=mount)


def bump_mechanism(base_spring: bool = False, travel: float = 10.0) -> Mechanism:
    base = BaseSpringSpec(width=16.0, arm_thickness=1.0) if base_spring else None
    return Mechanism(
        sides=(_assembly(bump_profile(travel=travel)),),
        base_spring=base,
        travel=travel,
    )


def ramp_mechanism(travel: float = 5.0) -> Mechanism:
    return Mechanism(sides=(_assembly(ramp_profile(travel=travel)),), travel=travel)


def wall_mechanism(travel: float = 10.0) -> Mechanism:
    return Mechanism(sides=(_assembly(wall_profile(travel=travel)),), travel=travel)


def flat_mechanism(travel: float = 10.0) -> Mechanism:
    # 1 mm clearance: the spring never reaches the flat contour
    return Mechanism(
        sides=(_assembly(flat_profile(travel=travel), clearance=1.0),), travel=travel
    )


def symmetric_double_mechanism(base_spring: bool = False, travel: float = 10.0) -> Mechanism:
    base = BaseSpringSpec(width=16.0, arm_thickness=1.0) if base_spring else None
    return Mechanism(
        sides=(
            _assembly(bump_profile(side="right", travel=travel)),
            _assembly(bump_profile(side="left", travel=travel)),
        ),
        base_spring=base,
        travel=travel,
    )


def asymmetric_double_mechanism(stagger: float = 2.0, travel: float = 10.0) -> Mechanism:
    """Same bump on both sides, staggered along the travel on the left."""
    return Mechanism(
        sides=(
            _assembly(bump_profile(side="right", center=4.0, travel=travel)),
            _assembly(bump_profile(side="left", center=4.0 + stagger, travel=travel)),
        ),
        travel=travel,
    )


def seven_test_profiles(travel: float = 10.0) -> list[Profile]:
    """Seven representative test contours (bump, double bump, sawtooth, ramp,
    wave, staggered bumps, wall) for export/regression exercises."""
    y0 = -ENGAGEMENT_MARGIN_MM
    y1 = travel + ENGAGEMENT_MARGIN_MM
    profiles = [
        bump_profile(travel=travel),
        _profile([(0.0, y0), (0.0, 2.0), (1.5, 3.0), (0.0, 4.0), (0.0, 6.0),
                  (1.5, 7.0), (0.0, 8.0), (0.0, y1)]),
        _profile([(0.0, y0), (0.0, 1.0), (2.0, 3.5), (0.2, 4.0), (2.0, 6.5),
                  (0.2, 7.0), (2.0, 9.5), (0.0, y1)]),
        _profile([(0.0, y0), (0.0, 2.0), (3.0, 8.0), (3.0, y1)]),
        _profile([(0.0, y0), (0.5, 1.0), (1.5, 3.0), (0.5, 5.0), (1.5, 7.0),
                  (0.5, 9.0), (0.0, y1)]),
        bump_profile(center=7.0, travel=travel),
        wall_profile(travel=travel),
    ]
    return profiles
