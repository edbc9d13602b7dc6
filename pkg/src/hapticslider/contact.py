"""Quasi-static contact between the side spring arm and the slider profile.

For a given displacement the profile is shifted along the press axis and the
arm's deflection angle is found by bisection: starting from the full
deflection bracket, the candidate closest to the profile without intersecting
it is kept and the bracket halved until the tip sits within tolerance of the
contour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .geometry import (
    Point2,
    Polyline,
    Profile,
    profile_closest_point,
    penetrates,
    translate,
)
from .springs import ArmModel

DEFAULT_TOLERANCE_MM = 0.005
MAX_ITERATIONS = 64
# over-deflection guard: keep solving past the 4 mm limit so the violation can
# be located and reported instead of silently clipped at the bracket edge
OVER_DEFLECTION_GUARD = 1.5

CONTACT = "contact"
NO_CONTACT = "no_contact"
OVER_DEFLECTION = "over_deflection"


class ContactSolverError(RuntimeError):
    """Bisection failed to converge within the iteration cap; carries the last
    bracket, which signals a pathological profile."""

    def __init__(self, message: str, bracket: tuple[float, float]):
        super().__init__(f"{message} (last bracket: [{bracket[0]:.9f}, {bracket[1]:.9f}] rad)")
        self.bracket = bracket


@dataclass(frozen=True)
class ContactQuery:
    arm: ArmModel
    profile: Profile
    displacement_s: float
    tolerance: float = DEFAULT_TOLERANCE_MM

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.displacement_s < 0:
            raise ValueError("displacement must be non-negative")


@dataclass(frozen=True)
class ContactResult:
    state: str
    deflection_angle: float
    tip_deflection_d: float
    contact_point: Point2 | None
    normal: Point2 | None
    tangent: Point2 | None
    iterations: int = 0
    diagnostic: str = ""

    @property
    def in_contact(self) -> bool:
        return self.state == CONTACT


def _shifted_profile(profile: Profile, s: float) -> Profile:
    # slider travel is along -y: pressing by s shifts the contour down
    return Profile(
        translate(profile.contour, Point2(0.0, -s)),
        side=profile.side,
        material_side=profile.material_side,
    )


def solve_contact(query: ContactQuery) -> ContactResult:
    arm = query.arm
    shifted = _shifted_profile(query.profile, query.displacement_s)
    tol = query.tolerance

    rest_tip = arm.tip_position(arm.rest_angle)
    if not penetrates(shifted, rest_tip):
        cp = profile_closest_point(shifted, rest_tip)
        if cp.distance <= tol:
            return ContactResult(
                state=CONTACT,
                deflection_angle=arm.rest_angle,
                tip_deflection_d=0.0,
                contact_point=cp.point,
                normal=cp.normal,
                tangent=cp.tangent,
            )
        return ContactResult(
            state=NO_CONTACT,
            deflection_angle=arm.rest_angle,
            tip_deflection_d=0.0,
            contact_point=None,
            normal=None,
            tangent=None,
        )

    # undeflected tip penetrates: bisect the deflection angle for the boundary
    guard_d = min(
        arm.max_deflection * OVER_DEFLECTION_GUARD,
        arm.arm_length * (1.0 - math.cos(arm.rest_angle)) - 1e-9,
    )
    hi = arm.angle_for_deflection(guard_d)
    lo = arm.rest_angle
    if penetrates(shifted, arm.tip_position(hi)):
        # assembly interference: even the guard deflection cannot escape
        cp = profile_closest_point(shifted, arm.tip_position(hi))
        return ContactResult(
            state=OVER_DEFLECTION,
            deflection_angle=hi,
            tip_deflection_d=arm.deflection(hi),
            contact_point=cp.point,
            normal=cp.normal,
            tangent=cp.tangent,
            diagnostic="interference: profile penetrates beyond the guard deflection",
        )

    iterations = 0
    # halve until the surviving candidate's tip deflection bracket is tighter
    # than the contact tolerance
    angular_goal = tol / arm.arm_length
    while iterations < MAX_ITERATIONS:
        if (hi - lo) <= angular_goal:
            break
        mid = 0.5 * (lo + hi)
        if penetrates(shifted, arm.tip_position(mid)):
            lo = mid
        else:
            hi = mid
        iterations += 1

    tip = arm.tip_position(hi)
    cp = profile_closest_point(shifted, tip)
    if cp.distance > tol:
        raise ContactSolverError(
            f"contact bisection did not converge at s={query.displacement_s:g} mm",
            (lo, hi),
        )
    d = arm.deflection(hi)
    state = CONTACT
    diagnostic = ""
    if d > arm.max_deflection + 1e-9:
        state = OVER_DEFLECTION
        diagnostic = (
            f"required deflection {d:.3f} mm exceeds the "
            f"{arm.max_deflection:g} mm limit"
        )
    return ContactResult(
        state=state,
        deflection_angle=hi,
        tip_deflection_d=d,
        contact_point=cp.point,
        normal=cp.normal,
        tangent=cp.tangent,
        iterations=iterations,
        diagnostic=diagnostic,
    )
