"""Force-displacement estimation.

Resolves side-spring contacts into reaction forces with a static free-body
balance and samples them across the slider travel into forward/reverse FD
curves.  Sign convention: positive force opposes the press direction, so a
reverse curve dipping below zero marks a sticking span (the springs cannot
push the slider back out against friction).

Per contacting profile:
    F_S        = k * d, along the spring's deflection axis toward the profile
    F_P        = (F_S . n) n, the force acting on the profile
    F_Friction = mu * |F_P| along the contact tangent, opposing slider motion
    contribution = vertical components of F_P + F_Friction
The base spring adds k_B * s to both directions; a non-contacting profile
contributes zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterator

from .geometry import Point2, Profile
from .springs import ArmModel, ArmMount, BaseSpringSpec, SideSpringSpec, abstract_arm
from .contact import (
    CONTACT,
    NO_CONTACT,
    OVER_DEFLECTION,
    ContactQuery,
    ContactResult,
    DEFAULT_TOLERANCE_MM,
    solve_contact,
)

DEFAULT_FRICTION_MU = 0.21
DEFAULT_STEP_MM = 0.1
FORCE_ENVELOPE_N = 5.0  # light force feedback design envelope

FORWARD = "forward"
REVERSE = "reverse"

WARN_OVER_DEFLECTION = "over_deflection"
WARN_STICKING = "sticking"
WARN_NO_CONTACT_SPAN = "no_contact_span"


class MechanismError(ValueError):
    pass


@dataclass(frozen=True)
class SideAssembly:
    """One profile with its side spring and arm placement.

    When no mount is given the arm's rest tip is placed on the contour at
    travel coordinate 0 (touching, zero deflection at rest)."""

    profile: Profile
    spring: SideSpringSpec
    mount: ArmMount | None = None
    arm: ArmModel = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mount = self.mount
        if mount is None:
            mount = ArmMount(
                rest_tip=Point2(self.profile.x_at(0.0), 0.0),
                side=self.profile.side,
            )
        object.__setattr__(self, "arm", abstract_arm(self.spring, mount))


@dataclass(frozen=True)
class Mechanism:
    sides: tuple[SideAssembly, ...]
    base_spring: BaseSpringSpec | None = None
    travel: float = 10.0
    friction_mu: float = DEFAULT_FRICTION_MU
    contact_tolerance: float = DEFAULT_TOLERANCE_MM

    def __post_init__(self):
        sides = tuple(self.sides)
        object.__setattr__(self, "sides", sides)
        if not 1 <= len(sides) <= 2:
            raise MechanismError("a mechanism has 1 or 2 side assemblies")
        if len(sides) == 2 and sides[0].profile.side == sides[1].profile.side:
            raise MechanismError("double-sided mechanisms need profiles on opposite sides")
        if self.travel <= 0:
            raise MechanismError("travel must be positive")
        if self.friction_mu < 0:
            raise MechanismError("friction coefficient must be non-negative")

    def single_sided(self, index: int) -> "Mechanism":
        """The mechanism reduced to one side, without the base spring."""
        return replace(self, sides=(self.sides[index],), base_spring=None)


@dataclass(frozen=True)
class FDWarning:
    kind: str
    displacement_range: tuple[float, float]


@dataclass(frozen=True)
class FDSample:
    displacement_s: float
    force_forward: float
    force_reverse: float
    # sampling-time flags carried into span warnings
    over_deflection: bool = False
    no_contact: bool = False


@dataclass(frozen=True)
class FDCurve:
    samples: tuple[FDSample, ...]
    step: float
    warnings: tuple[FDWarning, ...] = ()
    advisories: tuple[str, ...] = ()

    @property
    def travel(self) -> float:
        return self.samples[-1].displacement_s

    def displacements(self) -> list[float]:
        return [s.displacement_s for s in self.samples]

    def forward(self) -> list[float]:
        return [s.force_forward for s in self.samples]

    def reverse(self) -> list[float]:
        return [s.force_reverse for s in self.samples]

    def value_at(self, s: float, direction: str = FORWARD) -> float:
        xs = self.displacements()
        ys = self.forward() if direction == FORWARD else self.reverse()
        return _interp(s, xs, ys)


def _interp(x, xs, ys):
    if x <= xs[0]:
        return ys[0]
    if x >= xs[-1]:
        return ys[-1]
    lo, hi = 0, len(xs) - 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if xs[mid] <= x:
            lo = mid
        else:
            hi = mid
    t = (x - xs[lo]) / (xs[hi] - xs[lo])
    return ys[lo] + t * (ys[hi] - ys[lo])


# ---------------------------------------------------------------------------
# free-body resolution


def resolve_reaction(k: float, d: float, mu: float, normal: Point2, tangent: Point2,
                     direction: str, deflection_sign: int = 1) -> float:
    """Vertical reaction (N, positive opposes pressing) of one side contact.

    ``normal`` points away from the material, ``tangent`` along the contour
    toward increasing travel coordinate; ``deflection_sign`` is +1 when the
    spring deflects along +x (right side), -1 for the left side.
    """
    if d <= 0.0 or k <= 0.0:
        return 0.0
    # spring force: k*d along the deflection axis, pushing back onto the profile
    fs_x = -k * d * deflection_sign
    fsn = fs_x * normal.x  # F_S . n  (<= 0: presses into the material)
    fp_y = fsn * normal.y
    # friction opposes the slider's motion along the contact tangent
    motion_y = -1.0 if direction == FORWARD else 1.0
    t_dot_motion = tangent.y * motion_y
    if abs(t_dot_motion) < 1e-15:
        fric_y = 0.0
    else:
        fric_dir = tangent if t_dot_motion < 0 else tangent * -1.0
        fric_y = mu * abs(fsn) * fric_dir.y
    return fp_y + fric_y


@dataclass(frozen=True)
class SideReaction:
    contact: ContactResult
    effective_deflection: float
    force_forward: float
    force_reverse: float


@dataclass(frozen=True)
class ReactionSample:
    displacement_s: float
    force_forward: float
    force_reverse: float
    side_reactions: tuple[SideReaction, ...]
    base_force: float

    @property
    def any_contact(self) -> bool:
        return any(r.contact.state != NO_CONTACT for r in self.side_reactions)

    @property
    def any_over_deflection(self) -> bool:
        return any(r.contact.state == OVER_DEFLECTION for r in self.side_reactions)


def sample_reaction(mechanism: Mechanism, s: float) -> ReactionSample:
    """Both-direction reaction forces and per-side contact detail at one
    displacement.  Over-deflected contacts are clamped to the spring's maximum
    deflection for force purposes (the warning span marks the violation)."""
    if s < -1e-12 or s > mechanism.travel + 1e-9:
        raise MechanismError(f"displacement {s:g} outside [0, {mechanism.travel:g}]")
    s = max(0.0, s)
    reactions = []
    fwd = 0.0
    rev = 0.0
    for assembly in mechanism.sides:
        result = solve_contact(
            ContactQuery(
                arm=assembly.arm,
                profile=assembly.profile,
                displacement_s=s,
                tolerance=mechanism.contact_tolerance,
            )
        )
        if result.state == NO_CONTACT:
            reactions.append(SideReaction(result, 0.0, 0.0, 0.0))
            continue
        d = min(result.tip_deflection_d, assembly.arm.max_deflection)
        args = (
            assembly.spring.coefficient_k,
            d,
            mechanism.friction_mu,
            result.normal,
            result.tangent,
        )
        f = resolve_reaction(*args, FORWARD, assembly.arm.deflection_sign)
        r = resolve_reaction(*args, REVERSE, assembly.arm.deflection_sign)
        reactions.append(SideReaction(result, d, f, r))
        fwd += f
        rev += r
    base = mechanism.base_spring.coefficient_kB * s if mechanism.base_spring else 0.0
    return ReactionSample(
        displacement_s=s,
        force_forward=fwd + base,
        force_reverse=rev + base,
        side_reactions=tuple(reactions),
        base_force=base,
    )


def reaction_at(mechanism: Mechanism, s: float, direction: str = FORWARD) -> float:
    """Reaction force (N) at displacement s for one travel direction."""
    sample = sample_reaction(mechanism, s)
    return sample.force_forward if direction == FORWARD else sample.force_reverse


# ---------------------------------------------------------------------------
# curve sampling


def displacement_grid(travel: float, step: float) -> list[float]:
    if step <= 0:
        raise ValueError("step must be positive")
    n = int(math.floor(travel / step + 1e-9))
    grid = [i * step for i in range(n + 1)]
    if travel - grid[-1] > 1e-9:
        grid.append(travel)
    return grid


def iter_samples(mechanism: Mechanism, step: float = DEFAULT_STEP_MM
                 ) -> Iterator[FDSample]:
    """Lazily estimate FD samples in displacement order.

    The generator form keeps estimation incremental and cancellable: callers
    may stop consuming between samples, and each sample is a pure function of
    (mechanism, s) so evaluation could be parallelized upstream.
    """
    for s in displacement_grid(mechanism.travel, step):
        rs = sample_reaction(mechanism, s)
        yield FDSample(
            displacement_s=s,
            force_forward=rs.force_forward,
            force_reverse=rs.force_reverse,
            over_deflection=rs.any_over_deflection,
            no_contact=not rs.any_contact,
        )


def _spans(samples, predicate) -> list[tuple[float, float]]:
    spans = []
    start = None
    prev = None
    for smp in samples:
        if predicate(smp):
            if start is None:
                start = smp.displacement_s
            prev = smp.displacement_s
        else:
            if start is not None:
                spans.append((start, prev))
                start = None
    if start is not None:
        spans.append((start, prev))
    return spans


def detect_warnings(curve: FDCurve) -> list[FDWarning]:
    """Sticking spans (reverse force below zero) plus the over-deflection and
    no-contact spans recorded while sampling."""
    warnings = []
    for a, b in _spans(curve.samples, lambda s: s.over_deflection):
        warnings.append(FDWarning(WARN_OVER_DEFLECTION, (a, b)))
    for a, b in _spans(curve.samples, lambda s: s.no_contact):
        warnings.append(FDWarning(WARN_NO_CONTACT_SPAN, (a, b)))
    for a, b in _spans(curve.samples, lambda s: s.force_reverse < 0.0):
        warnings.append(FDWarning(WARN_STICKING, (a, b)))
    return warnings


def estimate_curve(mechanism: Mechanism, step: float = DEFAULT_STEP_MM) -> FDCurve:
    samples = tuple(iter_samples(mechanism, step))
    curve = FDCurve(samples=samples, step=step)
    warnings = tuple(detect_warnings(curve))
    advisories = []
    peak = max(max(s.force_forward for s in samples),
               max(s.force_reverse for s in samples))
    if peak > FORCE_ENVELOPE_N:
        advisories.append(
            f"peak force {peak:.2f} N exceeds the {FORCE_ENVELOPE_N:g} N design envelope"
        )
    return FDCurve(samples=samples, step=step, warnings=warnings,
                   advisories=tuple(advisories))


# ---------------------------------------------------------------------------
# overlay / comparison


@dataclass(frozen=True)
class OverlayTable:
    displacements: tuple[float, ...]
    forward: tuple[tuple[float, ...], ...]   # one row per curve
    reverse: tuple[tuple[float, ...], ...]
    max_forward_delta: dict[tuple[int, int], float]


def overlay(curves: list[FDCurve]) -> OverlayTable:
    """Align curves onto the first curve's displacement grid (linear
    resampling where grids differ) for plotting and diffing."""
    if not curves:
        raise ValueError("no curves to overlay")
    grid = curves[0].displacements()
    fwd_rows = []
    rev_rows = []
    for c in curves:
        xs = c.displacements()
        if xs == grid:
            fwd_rows.append(tuple(c.forward()))
            rev_rows.append(tuple(c.reverse()))
        else:
            fwd_rows.append(tuple(_interp(x, xs, c.forward()) for x in grid))
            rev_rows.append(tuple(_interp(x, xs, c.reverse()) for x in grid))
    deltas = {}
    for i in range(len(curves)):
        for j in range(i + 1, len(curves)):
            deltas[(i, j)] = max(
                abs(a - b) for a, b in zip(fwd_rows[i], fwd_rows[j])
            )
    return OverlayTable(tuple(grid), tuple(fwd_rows), tuple(rev_rows), deltas)


# ---------------------------------------------------------------------------
# CSV interchange

FD_CSV_HEADER = "displacement_mm,force_forward_N,force_reverse_N"


def curve_to_csv(curve: FDCurve) -> str:
    lines = [FD_CSV_HEADER]
    for s in curve.samples:
        lines.append(
            f"{s.displacement_s:.6f},{s.force_forward:.9f},{s.force_reverse:.9f}"
        )
    for w in curve.warnings:
        a, b = w.displacement_range
        lines.append(f"# warning: {w.kind} over [{a:.6f}, {b:.6f}] mm")
    for a in curve.advisories:
        lines.append(f"# advisory: {a}")
    return "\n".join(lines) + "\n"
