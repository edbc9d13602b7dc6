"""Estimate the force-displacement curve of a single-bump slider.

A compliant side spring rides on the slider's shaped edge.  Pressing the
slider (displacement s, in mm) deflects the spring over the bump; resolving
the contact force per displacement yields separate curves for pressing
(forward) and releasing (reverse) -- the gap between them is friction, and a
reverse force below zero means the slider would stick.

Run:  python3 demos/01_estimate_fd_curve.py
"""

from hapticslider import estimate_curve
from hapticslider.fixtures import bump_mechanism, wall_mechanism


def describe(name, curve):
    print(f"--- {name} ---")
    print(f"{len(curve.samples)} samples over {curve.travel:g} mm of travel")
    peak = max(curve.samples, key=lambda s: s.force_forward)
    print(f"forward peak: {peak.force_forward:.4f} N at s = {peak.displacement_s:.1f} mm")
    for w in curve.warnings:
        a, b = w.displacement_range
        print(f"warning: {w.kind} over [{a:.1f}, {b:.1f}] mm")
    if not curve.warnings:
        print("no warnings")
    print()


def ascii_plot(curve, width=60):
    top = max(max(curve.forward()), 1e-9)
    for s in curve.samples[:: max(1, len(curve.samples) // 25)]:
        bar = "#" * max(0, int(round(s.force_forward / top * width)))
        print(f"s={s.displacement_s:5.1f} mm |{bar}")


def main():
    # a single triangular bump centered at s = 5 mm acts as one detent
    bump = estimate_curve(bump_mechanism())
    describe("single bump (one detent)", bump)
    ascii_plot(bump)
    print()

    # adding the serpentine base spring turns it into a self-returning button:
    # both curves shift up by k_B * s, lifting the reverse curve above zero
    with_base = estimate_curve(bump_mechanism(base_spring=True))
    describe("single bump + base return spring", with_base)

    # a wall parallel to the travel axis only rubs -- friction makes the
    # reverse curve negative there, so the mechanism latches
    describe("latching wall", estimate_curve(wall_mechanism()))


if __name__ == "__main__":
    main()
