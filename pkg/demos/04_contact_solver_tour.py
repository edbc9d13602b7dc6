"""A tour of the quasi-static contact solver.

The side spring is abstracted as a rigid arm pivoting about its ring centre.
For each slider displacement the solver bisects the arm angle until the tip
sits within 0.005 mm of the (shifted) profile contour, classifying the result
as contact, no contact, or over-deflection.

Run:  python3 demos/04_contact_solver_tour.py
"""

from hapticslider import Point2, solve_contact
from hapticslider.contact import ContactQuery
from hapticslider.springs import ArmMount, SideSpringSpec, abstract_arm
from hapticslider.fixtures import bump_profile, wall_profile


def main():
    spec = SideSpringSpec("A", 1.0)  # k = 0.13 N/mm, 40 mm arm
    arm = abstract_arm(spec, ArmMount(Point2(0.0, 0.0), "right"))
    print(f"arm: length {arm.arm_length:g} mm, pivot at "
          f"({arm.pivot.x:g}, {arm.pivot.y:g}), max deflection "
          f"{arm.max_deflection:g} mm\n")

    profile = bump_profile()  # triangular bump, apex 2 mm at travel coordinate 5
    print("sliding over the bump:")
    print(f"{'s (mm)':>8} {'state':>16} {'deflection (mm)':>16} {'iterations':>11}")
    for s in [0.0, 2.0, 3.5, 4.0, 4.5, 5.0, 6.0, 7.0, 9.0]:
        res = solve_contact(ContactQuery(arm, profile, s))
        print(f"{s:8.1f} {res.state:>16} {res.tip_deflection_d:16.4f} "
              f"{res.iterations:11d}")

    # a wall deeper than the 4 mm spring limit triggers the over-deflection
    # diagnostic instead of silently clamping
    deep = wall_profile(depth=4.5)
    res = solve_contact(ContactQuery(arm, deep, 8.0))
    print(f"\n4.5 mm wall at s = 8: state = {res.state}")
    print(f"diagnostic: {res.diagnostic}")


if __name__ == "__main__":
    main()
