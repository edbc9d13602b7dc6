"""Design a hand-held test swatch and export a laser-ready SVG.

The swatch bundles everything needed to feel a force profile: the slider
carrying the shaped edge, a chassis plate with a travel slot, the compliant
side spring(s), an optional base return spring, and M3 fastener holes.  The
drawing is checked against the laser-cutting wall rules before export.

Run:  python3 demos/02_design_and_export_swatch.py  [output.svg]
"""

import sys

from hapticslider import check_feasibility, export_fabrication_svg, layout_swatch
from hapticslider.fabrication import FeasibilityRule
from hapticslider.fixtures import symmetric_double_mechanism


def main():
    out = sys.argv[1] if len(sys.argv) > 1 else "swatch.svg"

    # double-sided symmetric detent with a base return spring
    mechanism = symmetric_double_mechanism(base_spring=True)
    drawing = layout_swatch(mechanism, name="symmetric double bump")

    print("parts on the sheet:")
    for name, polys in drawing.parts.items():
        xs0, ys0, xs1, ys1 = zip(*(p.bounds() for p in polys))
        print(f"  {name:18s} {max(xs1) - min(xs0):6.1f} x {max(ys1) - min(ys0):5.1f} mm")

    violations = check_feasibility(drawing, FeasibilityRule(kerf=0.2))
    if violations:
        for v in violations:
            print(f"violation: {v.message}")
        raise SystemExit(2)
    print("feasibility: all walls meet the 1 mm rule")

    svg = export_fabrication_svg(drawing)
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    print(f"wrote {out} (includes the laser settings as comments)")


if __name__ == "__main__":
    main()
