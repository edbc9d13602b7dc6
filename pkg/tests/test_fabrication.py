import math

import pytest

from hapticslider.geometry import Point2, Polyline
from hapticslider.svg_io import DrawingMetadata, import_polylines_svg
from hapticslider.fabrication import (
    LASER_SETTINGS,
    PART_SPACING_MM,
    FeasibilityRule,
    LayoutError,
    SwatchDrawing,
    check_feasibility,
    export_fabrication_svg,
    layout_swatch,
    measure_min_wall,
)
from hapticslider.fixtures import (
    bump_mechanism,
    bump_profile,
    symmetric_double_mechanism,
)
from hapticslider.estimator import Mechanism, SideAssembly
from hapticslider.springs import SideSpringSpec


def rectangle(x0, y0, x1, y1):
    return Polyline([(x0, y0), (x1, y0), (x1, y1), (x0, y1)], closed=True)


def ring_fixture(wall: float):
    """Two concentric squares whose gap is the wall under test."""
    return [rectangle(-5, -5, 5, 5), rectangle(-5 + wall, -5 + wall, 5 - wall, 5 - wall)]


class TestMeasureMinWall:
    def test_concentric_squares(self):
        wall, where = measure_min_wall(ring_fixture(2.0))
        assert wall == pytest.approx(2.0, abs=1e-9)
        wall_thin, _ = measure_min_wall(ring_fixture(0.5))
        assert wall_thin == pytest.approx(0.5, abs=1e-9)

    def test_single_convex_outline_has_wide_walls(self):
        wall, _ = measure_min_wall([rectangle(0, 0, 20, 6)])
        assert wall >= 6.0 - 1e-9

    def test_self_wall_within_one_outline(self):
        # U-shape with a 0.8 mm slot between the prongs
        u = Polyline(
            [(0, 0), (5, 0), (5, 10), (2.9, 10), (2.9, 2), (2.1, 2), (2.1, 10), (0, 10)],
            closed=True,
        )
        wall, _ = measure_min_wall([u])
        assert wall == pytest.approx(0.8, abs=1e-9)


class TestCheckFeasibility:
    def drawing(self, polys):
        return SwatchDrawing(parts={"part": polys}, layers={"cut": polys, "engrave": []})

    def test_half_millimeter_wall_flagged(self):
        violations = check_feasibility(self.drawing(ring_fixture(0.5)))
        assert len(violations) == 1
        v = violations[0]
        assert v.part == "part"
        assert v.measured_wall == pytest.approx(0.5, abs=1e-6)
        assert "below the 1 mm rule" in v.message

    def test_one_millimeter_wall_passes_at_reference_kerf(self):
        assert check_feasibility(self.drawing(ring_fixture(1.0))) == []

    def test_excess_kerf_narrows_effective_wall(self):
        rules = FeasibilityRule(kerf=0.6)
        # 1.3 mm wall: fine at the 0.2 mm reference kerf, too thin at 0.6 mm
        assert check_feasibility(self.drawing(ring_fixture(1.3))) == []
        violations = check_feasibility(self.drawing(ring_fixture(1.3)), rules)
        assert len(violations) == 1
        assert "effective" in violations[0].message

    def test_custom_min_wall(self):
        rules = FeasibilityRule(min_wall=2.5)
        assert check_feasibility(self.drawing(ring_fixture(2.0)), rules)

    def test_rule_validation(self):
        with pytest.raises(ValueError):
            FeasibilityRule(min_wall=0.0)


class TestLayout:
    def test_parts_present_and_spaced(self):
        drawing = layout_swatch(bump_mechanism(base_spring=True), name="demo")
        assert set(drawing.parts) == {
            "slider", "chassis", "side_spring_right", "base_spring", "fastener_holes"
        }
        assert drawing.metadata.title == "demo"
        # parts must not overlap: bounding boxes separated by the nesting gap
        boxes = []
        for polys in drawing.parts.values():
            xs0, ys0, xs1, ys1 = zip(*(p.bounds() for p in polys))
            boxes.append((min(xs0), max(xs1)))
        boxes.sort()
        for (a0, a1), (b0, b1) in zip(boxes, boxes[1:]):
            assert b0 - a1 >= PART_SPACING_MM - 1e-9

    def test_double_sided_has_mirrored_springs(self):
        drawing = layout_swatch(symmetric_double_mechanism())
        assert "side_spring_left" in drawing.parts
        assert "side_spring_right" in drawing.parts
        # assembly-space mounts mirror about the travel axis
        left = drawing.spring_mounts["left"]
        right = drawing.spring_mounts["right"]
        assert left.x == pytest.approx(-right.x)
        assert left.y == pytest.approx(right.y)

    def test_generated_swatch_is_feasible(self):
        drawing = layout_swatch(bump_mechanism(base_spring=True))
        assert check_feasibility(drawing) == []

    def test_slider_edge_carries_the_profile(self):
        drawing = layout_swatch(bump_mechanism())
        (slider,) = drawing.parts["slider"]
        xs = [p.x for p in slider.points]
        # bump amplitude 2 must appear in the outline (width spans > blank)
        assert max(xs) - min(xs) >= 2.0

    def test_oversize_profile_rejected(self):
        wide = bump_profile(amplitude=20.0, center=25.0, half_width=20.0, travel=50.0)
        mech = Mechanism(
            sides=(SideAssembly(profile=wide, spring=SideSpringSpec("A", 1.0)),),
            travel=50.0,
        )
        with pytest.raises(LayoutError):
            layout_swatch(mech)


class TestExport:
    def test_svg_contains_laser_settings_and_layers(self):
        drawing = layout_swatch(bump_mechanism(base_spring=True))
        svg = export_fabrication_svg(drawing)
        for comment in LASER_SETTINGS:
            assert comment in svg
        assert '<g id="cut">' in svg
        assert '<g id="engrave">' in svg
        # exported geometry re-imports with every cut path intact
        back = import_polylines_svg(svg)
        assert len(back) == len(drawing.layers["cut"]) + len(drawing.layers["engrave"])

    def test_empty_drawing_rejected(self):
        empty = SwatchDrawing(parts={}, layers={"cut": [], "engrave": []},
                              metadata=DrawingMetadata())
        with pytest.raises(ValueError):
            export_fabrication_svg(empty)
