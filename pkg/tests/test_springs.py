import math
import os
import random

import pytest
from hypothesis import given, settings, strategies as st

from hapticslider.geometry import Point2
from hapticslider.springs import (
    BASE_ADJUSTMENT_FACTOR,
    MAX_SIDE_DEFLECTION_MM,
    MIN_WALL_MM,
    SIDE_ADJUSTMENT_FACTOR,
    TABLE_ENV_VAR,
    ArmModel,
    ArmMount,
    BaseSpringSpec,
    FeasibilityError,
    SideSpringSpec,
    SpringRangeError,
    abstract_arm,
    base_beam_length,
    base_spring_coefficient,
    default_table,
    generate_base_spring_outline,
    generate_side_spring_outline,
    load_coefficient_table,
    parse_coefficient_table,
    side_spring_coefficient,
)

SIDE_GRID = {
    ("A", 1.0): 0.13, ("A", 1.1): 0.17, ("A", 1.2): 0.22, ("A", 1.3): 0.28,
    ("A", 1.4): 0.35, ("A", 1.5): 0.42,
    ("B", 1.6): 0.30, ("B", 1.7): 0.36, ("B", 1.8): 0.43, ("B", 1.9): 0.50,
    ("B", 2.0): 0.58,
    ("C", 2.1): 0.44, ("C", 2.2): 0.51, ("C", 2.3): 0.58, ("C", 2.4): 0.65,
    ("C", 2.5): 0.74,
}
BASE_GRID = {
    (16.0, 1.0): 0.16, (16.0, 1.2): 0.27, (16.0, 1.4): 0.43, (16.0, 1.6): 0.65,
    (16.0, 1.8): 0.94,
    (20.0, 1.0): 0.08, (20.0, 1.2): 0.14, (20.0, 1.4): 0.22, (20.0, 1.6): 0.32,
    (20.0, 1.8): 0.47,
    (24.0, 1.0): 0.04, (24.0, 1.2): 0.08, (24.0, 1.4): 0.12, (24.0, 1.6): 0.18,
    (24.0, 1.8): 0.27,
}


class TestCoefficientTable:
    def test_all_side_grid_points_exact(self):
        for (family, t), k in SIDE_GRID.items():
            assert side_spring_coefficient(family, t) == k

    def test_all_base_grid_points_exact(self):
        for (w, t), k in BASE_GRID.items():
            assert base_spring_coefficient(w, t) == k

    def test_adjusted_is_fea_times_factor(self):
        table = default_table()
        for row in table.side_rows:
            assert row.adjusted_slope == pytest.approx(
                row.fea_slope * SIDE_ADJUSTMENT_FACTOR, abs=0.01
            )
        for row in table.base_rows:
            assert row.adjusted_slope == pytest.approx(
                row.fea_slope * BASE_ADJUSTMENT_FACTOR, abs=0.01
            )

    def test_side_interpolation_midpoint(self):
        assert side_spring_coefficient("A", 1.05) == pytest.approx(0.15)
        assert side_spring_coefficient("B", 1.65) == pytest.approx(0.33)

    def test_base_bilinear_interpolation(self):
        assert base_spring_coefficient(20.0, 1.1) == pytest.approx(0.11)
        # width midpoint at a tabulated thickness
        assert base_spring_coefficient(18.0, 1.0) == pytest.approx((0.16 + 0.08) / 2)
        # both axes off-grid
        assert base_spring_coefficient(18.0, 1.1) == pytest.approx(
            ((0.16 + 0.27) / 2 + (0.08 + 0.14) / 2) / 2
        )

    def test_beam_length_lookup(self):
        assert base_beam_length(16.0, 1.0) == pytest.approx(14.14)
        assert base_beam_length(24.0, 1.8) == pytest.approx(20.50)

    def test_out_of_range_thickness_rejected(self):
        with pytest.raises(SpringRangeError):
            side_spring_coefficient("A", 1.6)  # belongs to family B's range
        with pytest.raises(SpringRangeError):
            side_spring_coefficient("A", 0.9)
        with pytest.raises(SpringRangeError):
            side_spring_coefficient("C", 2.6)

    def test_unknown_family_rejected(self):
        with pytest.raises(SpringRangeError):
            side_spring_coefficient("D", 1.0)

    def test_base_width_out_of_grid_rejected(self):
        with pytest.raises(SpringRangeError):
            base_spring_coefficient(15.0, 1.0)
        with pytest.raises(SpringRangeError):
            base_spring_coefficient(25.0, 1.0)
        with pytest.raises(SpringRangeError):
            base_spring_coefficient(20.0, 1.9)

    def test_env_var_table_override(self, tmp_path, monkeypatch):
        alt = tmp_path / "table.csv"
        alt.write_text(
            "# version 7\n"
            "kind,family,thickness,beam_length,fea_slope,adjusted_slope\n"
            "side,A,1.0,,1.0,0.99\n"
            "side,A,2.0,,2.0,1.99\n"
        )
        monkeypatch.setenv(TABLE_ENV_VAR, str(alt))
        table = load_coefficient_table()
        assert table.version == 7
        assert side_spring_coefficient("A", 1.0, table) == 0.99

    def test_parse_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            parse_coefficient_table(
                "kind,family,thickness,beam_length,fea_slope,adjusted_slope\n"
                "bogus,A,1.0,,1.0,0.5\n"
            )


class TestSideSpringSpec:
    def test_auto_coefficient_and_geometry(self):
        spec = SideSpringSpec("A", 1.0)
        assert spec.coefficient_k == 0.13
        assert spec.arm_length == 40.0
        assert spec.ring_outer_radius == 6.0
        assert spec.max_deflection == MAX_SIDE_DEFLECTION_MM
        assert spec.arm_width == pytest.approx(2.0)

    def test_family_geometry_grows(self):
        assert SideSpringSpec("B", 1.8).ring_outer_radius == 7.0
        assert SideSpringSpec("C", 2.5).ring_outer_radius == 8.0

    def test_thin_ring_is_infeasible_not_out_of_range(self):
        with pytest.raises(FeasibilityError):
            SideSpringSpec("A", 0.5)

    def test_out_of_family_range_rejected(self):
        with pytest.raises(SpringRangeError):
            SideSpringSpec("A", 2.0)

    def test_explicit_coefficient_bypasses_table(self):
        spec = SideSpringSpec("A", 1.0, coefficient_k=0.5)
        assert spec.coefficient_k == 0.5


class TestBaseSpringSpec:
    def test_auto_beam_length_and_coefficient(self):
        spec = BaseSpringSpec(width=16.0, arm_thickness=1.0)
        assert spec.beam_length == pytest.approx(14.14)
        assert spec.coefficient_kB == 0.16

    def test_side_posts_follow_wall_rule(self):
        # table geometries always leave posts of at least W - B = 1.86 mm
        for (w, t) in BASE_GRID:
            spec = BaseSpringSpec(width=w, arm_thickness=t)
            assert w - spec.beam_length >= 1.86 - 1e-9
        with pytest.raises(FeasibilityError):
            BaseSpringSpec(width=16.0, arm_thickness=1.0, beam_length=15.5)

    def test_thin_arm_rejected(self):
        with pytest.raises(FeasibilityError):
            BaseSpringSpec(width=16.0, arm_thickness=0.8)

    def test_thin_beam_gap_rejected(self):
        with pytest.raises(FeasibilityError):
            BaseSpringSpec(width=16.0, arm_thickness=1.0, beam_gap=0.5)


class TestArmModel:
    def make_arm(self, side="right"):
        spec = SideSpringSpec("A", 1.0)
        return abstract_arm(spec, ArmMount(Point2(3.0, -1.0), side))

    def test_rest_geometry(self):
        arm = self.make_arm()
        assert arm.rest_angle == pytest.approx(-math.pi / 2)
        assert arm.pivot == Point2(3.0, 39.0)
        assert arm.rest_tip.distance(Point2(3.0, -1.0)) < 1e-12
        assert arm.deflection(arm.rest_angle) == pytest.approx(0.0)

    def test_max_angle_reaches_max_deflection(self):
        arm = self.make_arm()
        assert arm.deflection(arm.max_angle) == pytest.approx(4.0)

    def test_left_side_deflects_toward_minus_x(self):
        arm = self.make_arm("left")
        assert arm.deflection_sign == -1
        tip = arm.tip_position(arm.angle_for_deflection(2.0))
        assert tip.x == pytest.approx(3.0 - 2.0)

    def test_deflection_is_monotonic(self):
        arm = self.make_arm()
        thetas = [arm.rest_angle + i * (arm.max_angle - arm.rest_angle) / 50
                  for i in range(51)]
        ds = [arm.deflection(t) for t in thetas]
        assert all(b > a for a, b in zip(ds, ds[1:]))

    @given(st.floats(0.0, 4.0))
    @settings(max_examples=100, deadline=None)
    def test_angle_for_deflection_inverts_deflection(self, d):
        arm = self.make_arm()
        assert arm.deflection(arm.angle_for_deflection(d)) == pytest.approx(d, abs=1e-12)

    def test_unreachable_deflection_rejected(self):
        arm = self.make_arm()
        with pytest.raises(ValueError):
            arm.angle_for_deflection(41.0)

    def test_invalid_angle_order_rejected(self):
        with pytest.raises(ValueError):
            ArmModel(pivot=Point2(0, 0), arm_length=40.0, rest_angle=-1.0,
                     max_angle=-1.5, coefficient_k=0.13)


class TestOutlines:
    def test_side_outline_shapes(self):
        spec = SideSpringSpec("A", 1.0)
        outer, inner = generate_side_spring_outline(spec)
        assert outer.closed and inner.closed
        # inner hole is a circle of the ring inner radius about the pivot
        ri = spec.ring_outer_radius - spec.ring_thickness
        for p in inner.points:
            assert p.norm() == pytest.approx(ri, abs=1e-9)
        # wedge apex sits at the arm tip
        assert any(p.distance(Point2(0.0, -spec.arm_length)) < 1e-9
                   for p in outer.points)

    def test_ring_wall_measures_exactly_the_thickness(self):
        spec = SideSpringSpec("A", 1.2)
        outer, inner = generate_side_spring_outline(spec)
        pairs = min(
            a.distance(b) for a in outer.points for b in inner.points
            if a.norm() > spec.ring_outer_radius - 1e-6
        )
        assert pairs == pytest.approx(spec.ring_thickness, abs=1e-6)

    def test_base_outline_serpentine(self):
        spec = BaseSpringSpec(width=16.0, arm_thickness=1.0)
        (outline,) = generate_base_spring_outline(spec)
        assert outline.closed
        x0, y0, x1, y1 = outline.bounds()
        assert x1 - x0 == pytest.approx(spec.width)
        expected_h = spec.beam_count * spec.arm_thickness + \
            (spec.beam_count - 1) * spec.beam_gap
        assert y1 - y0 == pytest.approx(expected_h)
        # slots alternate sides: both x = B and x = W - B appear as inner edges
        xs = {round(p.x, 6) for p in outline.points}
        assert round(spec.beam_length, 6) in xs
        assert round(spec.width - spec.beam_length, 6) in xs

    def test_outline_walls_meet_the_rule(self):
        from hapticslider.fabrication import measure_min_wall

        for family, t in [("A", 1.0), ("B", 1.6), ("C", 2.1)]:
            wall, _ = measure_min_wall(generate_side_spring_outline(SideSpringSpec(family, t)))
            assert wall >= MIN_WALL_MM - 1e-3
        wall, _ = measure_min_wall(
            generate_base_spring_outline(BaseSpringSpec(width=16.0, arm_thickness=1.0))
        )
        assert wall >= MIN_WALL_MM - 1e-3
