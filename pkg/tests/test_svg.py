import math
import random

import pytest

from hapticslider.geometry import Point2, Polyline
from hapticslider.svg_io import (
    FLATTEN_TOLERANCE_MM,
    DrawingMetadata,
    ImportOptions,
    NoOpenPathError,
    NonMonotonicProfileError,
    ShortProfileError,
    SvgImportError,
    export_polyline_svg,
    import_polylines_svg,
    import_profile_svg,
    parse_path_data,
    polyline_path_data,
)


def svg_doc(paths: str, width: str | None = "100mm",
            viewbox: str | None = "0 0 100 100") -> str:
    attrs = 'xmlns="http://www.w3.org/2000/svg"'
    if width is not None:
        attrs += f' width="{width}" height="{width}"'
    if viewbox is not None:
        attrs += f' viewBox="{viewbox}"'
    return f"<svg {attrs}>{paths}</svg>"


class TestPathData:
    def test_basic_moveto_lineto(self):
        subs = parse_path_data("M 0 0 L 1 2 L 3 4")
        assert subs == [([(0.0, 0.0), (1.0, 2.0), (3.0, 4.0)], False)]

    def test_relative_commands(self):
        subs = parse_path_data("m 1 1 l 2 0 v 3 h -2")
        pts, closed = subs[0]
        assert pts == [(1, 1), (3, 1), (3, 4), (1, 4)]
        assert not closed

    def test_implicit_lineto_after_moveto(self):
        subs = parse_path_data("M 0 0 1 1 2 0")
        assert subs[0][0] == [(0, 0), (1, 1), (2, 0)]

    def test_close_flag_and_multiple_subpaths(self):
        subs = parse_path_data("M 0 0 L 1 0 L 1 1 Z M 5 5 L 6 6")
        assert subs[0][1] is True
        assert subs[1] == ([(5.0, 5.0), (6.0, 6.0)], False)

    def test_cubic_flattening_stays_within_tolerance(self):
        tol = 0.02
        p0, p1, p2, p3 = (0, 0), (10, 20), (30, -20), (40, 0)
        subs = parse_path_data("M 0 0 C 10 20 30 -20 40 0", tol=tol)
        pts = subs[0][0]
        assert len(pts) > 4  # actually subdivided
        # every flattened vertex lies on the exact curve's dense sampling
        def bez(t):
            mt = 1 - t
            x = mt**3 * p0[0] + 3 * mt**2 * t * p1[0] + 3 * mt * t**2 * p2[0] + t**3 * p3[0]
            y = mt**3 * p0[1] + 3 * mt**2 * t * p1[1] + 3 * mt * t**2 * p2[1] + t**3 * p3[1]
            return x, y

        dense = [bez(i / 2000.0) for i in range(2001)]
        for x, y in pts:
            d = min(math.hypot(x - bx, y - by) for bx, by in dense)
            assert d < tol + 1e-6
        assert pts[-1] == (40.0, 0.0)

    def test_quadratic_and_smooth_commands(self):
        subs = parse_path_data("M 0 0 Q 5 10 10 0 T 20 0")
        pts = subs[0][0]
        assert pts[-1] == (20.0, 0.0)
        assert len(pts) > 4

    def test_arc_points_lie_on_circle(self):
        # half circle of radius 5 centered at (5, 0)
        subs = parse_path_data("M 0 0 A 5 5 0 0 1 10 0", tol=0.01)
        pts = subs[0][0]
        assert pts[-1] == (10.0, 0.0)
        for x, y in pts:
            assert abs(math.hypot(x - 5.0, y - 0.0) - 5.0) < 0.02

    def test_unknown_leading_token_rejected(self):
        with pytest.raises(SvgImportError):
            parse_path_data("0 0 L 1 1")


class TestDocumentImport:
    def test_mm_units_scale_one(self):
        doc = svg_doc('<path d="M 0 0 L 10 0"/>')
        polys = import_polylines_svg(doc)
        assert polys[0].points == (Point2(0, 0), Point2(10, 0))

    def test_unitless_defaults_to_96_px_per_inch(self):
        doc = svg_doc('<path d="M 0 0 L 96 0"/>', width=None, viewbox=None)
        polys = import_polylines_svg(doc)
        assert polys[0].points[1].x == pytest.approx(25.4)

    def test_explicit_scale_override(self):
        doc = svg_doc('<path d="M 0 0 L 2 0"/>')
        polys = import_polylines_svg(doc, scale=5.0)
        assert polys[0].points[1].x == pytest.approx(10.0)

    def test_invalid_xml_rejected(self):
        with pytest.raises(SvgImportError):
            import_polylines_svg("<svg")

    def test_profile_import_basic(self):
        doc = svg_doc('<path d="M 0 0 L 2 5 L 2 10"/>')
        prof = import_profile_svg(doc)
        assert prof.side == "right"
        assert prof.contour.points[0] == Point2(0, 0)
        assert prof.x_at(5.0) == pytest.approx(2.0)

    def test_profile_import_reverses_decreasing_paths(self):
        doc = svg_doc('<path d="M 2 10 L 2 5 L 0 0"/>')
        prof = import_profile_svg(doc)
        ys = [p.y for p in prof.contour.points]
        assert ys == sorted(ys)

    def test_profile_import_rejects_overhangs(self):
        doc = svg_doc('<path d="M 0 0 L 2 5 L 1 3"/>')
        with pytest.raises(NonMonotonicProfileError):
            import_profile_svg(doc)

    def test_profile_import_requires_open_path(self):
        doc = svg_doc('<path d="M 0 0 L 2 5 L 0 10 Z"/>')
        with pytest.raises(NoOpenPathError):
            import_profile_svg(doc)

    def test_profile_import_min_travel_span(self):
        doc = svg_doc('<path d="M 0 0 L 0 4"/>')
        with pytest.raises(ShortProfileError):
            import_profile_svg(doc, ImportOptions(min_travel_span=10.0))
        prof = import_profile_svg(doc, ImportOptions(min_travel_span=4.0))
        assert prof.travel_span == (0.0, 4.0)

    def test_profile_import_options_side(self):
        doc = svg_doc('<path d="M 0 0 L -2 5"/>')
        prof = import_profile_svg(doc, ImportOptions(side="left", material_side=1))
        assert prof.side == "left"
        assert prof.material_side == 1


class TestExport:
    def test_round_trip_coordinates(self):
        rng = random.Random(11)
        shapes = []
        for _ in range(5):
            pts = [(rng.uniform(-40, 40), rng.uniform(-40, 40)) for _ in range(6)]
            shapes.append(Polyline(pts, closed=rng.random() < 0.5))
        doc = export_polyline_svg(shapes)
        back = import_polylines_svg(doc)
        assert len(back) == len(shapes)
        for a, b in zip(shapes, back):
            assert a.closed == b.closed
            assert len(a.points) == len(b.points)
            for pa, pb in zip(a.points, b.points):
                assert pa.distance(pb) <= 1e-6

    def test_export_groups_and_comments(self):
        shape = Polyline([(0, 0), (1, 1)])
        meta = DrawingMetadata(title="demo", comments=("laser: test",))
        doc = export_polyline_svg([shape], metadata=meta,
                                  groups={"cut": [Polyline([(2, 2), (3, 3)])]})
        assert "<title>demo</title>" in doc
        assert "<!-- laser: test -->" in doc
        assert '<g id="cut">' in doc
        assert doc.count("<path") == 2

    def test_export_empty_rejected(self):
        with pytest.raises(ValueError):
            export_polyline_svg([])

    def test_path_data_close_marker(self):
        d = polyline_path_data(Polyline([(0, 0), (1, 0), (1, 1)], closed=True))
        assert d.startswith("M ") and d.endswith("Z")

    def test_flatten_tolerance_constant(self):
        assert FLATTEN_TOLERANCE_MM == 0.02
