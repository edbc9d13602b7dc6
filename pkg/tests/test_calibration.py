import io
import math
import random

import pytest

from hapticslider.calibration import (
    CalibrationError,
    MeasurementSample,
    MeasurementSchemaError,
    MeasurementSeries,
    aggregate_scale_factors,
    calibration_report,
    curve_as_series,
    fit_scale_factor,
    fit_zero_intercept,
    ingest_measurement_csv,
    parse_measurement_csv,
    score_curve,
)
from hapticslider.estimator import estimate_curve
from hapticslider.fixtures import bump_mechanism, ramp_mechanism


def linear_series(slope: float, n: int = 21, noise: float = 0.0,
                  rng: random.Random | None = None) -> MeasurementSeries:
    samples = []
    for direction in ("forward", "reverse"):
        for i in range(n):
            x = i * 0.5
            eps = rng.gauss(0.0, noise) if rng and noise else 0.0
            samples.append(MeasurementSample(x, slope * x + eps, direction))
    return MeasurementSeries(tuple(samples))


class TestZeroInterceptFit:
    def test_exact_recovery(self):
        pts = [(x * 0.25, 0.37 * x * 0.25) for x in range(1, 30)]
        fit = fit_zero_intercept(pts)
        assert fit.slope == pytest.approx(0.37, abs=1e-12)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)
        assert fit.n == len(pts)

    def test_noise_reduces_r_squared(self):
        rng = random.Random(5)
        pts = [(x, 2.0 * x + rng.gauss(0, 0.5)) for x in range(1, 50)]
        fit = fit_zero_intercept(pts)
        assert fit.slope == pytest.approx(2.0, abs=0.05)
        assert fit.r_squared < 1.0

    def test_requires_samples_and_nonzero_x(self):
        with pytest.raises(CalibrationError):
            fit_zero_intercept([(1.0, 1.0)])
        with pytest.raises(CalibrationError):
            fit_zero_intercept([(0.0, 1.0), (0.0, 2.0)])


class TestScaleFactor:
    def test_planted_factor_recovered_exactly(self):
        sim = linear_series(1.0)
        measured = linear_series(0.57)
        assert fit_scale_factor(sim, measured) == pytest.approx(0.57, abs=1e-12)

    def test_resamples_measured_onto_simulated_grid(self):
        sim = linear_series(1.0, n=11)  # 0..5 step 0.5
        meas_samples = tuple(
            MeasurementSample(x * 0.333, 0.8 * x * 0.333, d)
            for d in ("forward", "reverse") for x in range(18)
        )
        measured = MeasurementSeries(meas_samples)
        assert fit_scale_factor(sim, measured) == pytest.approx(0.8, abs=1e-9)

    def test_zero_energy_rejected(self):
        sim = MeasurementSeries(tuple(
            MeasurementSample(i * 1.0, 0.0, "forward") for i in range(3)
        ))
        with pytest.raises(CalibrationError):
            fit_scale_factor(sim, linear_series(1.0))

    def test_aggregate(self):
        mean, sd = aggregate_scale_factors([0.5, 0.6, 0.7])
        assert mean == pytest.approx(0.6)
        assert sd == pytest.approx(0.1, abs=1e-9)
        mean1, sd1 = aggregate_scale_factors([0.57])
        assert (mean1, sd1) == (0.57, 0.0)
        with pytest.raises(CalibrationError):
            aggregate_scale_factors([])


class TestScore:
    def test_identical_series_scores_zero(self):
        curve = estimate_curve(bump_mechanism())
        series = curve_as_series(curve)
        score = score_curve(curve, series)
        for direction in ("forward", "reverse"):
            assert score.rmse[direction] == pytest.approx(0.0, abs=1e-12)
            assert score.peak_location_offset[direction] == 0.0
            assert score.peak_value_offset[direction] == 0.0

    def test_uniform_offset_shows_in_rmse(self):
        curve = estimate_curve(ramp_mechanism())
        shifted = MeasurementSeries(tuple(
            MeasurementSample(s.displacement, s.force + 0.05, s.direction)
            for s in curve_as_series(curve).samples
        ))
        score = score_curve(curve, shifted)
        assert score.rmse["forward"] == pytest.approx(0.05, abs=1e-9)
        assert score.peak_value_offset["forward"] == pytest.approx(-0.05, abs=1e-9)

    def test_disjoint_ranges_rejected(self):
        curve = estimate_curve(ramp_mechanism())
        far = MeasurementSeries(tuple(
            MeasurementSample(100.0 + i, 1.0, "forward") for i in range(3)
        ))
        with pytest.raises(CalibrationError):
            score_curve(curve, far)


VALID_CSV = """# rig log
displacement_mm,force_N,direction
0.0,0.00,forward
1.0,0.10,forward
0.0,0.00,reverse
1.0,0.05,reverse
"""


class TestCsvIngestion:
    def test_valid_document(self):
        series = parse_measurement_csv(VALID_CSV)
        assert len(series.samples) == 4
        assert series.directions() == ["forward", "reverse"]
        xs, fs = series.arrays("forward")
        assert xs == [0.0, 1.0] and fs == [0.0, 0.1]

    def test_wrong_header_reports_line_and_units(self):
        bad = "displacement_mm,force_mN,direction\n0,0,forward\n"
        with pytest.raises(MeasurementSchemaError, match="line 1.*newtons"):
            parse_measurement_csv(bad)

    def test_bad_direction_and_numbers(self):
        with pytest.raises(MeasurementSchemaError, match="line 3"):
            parse_measurement_csv(
                "displacement_mm,force_N,direction\n0,0,forward\n1,x,forward\n"
            )
        with pytest.raises(MeasurementSchemaError, match="direction"):
            parse_measurement_csv(
                "displacement_mm,force_N,direction\n0,0,up\n1,1,up\n"
            )

    def test_empty_and_headerless(self):
        with pytest.raises(MeasurementSchemaError):
            parse_measurement_csv("# nothing here\n")
        with pytest.raises(MeasurementSchemaError):
            parse_measurement_csv("displacement_mm,force_N,direction\n")

    def test_needs_two_samples_per_direction(self):
        with pytest.raises(CalibrationError):
            parse_measurement_csv(
                "displacement_mm,force_N,direction\n0,0,forward\n"
                "1,1,forward\n0.5,0.2,reverse\n"
            )

    def test_ingest_path_and_file_like(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text(VALID_CSV)
        from_path = ingest_measurement_csv(str(p))
        from_file = ingest_measurement_csv(io.StringIO(VALID_CSV))
        assert from_path.samples == from_file.samples
        assert from_path.source_label == str(p)


class TestReport:
    def test_report_format(self):
        fit = fit_zero_intercept([(1.0, 0.5), (2.0, 1.0)])
        text = calibration_report(0.57, [fit])
        assert "scale factor alpha = 0.5700" in text
        assert "R^2 = 1.0000" in text
        assert text.endswith("\n")
