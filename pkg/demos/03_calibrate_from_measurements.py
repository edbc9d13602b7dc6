"""Calibrate simulation output against (synthetic) rig measurements.

Laser-cut POM springs come out softer than their FEA models predict, by a
roughly constant factor.  Given a measured force-displacement log and the
corresponding simulated curve, fitting a single multiplicative scale factor
recovers that adjustment; zero-intercept line fits characterize individual
springs.

Run:  python3 demos/03_calibrate_from_measurements.py
"""

import random

from hapticslider import estimate_curve, fit_scale_factor, fit_zero_intercept
from hapticslider.calibration import (
    MeasurementSample,
    MeasurementSeries,
    aggregate_scale_factors,
    calibration_report,
    curve_as_series,
    score_curve,
)
from hapticslider.fixtures import bump_mechanism


def noisy_copy(series, scale, sigma, rng):
    return MeasurementSeries(tuple(
        MeasurementSample(s.displacement, scale * s.force + rng.gauss(0, sigma),
                          s.direction)
        for s in series.samples
    ))


def main():
    rng = random.Random(1)
    simulated = curve_as_series(estimate_curve(bump_mechanism(base_spring=True)))

    # pretend the physical swatch produced 57% of the simulated force + noise
    factors = []
    for trial in range(5):
        measured = noisy_copy(simulated, scale=0.57, sigma=0.005, rng=rng)
        factors.append(fit_scale_factor(simulated, measured))
    mean, sd = aggregate_scale_factors(factors)
    print(f"recovered scale factor over 5 noisy rigs: {mean:.4f} +/- {sd:.4f}")

    # characterize one spring: force vs deflection through the origin
    k_true = 0.13
    pts = [(d, k_true * d + rng.gauss(0, 0.001)) for d in
           [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]]
    fit = fit_zero_intercept(pts)
    print(calibration_report(mean, [fit]), end="")

    # score the estimate against the "measurement"
    curve = estimate_curve(bump_mechanism(base_spring=True))
    measured = noisy_copy(simulated, scale=1.0, sigma=0.002, rng=rng)
    score = score_curve(curve, measured)
    for direction in ("forward", "reverse"):
        print(f"{direction}: RMSE {score.rmse[direction]:.4f} N, "
              f"peak offset {score.peak_location_offset[direction]:+.2f} mm / "
              f"{score.peak_value_offset[direction]:+.4f} N")


if __name__ == "__main__":
    main()
