"""Simulation-to-measurement calibration.

Measurement rigs log force vs displacement per travel direction.  This module
fits zero-intercept slopes to spring characterization runs, fits scale factors
between simulated and measured series (the empirical laser-cut adjustment),
and scores estimated FD curves against physical measurements.

R-squared for zero-intercept fits uses the uncentered definition
(1 - SS_res / sum(y^2)), the standard choice when the intercept is suppressed.
"""

from __future__ import annotations

import io
import math
import statistics
from dataclasses import dataclass

from .estimator import FDCurve, FORWARD, REVERSE, _interp

MEASUREMENT_CSV_HEADER = "displacement_mm,force_N,direction"
DIRECTIONS = (FORWARD, REVERSE)


class CalibrationError(ValueError):
    pass


class MeasurementSchemaError(CalibrationError):
    pass


@dataclass(frozen=True)
class MeasurementSample:
    displacement: float
    force: float
    direction: str


@dataclass(frozen=True)
class MeasurementSeries:
    samples: tuple[MeasurementSample, ...]
    source_label: str = ""

    def __post_init__(self):
        if any(s.displacement < 0 for s in self.samples):
            raise CalibrationError("measurement displacements must be non-negative")
        for direction in {s.direction for s in self.samples}:
            if direction not in DIRECTIONS:
                raise CalibrationError(f"unknown direction {direction!r}")
            if len(self.direction_samples(direction)) < 2:
                raise CalibrationError(
                    f"need at least 2 samples in direction {direction!r}"
                )
        if not self.samples:
            raise CalibrationError("empty measurement series")

    def directions(self) -> list[str]:
        return [d for d in DIRECTIONS if any(s.direction == d for s in self.samples)]

    def direction_samples(self, direction: str) -> list[MeasurementSample]:
        return sorted(
            (s for s in self.samples if s.direction == direction),
            key=lambda s: s.displacement,
        )

    def arrays(self, direction: str) -> tuple[list[float], list[float]]:
        samples = self.direction_samples(direction)
        return [s.displacement for s in samples], [s.force for s in samples]


@dataclass(frozen=True)
class FitResult:
    slope: float
    r_squared: float
    n: int


def fit_zero_intercept(samples: list[tuple[float, float]]) -> FitResult:
    """Least-squares line through the origin: slope = sum(xy) / sum(x^2)."""
    if len(samples) < 2:
        raise CalibrationError("zero-intercept fit needs at least 2 samples")
    sxx = sum(x * x for x, _ in samples)
    if sxx <= 0.0:
        raise CalibrationError("undefined fit: all x values are zero")
    sxy = sum(x * y for x, y in samples)
    slope = sxy / sxx
    syy = sum(y * y for _, y in samples)
    ss_res = sum((y - slope * x) ** 2 for x, y in samples)
    r2 = 1.0 if syy <= 0.0 else 1.0 - ss_res / syy
    return FitResult(slope=slope, r_squared=r2, n=len(samples))


def fit_scale_factor(simulated: MeasurementSeries, measured: MeasurementSeries) -> float:
    """Best-fit multiplier alpha minimizing sum((measured - alpha*simulated)^2),
    with the measured series resampled onto the simulated displacements."""
    num = 0.0
    den = 0.0
    for direction in simulated.directions():
        if direction not in measured.directions():
            continue
        sx, sf = simulated.arrays(direction)
        mx, mf = measured.arrays(direction)
        for x, sim in zip(sx, sf):
            if x < mx[0] - 1e-9 or x > mx[-1] + 1e-9:
                continue
            m = _interp(x, mx, mf)
            num += m * sim
            den += sim * sim
    if den <= 0.0:
        raise CalibrationError("undefined scale factor: simulated series has zero energy")
    return num / den


def aggregate_scale_factors(factors: list[float]) -> tuple[float, float]:
    """Mean-of-fits adjustment factor and its standard deviation."""
    if not factors:
        raise CalibrationError("no scale factors to aggregate")
    mean = statistics.fmean(factors)
    sd = statistics.stdev(factors) if len(factors) > 1 else 0.0
    return mean, sd


@dataclass(frozen=True)
class CurveScore:
    rmse: dict[str, float]                  # per direction, N
    peak_location_offset: dict[str, float]  # estimated - measured, mm
    peak_value_offset: dict[str, float]     # estimated - measured, N


def score_curve(estimated: FDCurve, measured: MeasurementSeries) -> CurveScore:
    """Quantify gradient and offset discrepancies between an estimated curve
    and rig measurements: per-direction RMSE plus peak location/value offsets."""
    rmse = {}
    ploc = {}
    pval = {}
    est_x = estimated.displacements()
    for direction in measured.directions():
        mx, mf = measured.arrays(direction)
        est_f = estimated.forward() if direction == FORWARD else estimated.reverse()
        lo = max(est_x[0], mx[0])
        hi = min(est_x[-1], mx[-1])
        if hi - lo <= 0:
            raise CalibrationError(
                f"no overlapping displacement range in direction {direction!r}"
            )
        pairs = [
            (e, _interp(x, mx, mf))
            for x, e in zip(est_x, est_f)
            if lo - 1e-9 <= x <= hi + 1e-9
        ]
        rmse[direction] = math.sqrt(
            sum((e - m) ** 2 for e, m in pairs) / len(pairs)
        )
        ei = max(range(len(est_x)), key=lambda i: est_f[i])
        mi = max(range(len(mx)), key=lambda i: mf[i])
        ploc[direction] = est_x[ei] - mx[mi]
        pval[direction] = est_f[ei] - mf[mi]
    return CurveScore(rmse=rmse, peak_location_offset=ploc, peak_value_offset=pval)


# ---------------------------------------------------------------------------
# measurement CSV ingestion


def parse_measurement_csv(text: str, source_label: str = "") -> MeasurementSeries:
    lines = text.splitlines()
    header = None
    samples = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            if line.replace(" ", "") != MEASUREMENT_CSV_HEADER:
                raise MeasurementSchemaError(
                    f"line {lineno}: expected header {MEASUREMENT_CSV_HEADER!r}, "
                    f"got {line!r} (forces must be in newtons)"
                )
            header = line
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise MeasurementSchemaError(f"line {lineno}: expected 3 columns, got {len(parts)}")
        try:
            disp = float(parts[0])
            force = float(parts[1])
        except ValueError as exc:
            raise MeasurementSchemaError(f"line {lineno}: malformed number: {exc}") from exc
        if parts[2] not in DIRECTIONS:
            raise MeasurementSchemaError(
                f"line {lineno}: direction must be forward or reverse, got {parts[2]!r}"
            )
        samples.append(MeasurementSample(disp, force, parts[2]))
    if header is None:
        raise MeasurementSchemaError("missing header: file is empty or all comments")
    if not samples:
        raise MeasurementSchemaError("no data rows after the header")
    return MeasurementSeries(tuple(samples), source_label=source_label)


def ingest_measurement_csv(source) -> MeasurementSeries:
    """Read a measurement CSV from a path or file-like object."""
    if hasattr(source, "read"):
        return parse_measurement_csv(source.read(), source_label=getattr(source, "name", ""))
    with open(source, "r", encoding="utf-8") as fh:
        return parse_measurement_csv(fh.read(), source_label=str(source))


def curve_as_series(curve: FDCurve, source_label: str = "estimate") -> MeasurementSeries:
    """View an FD curve as a measurement series (both directions)."""
    samples = []
    for s in curve.samples:
        samples.append(MeasurementSample(s.displacement_s, s.force_forward, FORWARD))
        samples.append(MeasurementSample(s.displacement_s, s.force_reverse, REVERSE))
    return MeasurementSeries(tuple(samples), source_label=source_label)


def calibration_report(alpha: float, fits: list[FitResult] | None = None) -> str:
    """Plain-text calibration report; a CSV twin is one line per value."""
    lines = [f"scale factor alpha = {alpha:.4f}"]
    if fits:
        for i, f in enumerate(fits):
            lines.append(
                f"fit[{i}]: slope = {f.slope:.4f} N/mm, R^2 = {f.r_squared:.4f}, n = {f.n}"
            )
    return "\n".join(lines) + "\n"
