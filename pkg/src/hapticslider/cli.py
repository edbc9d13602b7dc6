"""Batch command-line surface: FD estimation, fabrication export, feasibility
checks, and calibration.

Exit codes: 0 success, 1 failure (load/solve error), 2 success with warnings
or violations -- scriptable sticking/feasibility checks for CI.
"""

from __future__ import annotations

import sys

import click

from .svg_io import import_polylines_svg, SvgImportError
from .springs import TABLE_ENV_VAR  # noqa: F401  (documented override hook)
from .estimator import curve_to_csv, estimate_curve
from .fabrication import (
    FeasibilityRule,
    SwatchDrawing,
    check_feasibility,
    export_fabrication_svg,
    layout_swatch,
)
from .calibration import (
    CalibrationError,
    calibration_report,
    fit_scale_factor,
    ingest_measurement_csv,
)
from .store import ArchiveSchemaError, load_archive_file
from .svg_io import DrawingMetadata


@click.group()
def main():
    """Design and estimate passive force-feedback slider mechanisms."""


def _load_project(archive: str, project_id: str):
    try:
        gallery = load_archive_file(archive)
    except (OSError, ArchiveSchemaError) as exc:
        raise click.ClickException(f"cannot load archive: {exc}")
    try:
        return gallery.get(project_id)
    except KeyError as exc:
        raise click.ClickException(str(exc))


@main.command()
@click.option("--project", "archive", required=True, type=click.Path(exists=True))
@click.option("--id", "project_id", required=True)
@click.option("--step", default=0.1, show_default=True, type=float)
@click.option("--out", "out_path", required=True, type=click.Path())
def estimate(archive, project_id, step, out_path):
    """Estimate the FD curve of a project and write it as CSV."""
    project = _load_project(archive, project_id)
    try:
        curve = estimate_curve(project.mechanism, step=step)
    except Exception as exc:
        raise click.ClickException(f"estimation failed: {exc}")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(curve_to_csv(curve))
    for w in curve.warnings:
        a, b = w.displacement_range
        click.echo(f"warning: {w.kind} over [{a:.3f}, {b:.3f}] mm", err=True)
    for a in curve.advisories:
        click.echo(f"advisory: {a}", err=True)
    click.echo(f"wrote {len(curve.samples)} samples to {out_path}")
    if curve.warnings:
        sys.exit(2)


@main.command()
@click.option("--project", "archive", required=True, type=click.Path(exists=True))
@click.option("--id", "project_id", required=True)
@click.option("--svg", "svg_path", required=True, type=click.Path())
def export(archive, project_id, svg_path):
    """Export a project's laser-ready swatch drawing as SVG."""
    project = _load_project(archive, project_id)
    try:
        drawing = layout_swatch(project.mechanism, name=project.name)
        svg = export_fabrication_svg(drawing)
    except Exception as exc:
        raise click.ClickException(f"export failed: {exc}")
    with open(svg_path, "w", encoding="utf-8") as fh:
        fh.write(svg)
    click.echo(f"wrote {svg_path}")


@main.command()
@click.option("--svg", "svg_path", required=True, type=click.Path(exists=True))
@click.option("--min-wall", default=1.0, show_default=True, type=float)
@click.option("--kerf", default=0.2, show_default=True, type=float)
def check(svg_path, min_wall, kerf):
    """Check an SVG drawing against the laser-cutting feasibility rules."""
    with open(svg_path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        shapes = import_polylines_svg(text)
    except SvgImportError as exc:
        raise click.ClickException(str(exc))
    if not shapes:
        raise click.ClickException("no paths found in the SVG")
    drawing = SwatchDrawing(
        parts={"drawing": shapes},
        layers={"cut": shapes, "engrave": []},
        metadata=DrawingMetadata(title=svg_path),
    )
    rules = FeasibilityRule(min_wall=min_wall, kerf=kerf)
    violations = check_feasibility(drawing, rules)
    if violations:
        for v in violations:
            click.echo(f"violation: {v.message}")
        sys.exit(2)
    click.echo("feasible: no wall-thickness violations")


@main.command()
@click.option("--measured", required=True, type=click.Path(exists=True))
@click.option("--simulated", required=True, type=click.Path(exists=True))
def calibrate(measured, simulated):
    """Fit the simulation-to-measurement scale factor."""
    try:
        measured_series = ingest_measurement_csv(measured)
        simulated_series = ingest_measurement_csv(simulated)
        alpha = fit_scale_factor(simulated_series, measured_series)
    except CalibrationError as exc:
        raise click.ClickException(str(exc))
    click.echo(calibration_report(alpha), nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8700, show_default=True, type=int)
@click.option("--archive", type=click.Path(exists=True), default=None,
              help="Preload a gallery archive.")
def serve(host, port, archive):
    """Run the sandbox HTTP service."""
    import uvicorn

    from .service import create_app
    from .store import Gallery

    gallery = Gallery()
    if archive:
        from .store import load_archive_file as _load

        gallery = _load(archive)
    uvicorn.run(create_app(gallery), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
