"""HTTP service exposing the engine to the sandbox UI.

JSON bodies mirror the archive schema (see store.py).  Every response carries
the engine and coefficient-table versions as a reproducibility stamp.  FD
curves stream as newline-delimited JSON records in displacement order so
clients can render progressively; closing the connection cancels the
computation between samples.
"""

from __future__ import annotations

import asyncio
import json
from importlib.metadata import PackageNotFoundError, version as pkg_version

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.responses import PlainTextResponse, StreamingResponse
from pydantic import BaseModel

from .geometry import GeometryError
from .svg_io import SvgImportError
from .springs import FeasibilityError, SpringRangeError, default_table
from .contact import ContactSolverError
from .estimator import (
    DEFAULT_STEP_MM,
    FDCurve,
    Mechanism,
    curve_to_csv,
    estimate_curve,
    detect_warnings,
    iter_samples,
    sample_reaction,
)
from .fabrication import layout_swatch, export_fabrication_svg
from .calibration import (
    CalibrationError,
    fit_scale_factor,
    parse_measurement_csv,
)
from .store import (
    ArchiveSchemaError,
    Gallery,
    Project,
    load_archive,
    mechanism_from_dict,
    profile_from_dict,
    project_to_dict,
    save_archive,
)

try:
    ENGINE_VERSION = pkg_version("hapticslider")
except PackageNotFoundError:  # running from a source tree
    ENGINE_VERSION = "0.1.0"

_ENGINE_ERRORS = (
    GeometryError,
    SvgImportError,
    FeasibilityError,
    SpringRangeError,
    ArchiveSchemaError,
    ContactSolverError,
    ValueError,
)


class ProjectCreate(BaseModel):
    name: str
    mechanism: dict
    edit_mode: str = "create"


class ProfilePut(BaseModel):
    profile: dict
    side_index: int = 0


class ParameterPatch(BaseModel):
    travel: float | None = None
    friction_mu: float | None = None
    base_spring: dict | None = None
    clear_base_spring: bool = False


class CalibrateRequest(BaseModel):
    simulated_csv: str
    measured_csv: str


def _stamp(payload: dict) -> dict:
    payload["engine_version"] = ENGINE_VERSION
    payload["table_version"] = default_table().version
    return payload


def create_app(gallery: Gallery | None = None) -> FastAPI:
    app = FastAPI(title="hapticslider sandbox service", version=ENGINE_VERSION)
    app.state.gallery = gallery if gallery is not None else Gallery()

    def get_project(project_id: str) -> Project:
        try:
            return app.state.gallery.get(project_id)
        except KeyError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    def fresh_curve(project: Project, step: float) -> FDCurve:
        if (
            project.cached_curve is not None
            and not project.curve_stale
            and abs(project.cached_curve.step - step) < 1e-12
        ):
            return project.cached_curve
        try:
            curve = estimate_curve(project.mechanism, step=step)
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        project.set_curve(curve)
        return curve

    @app.get("/health")
    def health():
        return _stamp({"status": "ok"})

    @app.get("/projects")
    def list_projects():
        return _stamp(
            {
                "projects": [
                    {
                        "id": p.id,
                        "name": p.name,
                        "edit_mode": p.edit_mode,
                        "curve_stale": p.curve_stale,
                        "modified": p.modified,
                    }
                    for p in app.state.gallery.list()
                ]
            }
        )

    @app.post("/projects", status_code=201)
    def create_project(body: ProjectCreate):
        try:
            mech = mechanism_from_dict(body.mechanism)
            project = Project(name=body.name, mechanism=mech, edit_mode=body.edit_mode)
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        app.state.gallery.add(project)
        return _stamp({"project": project_to_dict(project)})

    @app.get("/projects/{project_id}")
    def get_project_route(project_id: str):
        return _stamp({"project": project_to_dict(get_project(project_id))})

    @app.delete("/projects/{project_id}", status_code=204)
    def delete_project(project_id: str):
        get_project(project_id)
        app.state.gallery.remove(project_id)
        return Response(status_code=204)

    @app.post("/projects/{project_id}/duplicate", status_code=201)
    def duplicate(project_id: str):
        get_project(project_id)
        dup = app.state.gallery.duplicate(project_id)
        return _stamp({"project": project_to_dict(dup)})

    @app.put("/projects/{project_id}/profile")
    def put_profile(project_id: str, body: ProfilePut):
        project = get_project(project_id)
        mech = project.mechanism
        if not 0 <= body.side_index < len(mech.sides):
            raise HTTPException(status_code=422, detail="side_index out of range")
        try:
            profile = profile_from_dict(body.profile, "profile")
            sides = list(mech.sides)
            old = sides[body.side_index]
            sides[body.side_index] = type(old)(
                profile=profile, spring=old.spring, mount=old.mount
            )
            new_mech = Mechanism(
                sides=tuple(sides),
                base_spring=mech.base_spring,
                travel=mech.travel,
                friction_mu=mech.friction_mu,
                contact_tolerance=mech.contact_tolerance,
            )
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        project.replace_mechanism(new_mech)
        return _stamp({"project": project_to_dict(project)})

    @app.patch("/projects/{project_id}/parameters")
    def patch_parameters(project_id: str, body: ParameterPatch):
        project = get_project(project_id)
        mech = project.mechanism
        try:
            from .store import base_spring_from_dict

            base = mech.base_spring
            if body.clear_base_spring:
                base = None
            elif body.base_spring is not None:
                base = base_spring_from_dict(body.base_spring, "base_spring")
            new_mech = Mechanism(
                sides=mech.sides,
                base_spring=base,
                travel=body.travel if body.travel is not None else mech.travel,
                friction_mu=(
                    body.friction_mu if body.friction_mu is not None else mech.friction_mu
                ),
                contact_tolerance=mech.contact_tolerance,
            )
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        project.replace_mechanism(new_mech)
        return _stamp({"project": project_to_dict(project)})

    @app.get("/projects/{project_id}/fd")
    async def stream_fd(project_id: str, request: Request, step: float = DEFAULT_STEP_MM):
        project = get_project(project_id)
        if step <= 0:
            raise HTTPException(status_code=400, detail="step must be positive")
        mechanism = project.mechanism

        async def gen():
            samples = []
            try:
                for sample in iter_samples(mechanism, step):
                    if await request.is_disconnected():
                        return  # client cancelled: stop computing
                    samples.append(sample)
                    yield json.dumps(
                        {
                            "displacement_mm": sample.displacement_s,
                            "force_forward_N": sample.force_forward,
                            "force_reverse_N": sample.force_reverse,
                        }
                    ) + "\n"
                    await asyncio.sleep(0)
                curve = FDCurve(samples=tuple(samples), step=step)
                warnings = detect_warnings(curve)
                project.set_curve(
                    FDCurve(samples=tuple(samples), step=step, warnings=tuple(warnings))
                )
                yield json.dumps(
                    _stamp(
                        {
                            "done": True,
                            "warnings": [
                                {"kind": w.kind, "range": list(w.displacement_range)}
                                for w in warnings
                            ],
                        }
                    )
                ) + "\n"
            except _ENGINE_ERRORS as exc:
                yield json.dumps({"error": str(exc)}) + "\n"

        return StreamingResponse(gen(), media_type="application/x-ndjson")

    @app.get("/projects/{project_id}/fd.csv")
    def fd_csv(project_id: str, step: float = DEFAULT_STEP_MM):
        project = get_project(project_id)
        curve = fresh_curve(project, step)
        return PlainTextResponse(curve_to_csv(curve), media_type="text/csv")

    @app.get("/projects/{project_id}/fd/at")
    def fd_at(project_id: str, s: float):
        """Single-displacement solve: powers the UI range slider (mechanism
        preview pose plus the highlighted curve point)."""
        project = get_project(project_id)
        try:
            rs = sample_reaction(project.mechanism, s)
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        sides = []
        for r in rs.side_reactions:
            c = r.contact
            sides.append(
                {
                    "state": c.state,
                    "deflection_angle_rad": c.deflection_angle,
                    "tip_deflection_mm": c.tip_deflection_d,
                    "contact_point": None
                    if c.contact_point is None
                    else [c.contact_point.x, c.contact_point.y],
                    "force_forward_N": r.force_forward,
                    "force_reverse_N": r.force_reverse,
                }
            )
        return _stamp(
            {
                "displacement_mm": rs.displacement_s,
                "force_forward_N": rs.force_forward,
                "force_reverse_N": rs.force_reverse,
                "base_force_N": rs.base_force,
                "sides": sides,
            }
        )

    @app.get("/projects/{project_id}/export.svg")
    def export_svg(project_id: str):
        project = get_project(project_id)
        try:
            drawing = layout_swatch(project.mechanism, name=project.name)
            svg = export_fabrication_svg(drawing)
        except _ENGINE_ERRORS as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return Response(content=svg, media_type="image/svg+xml")

    @app.post("/calibrate")
    def calibrate(body: CalibrateRequest):
        try:
            simulated = parse_measurement_csv(body.simulated_csv, "simulated")
            measured = parse_measurement_csv(body.measured_csv, "measured")
            alpha = fit_scale_factor(simulated, measured)
        except CalibrationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        return _stamp({"scale_factor": alpha})

    @app.get("/gallery/archive")
    def get_archive():
        return PlainTextResponse(
            save_archive(app.state.gallery), media_type="application/json"
        )

    @app.post("/gallery/archive")
    def post_archive(request_body: dict):
        try:
            gallery = load_archive(json.dumps(request_body))
        except ArchiveSchemaError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        app.state.gallery = gallery
        return _stamp({"loaded": len(gallery)})

    return app
