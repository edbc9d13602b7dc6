"""Project and gallery persistence.

A gallery holds named mechanism designs (projects) with cached FD curves.
Archives are versioned JSON documents; cached curves are stored but marked
advisory -- loading always flags them stale so the first view recomputes
against the current coefficient table.
"""

from __future__ import annotations

import copy
import json
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .geometry import Point2, Polyline, Profile
from .springs import ArmMount, BaseSpringSpec, SideSpringSpec
from .estimator import FDCurve, FDSample, FDWarning, Mechanism, SideAssembly

ARCHIVE_VERSION = 1
SUPPORTED_VERSIONS = (1,)
EDIT_MODES = ("create", "import", "symmetric")


class ArchiveSchemaError(ValueError):
    """Malformed archive; the message carries the path to the offending field."""


def _now() -> str:
    return datetime.now(timezone.utc).isoformat()


# ---------------------------------------------------------------------------
# (de)serialization helpers


def profile_to_dict(p: Profile) -> dict:
    return {
        "side": p.side,
        "material_side": p.material_side,
        "contour": [[pt.x, pt.y] for pt in p.contour.points],
    }


def profile_from_dict(d: dict, path: str) -> Profile:
    try:
        return Profile(
            Polyline([Point2(x, y) for x, y in d["contour"]]),
            side=d["side"],
            material_side=int(d["material_side"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc


def side_spring_to_dict(s: SideSpringSpec) -> dict:
    return {
        "family": s.family,
        "ring_thickness": s.ring_thickness,
        "arm_length": s.arm_length,
        "ring_outer_radius": s.ring_outer_radius,
        "max_deflection": s.max_deflection,
        "coefficient_k": s.coefficient_k,
        "tip_radius": s.tip_radius,
    }


def side_spring_from_dict(d: dict, path: str) -> SideSpringSpec:
    try:
        return SideSpringSpec(**d)
    except (TypeError, ValueError) as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc


def base_spring_to_dict(b: BaseSpringSpec | None) -> dict | None:
    if b is None:
        return None
    return {
        "width": b.width,
        "arm_thickness": b.arm_thickness,
        "beam_length": b.beam_length,
        "coefficient_kB": b.coefficient_kB,
        "beam_gap": b.beam_gap,
        "beam_count": b.beam_count,
    }


def base_spring_from_dict(d: dict | None, path: str) -> BaseSpringSpec | None:
    if d is None:
        return None
    try:
        return BaseSpringSpec(**d)
    except (TypeError, ValueError) as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc


def mechanism_to_dict(m: Mechanism) -> dict:
    sides = []
    for a in m.sides:
        mount = a.mount
        sides.append(
            {
                "profile": profile_to_dict(a.profile),
                "spring": side_spring_to_dict(a.spring),
                "mount": None if mount is None else {
                    "rest_tip": [mount.rest_tip.x, mount.rest_tip.y],
                    "side": mount.side,
                },
            }
        )
    return {
        "sides": sides,
        "base_spring": base_spring_to_dict(m.base_spring),
        "travel": m.travel,
        "friction_mu": m.friction_mu,
        "contact_tolerance": m.contact_tolerance,
    }


def mechanism_from_dict(d: dict, path: str = "mechanism") -> Mechanism:
    if not isinstance(d, dict):
        raise ArchiveSchemaError(f"{path}: expected an object")
    try:
        sides = []
        for i, sd in enumerate(d["sides"]):
            mount = sd.get("mount")
            sides.append(
                SideAssembly(
                    profile=profile_from_dict(sd["profile"], f"{path}.sides[{i}].profile"),
                    spring=side_spring_from_dict(sd["spring"], f"{path}.sides[{i}].spring"),
                    mount=None if mount is None else ArmMount(
                        rest_tip=Point2(*mount["rest_tip"]), side=mount["side"]
                    ),
                )
            )
        return Mechanism(
            sides=tuple(sides),
            base_spring=base_spring_from_dict(d.get("base_spring"), f"{path}.base_spring"),
            travel=float(d["travel"]),
            friction_mu=float(d.get("friction_mu", 0.21)),
            contact_tolerance=float(d.get("contact_tolerance", 0.005)),
        )
    except ArchiveSchemaError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc


def curve_to_dict(c: FDCurve | None) -> dict | None:
    if c is None:
        return None
    return {
        "step": c.step,
        "samples": [
            [s.displacement_s, s.force_forward, s.force_reverse,
             int(s.over_deflection), int(s.no_contact)]
            for s in c.samples
        ],
        "warnings": [
            {"kind": w.kind, "range": list(w.displacement_range)} for w in c.warnings
        ],
        "advisories": list(c.advisories),
    }


def curve_from_dict(d: dict | None, path: str) -> FDCurve | None:
    if d is None:
        return None
    try:
        return FDCurve(
            samples=tuple(
                FDSample(s[0], s[1], s[2], bool(s[3]), bool(s[4])) for s in d["samples"]
            ),
            step=float(d["step"]),
            warnings=tuple(
                FDWarning(w["kind"], (w["range"][0], w["range"][1]))
                for w in d.get("warnings", [])
            ),
            advisories=tuple(d.get("advisories", [])),
        )
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise ArchiveSchemaError(f"{path}: {exc}") from exc


# ---------------------------------------------------------------------------
# projects and gallery


@dataclass
class Project:
    name: str
    mechanism: Mechanism
    edit_mode: str = "create"
    id: str = field(default_factory=lambda: uuid.uuid4().hex)
    cached_curve: FDCurve | None = None
    curve_stale: bool = True
    created: str = field(default_factory=_now)
    modified: str = field(default_factory=_now)

    def __post_init__(self):
        if self.edit_mode not in EDIT_MODES:
            raise ValueError(f"edit_mode must be one of {EDIT_MODES}")

    def replace_mechanism(self, mechanism: Mechanism) -> None:
        # staleness flips before the mutation becomes observable
        self.curve_stale = True
        self.mechanism = mechanism
        self.modified = _now()

    def set_curve(self, curve: FDCurve) -> None:
        self.cached_curve = curve
        self.curve_stale = False


class Gallery:
    def __init__(self):
        self._projects: dict[str, Project] = {}

    def add(self, project: Project) -> Project:
        if project.id in self._projects:
            raise KeyError(f"duplicate project id {project.id}")
        self._projects[project.id] = project
        return project

    def get(self, project_id: str) -> Project:
        try:
            return self._projects[project_id]
        except KeyError:
            raise KeyError(f"unknown project id {project_id!r}") from None

    def remove(self, project_id: str) -> None:
        self.get(project_id)
        del self._projects[project_id]

    def list(self) -> list[Project]:
        return list(self._projects.values())

    def __len__(self) -> int:
        return len(self._projects)

    def duplicate(self, project_id: str) -> Project:
        """Deep copy with a fresh id; edits to either copy stay independent."""
        src = self.get(project_id)
        dup = Project(
            name=f"{src.name} copy",
            mechanism=copy.deepcopy(src.mechanism),
            edit_mode=src.edit_mode,
            cached_curve=copy.deepcopy(src.cached_curve),
            curve_stale=src.curve_stale,
        )
        return self.add(dup)


def duplicate_project(gallery: Gallery, project_id: str) -> Project:
    return gallery.duplicate(project_id)


def project_to_dict(p: Project) -> dict:
    return {
        "id": p.id,
        "name": p.name,
        "edit_mode": p.edit_mode,
        "created": p.created,
        "modified": p.modified,
        "mechanism": mechanism_to_dict(p.mechanism),
        "cached_curve": curve_to_dict(p.cached_curve),
        "curve_stale": p.curve_stale,
    }


def project_from_dict(d: dict, path: str) -> Project:
    if not isinstance(d, dict):
        raise ArchiveSchemaError(f"{path}: expected an object")
    for key in ("id", "name", "edit_mode", "mechanism"):
        if key not in d:
            raise ArchiveSchemaError(f"{path}.{key}: missing required field")
    project = Project(
        name=d["name"],
        mechanism=mechanism_from_dict(d["mechanism"], f"{path}.mechanism"),
        edit_mode=d["edit_mode"],
        id=d["id"],
        cached_curve=curve_from_dict(d.get("cached_curve"), f"{path}.cached_curve"),
        # cached curves are advisory: always recompute on first view
        curve_stale=True,
        created=d.get("created", _now()),
        modified=d.get("modified", _now()),
    )
    return project


def save_archive(gallery: Gallery) -> str:
    doc = {
        "version": ARCHIVE_VERSION,
        "projects": [project_to_dict(p) for p in gallery.list()],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def load_archive(text: str) -> Gallery:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ArchiveSchemaError(f"archive is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ArchiveSchemaError("archive root: expected an object")
    version = doc.get("version")
    if version not in SUPPORTED_VERSIONS:
        raise ArchiveSchemaError(
            f"version: unrecognized archive version {version!r} "
            f"(supported: {SUPPORTED_VERSIONS})"
        )
    projects = doc.get("projects")
    if not isinstance(projects, list):
        raise ArchiveSchemaError("projects: expected a list")
    gallery = Gallery()
    for i, pd in enumerate(projects):
        project = project_from_dict(pd, f"projects[{i}]")
        try:
            gallery.add(project)
        except KeyError as exc:
            raise ArchiveSchemaError(f"projects[{i}].id: {exc}") from exc
    return gallery


def save_archive_file(gallery: Gallery, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(save_archive(gallery))


def load_archive_file(path: str) -> Gallery:
    with open(path, "r", encoding="utf-8") as fh:
        return load_archive(fh.read())
