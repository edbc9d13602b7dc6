"""SVG profile import and laser-drawing export.

Supported subset: ``path`` elements with M/L/H/V/C/S/Q/T/A commands (absolute
or relative), one profile per open path.  Curved commands are flattened to
polylines with a maximum chord deviation of 0.02 mm -- an order of magnitude
below the laser kerf, so flattening never dominates fabrication error.

Documents without explicit physical units are interpreted at 96 px/inch and
converted to millimetres; pass ``ImportOptions(scale=...)`` to override.
"""

from __future__ import annotations

import math
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field

from .geometry import Point2, Polyline, Profile, GeometryError

FLATTEN_TOLERANCE_MM = 0.02
PX_PER_INCH = 96.0
MM_PER_INCH = 25.4


class SvgImportError(ValueError):
    """Problem turning an SVG document into usable geometry."""


class NoOpenPathError(SvgImportError):
    pass


class NonMonotonicProfileError(SvgImportError):
    pass


class ShortProfileError(SvgImportError):
    pass


@dataclass(frozen=True)
class ImportOptions:
    side: str = "right"
    material_side: int = -1
    # mm per SVG user unit; None = derive from the document (96 px/in default)
    scale: float | None = None
    # when set, the contour's travel span must cover at least this many mm
    min_travel_span: float | None = None
    flatten_tolerance: float = FLATTEN_TOLERANCE_MM


@dataclass(frozen=True)
class DrawingMetadata:
    title: str = "hapticslider drawing"
    comments: tuple[str, ...] = ()


# ---------------------------------------------------------------------------
# path data parsing

_TOKEN_RE = re.compile(r"[MmLlHhVvCcSsQqTtAaZz]|[-+]?(?:\d*\.\d+|\d+\.?)(?:[eE][-+]?\d+)?")


def _tokenize_path(d: str) -> list[str]:
    return _TOKEN_RE.findall(d)


def _flatten_cubic(p0, p1, p2, p3, tol, out, depth=0):
    # flat when both control points are within tol of the chord
    def dist_to_chord(p):
        ax, ay = p0
        bx, by = p3
        dx, dy = bx - ax, by - ay
        L = math.hypot(dx, dy)
        if L < 1e-12:
            return math.hypot(p[0] - ax, p[1] - ay)
        return abs((p[0] - ax) * dy - (p[1] - ay) * dx) / L

    if depth > 32 or (dist_to_chord(p1) <= tol and dist_to_chord(p2) <= tol):
        out.append(p3)
        return
    mid = lambda a, b: ((a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0)
    p01, p12, p23 = mid(p0, p1), mid(p1, p2), mid(p2, p3)
    p012, p123 = mid(p01, p12), mid(p12, p23)
    pm = mid(p012, p123)
    _flatten_cubic(p0, p01, p012, pm, tol, out, depth + 1)
    _flatten_cubic(pm, p123, p23, p3, tol, out, depth + 1)


def _flatten_arc(p0, rx, ry, phi_deg, large_arc, sweep, p1, tol, out):
    """Endpoint-parameterized elliptical arc, flattened by angle stepping."""
    x1, y1 = p0
    x2, y2 = p1
    if math.hypot(x2 - x1, y2 - y1) < 1e-12:
        return
    rx, ry = abs(rx), abs(ry)
    if rx < 1e-12 or ry < 1e-12:
        out.append(p1)
        return
    phi = math.radians(phi_deg % 360.0)
    cosp, sinp = math.cos(phi), math.sin(phi)
    # to center parameterization (SVG spec appendix B.2.4)
    dx, dy = (x1 - x2) / 2.0, (y1 - y2) / 2.0
    x1p = cosp * dx + sinp * dy
    y1p = -sinp * dx + cosp * dy
    lam = (x1p / rx) ** 2 + (y1p / ry) ** 2
    if lam > 1.0:
        s = math.sqrt(lam)
        rx *= s
        ry *= s
    num = rx * rx * ry * ry - rx * rx * y1p * y1p - ry * ry * x1p * x1p
    den = rx * rx * y1p * y1p + ry * ry * x1p * x1p
    coef = math.sqrt(max(0.0, num / den)) if den > 0 else 0.0
    if large_arc == sweep:
        coef = -coef
    cxp = coef * rx * y1p / ry
    cyp = -coef * ry * x1p / rx
    cx = cosp * cxp - sinp * cyp + (x1 + x2) / 2.0
    cy = sinp * cxp + cosp * cyp + (y1 + y2) / 2.0

    def angle(ux, uy, vx, vy):
        d = math.hypot(ux, uy) * math.hypot(vx, vy)
        c = max(-1.0, min(1.0, (ux * vx + uy * vy) / d))
        a = math.acos(c)
        if ux * vy - uy * vx < 0:
            a = -a
        return a

    th1 = angle(1.0, 0.0, (x1p - cxp) / rx, (y1p - cyp) / ry)
    dth = angle((x1p - cxp) / rx, (y1p - cyp) / ry, (-x1p - cxp) / rx, (-y1p - cyp) / ry)
    if not sweep and dth > 0:
        dth -= 2 * math.pi
    elif sweep and dth < 0:
        dth += 2 * math.pi
    r = max(rx, ry)
    step = 2.0 * math.acos(max(-1.0, min(1.0, 1.0 - tol / r))) if r > tol else math.pi / 4
    n = max(2, int(math.ceil(abs(dth) / max(step, 1e-3))))
    for k in range(1, n + 1):
        th = th1 + dth * k / n
        ex = cx + rx * math.cos(th) * cosp - ry * math.sin(th) * sinp
        ey = cy + rx * math.cos(th) * sinp + ry * math.sin(th) * cosp
        out.append((ex, ey))
    out[-1] = p1


def parse_path_data(d: str, tol: float = FLATTEN_TOLERANCE_MM):
    """Flatten an SVG path ``d`` string into subpaths.

    Returns a list of (points, closed) with points as (x, y) tuples in SVG
    user units.
    """
    tokens = _tokenize_path(d)
    subpaths: list[tuple[list[tuple[float, float]], bool]] = []
    pts: list[tuple[float, float]] = []
    cur = (0.0, 0.0)
    start = (0.0, 0.0)
    prev_cubic_ctrl = None
    prev_quad_ctrl = None
    cmd = None
    i = 0

    def take(n):
        nonlocal i
        vals = [float(tokens[i + k]) for k in range(n)]
        i += n
        return vals

    def finish(closed):
        nonlocal pts
        if len(pts) >= 2:
            subpaths.append((pts, closed))
        pts = []

    while i < len(tokens):
        tok = tokens[i]
        if tok.isalpha():
            cmd = tok
            i += 1
            if cmd in "Zz":
                finish(True)
                cur = start
                prev_cubic_ctrl = prev_quad_ctrl = None
                continue
        elif cmd is None:
            raise SvgImportError(f"path data does not start with a command: {d[:30]!r}")
        rel = cmd.islower()
        c = cmd.upper()
        if c == "M":
            x, y = take(2)
            if rel:
                x, y = cur[0] + x, cur[1] + y
            finish(False)
            cur = start = (x, y)
            pts = [cur]
            cmd = "l" if rel else "L"  # implicit lineto after moveto
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c == "L":
            x, y = take(2)
            if rel:
                x, y = cur[0] + x, cur[1] + y
            cur = (x, y)
            pts.append(cur)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c == "H":
            (x,) = take(1)
            cur = (cur[0] + x if rel else x, cur[1])
            pts.append(cur)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c == "V":
            (y,) = take(1)
            cur = (cur[0], cur[1] + y if rel else y)
            pts.append(cur)
            prev_cubic_ctrl = prev_quad_ctrl = None
        elif c in ("C", "S"):
            if c == "C":
                x1, y1, x2, y2, x, y = take(6)
            else:
                x2, y2, x, y = take(4)
                if prev_cubic_ctrl is not None:
                    x1, y1 = 2 * cur[0] - prev_cubic_ctrl[0], 2 * cur[1] - prev_cubic_ctrl[1]
                else:
                    x1, y1 = cur
                if rel:
                    x1, y1 = x1 - cur[0], y1 - cur[1]
            if rel:
                x1, y1 = cur[0] + x1, cur[1] + y1
                x2, y2 = cur[0] + x2, cur[1] + y2
                x, y = cur[0] + x, cur[1] + y
            _flatten_cubic(cur, (x1, y1), (x2, y2), (x, y), tol, pts)
            prev_cubic_ctrl = (x2, y2)
            prev_quad_ctrl = None
            cur = (x, y)
        elif c in ("Q", "T"):
            if c == "Q":
                qx, qy, x, y = take(4)
                if rel:
                    qx, qy = cur[0] + qx, cur[1] + qy
                    x, y = cur[0] + x, cur[1] + y
            else:
                x, y = take(2)
                if rel:
                    x, y = cur[0] + x, cur[1] + y
                if prev_quad_ctrl is not None:
                    qx, qy = 2 * cur[0] - prev_quad_ctrl[0], 2 * cur[1] - prev_quad_ctrl[1]
                else:
                    qx, qy = cur
            # elevate quadratic to cubic
            c1 = (cur[0] + 2.0 / 3.0 * (qx - cur[0]), cur[1] + 2.0 / 3.0 * (qy - cur[1]))
            c2 = (x + 2.0 / 3.0 * (qx - x), y + 2.0 / 3.0 * (qy - y))
            _flatten_cubic(cur, c1, c2, (x, y), tol, pts)
            prev_quad_ctrl = (qx, qy)
            prev_cubic_ctrl = None
            cur = (x, y)
        elif c == "A":
            rx, ry, rot, laf, swf, x, y = take(7)
            if rel:
                x, y = cur[0] + x, cur[1] + y
            _flatten_arc(cur, rx, ry, rot, bool(int(laf)), bool(int(swf)), (x, y), tol, pts)
            prev_cubic_ctrl = prev_quad_ctrl = None
            cur = (x, y)
        else:
            raise SvgImportError(f"unsupported path command {cmd!r}")
    finish(False)
    return subpaths


# ---------------------------------------------------------------------------
# document handling

_LENGTH_RE = re.compile(r"^\s*([-+]?[0-9.eE+]+)\s*([a-z%]*)\s*$")

_UNIT_TO_MM = {
    "mm": 1.0,
    "cm": 10.0,
    "in": MM_PER_INCH,
    "px": MM_PER_INCH / PX_PER_INCH,
    "": None,  # unitless: resolved by the caller
    "pt": MM_PER_INCH / 72.0,
}


def _parse_length(text: str):
    m = _LENGTH_RE.match(text)
    if not m:
        raise SvgImportError(f"cannot parse SVG length {text!r}")
    return float(m.group(1)), m.group(2)


def _document_scale(root) -> float:
    """mm per SVG user unit."""
    width = root.get("width")
    viewbox = root.get("viewBox")
    if width is not None and viewbox is not None:
        value, unit = _parse_length(width)
        to_mm = _UNIT_TO_MM.get(unit)
        vb = [float(v) for v in viewbox.replace(",", " ").split()]
        if len(vb) == 4 and vb[2] > 0 and to_mm is not None:
            return value * to_mm / vb[2]
    # no explicit physical units: common authoring-tool default of 96 px/inch
    return MM_PER_INCH / PX_PER_INCH


def _iter_paths(root):
    for el in root.iter():
        if el.tag.split("}")[-1] == "path":
            d = el.get("d")
            if d:
                yield d


def import_polylines_svg(document: str, scale: float | None = None,
                         tolerance: float = FLATTEN_TOLERANCE_MM) -> list[Polyline]:
    """Import every path subpath in the document as a Polyline (in mm)."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise SvgImportError(f"not a valid SVG document: {exc}") from exc
    k = scale if scale is not None else _document_scale(root)
    out = []
    for d in _iter_paths(root):
        for pts, closed in parse_path_data(d, tol=tolerance / k):
            scaled = [(x * k, y * k) for x, y in pts]
            deduped = [scaled[0]]
            for p in scaled[1:]:
                if math.hypot(p[0] - deduped[-1][0], p[1] - deduped[-1][1]) > 1e-9:
                    deduped.append(p)
            if len(deduped) >= 2:
                out.append(Polyline(deduped, closed=closed))
    return out


def import_profile_svg(document: str, options: ImportOptions = ImportOptions()) -> Profile:
    """Import the first open path of an SVG document as a slider Profile."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise SvgImportError(f"not a valid SVG document: {exc}") from exc
    k = options.scale if options.scale is not None else _document_scale(root)
    open_polys = []
    for d in _iter_paths(root):
        for pts, closed in parse_path_data(d, tol=options.flatten_tolerance / k):
            if not closed:
                open_polys.append(pts)
    if not open_polys:
        raise NoOpenPathError("document contains no open path to use as a profile")
    raw = open_polys[0]
    pts = [(x * k, y * k) for x, y in raw]
    deduped = [pts[0]]
    for p in pts[1:]:
        if math.hypot(p[0] - deduped[-1][0], p[1] - deduped[-1][1]) > 1e-9:
            deduped.append(p)
    if len(deduped) < 2:
        raise SvgImportError("profile path is degenerate after flattening")
    ys = [p[1] for p in deduped]
    increasing = all(b - a > 1e-9 for a, b in zip(ys, ys[1:]))
    decreasing = all(a - b > 1e-9 for a, b in zip(ys, ys[1:]))
    if decreasing:
        deduped.reverse()
    elif not increasing:
        raise NonMonotonicProfileError(
            "profile path is not monotonic in the travel axis (overhangs rejected)"
        )
    span = deduped[-1][1] - deduped[0][1]
    if options.min_travel_span is not None and span < options.min_travel_span - 1e-9:
        raise ShortProfileError(
            f"profile spans {span:.3f} mm but the travel zone needs "
            f"{options.min_travel_span:.3f} mm"
        )
    try:
        contour = Polyline(deduped)
        return Profile(contour, side=options.side, material_side=options.material_side)
    except GeometryError as exc:
        raise SvgImportError(str(exc)) from exc


def _format_coord(v: float) -> str:
    return f"{v:.9f}"


def polyline_path_data(poly: Polyline) -> str:
    parts = [f"M {_format_coord(poly.points[0].x)} {_format_coord(poly.points[0].y)}"]
    for p in poly.points[1:]:
        parts.append(f"L {_format_coord(p.x)} {_format_coord(p.y)}")
    if poly.closed:
        parts.append("Z")
    return " ".join(parts)


def export_polyline_svg(shapes: list[Polyline], metadata: DrawingMetadata = DrawingMetadata(),
                        groups: dict[str, list[Polyline]] | None = None) -> str:
    """Serialize polylines (mm coordinates) as a stroke-only SVG document.

    ``groups`` optionally maps layer names to additional polylines; they are
    emitted as named <g> elements after the top-level shapes.
    """
    all_shapes = list(shapes)
    if groups:
        for layer in groups.values():
            all_shapes.extend(layer)
    if not all_shapes:
        raise ValueError("nothing to export: shape list is empty")
    minx = min(b for s in all_shapes for b in (s.bounds()[0],))
    miny = min(s.bounds()[1] for s in all_shapes)
    maxx = max(s.bounds()[2] for s in all_shapes)
    maxy = max(s.bounds()[3] for s in all_shapes)
    margin = 1.0
    minx -= margin
    miny -= margin
    w = (maxx - minx) + margin
    h = (maxy - miny) + margin
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_format_coord(w)}mm" '
        f'height="{_format_coord(h)}mm" '
        f'viewBox="{_format_coord(minx)} {_format_coord(miny)} '
        f'{_format_coord(w)} {_format_coord(h)}">',
        f"  <title>{metadata.title}</title>",
    ]
    for comment in metadata.comments:
        lines.append(f"  <!-- {comment} -->")
    style = 'fill="none" stroke="#000000" stroke-width="0.1"'
    for poly in shapes:
        lines.append(f'  <path d="{polyline_path_data(poly)}" {style}/>')
    if groups:
        for name, layer in groups.items():
            lines.append(f'  <g id="{name}">')
            for poly in layer:
                lines.append(f'    <path d="{polyline_path_data(poly)}" {style}/>')
            lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
