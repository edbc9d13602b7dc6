"""hapticslider: design, simulate, and fabricate planar passive
force-feedback slider mechanisms (compliant side springs riding on shaped
slider profiles)."""

from .geometry import (
    ClosestPointResult,
    GeometryError,
    Point2,
    Polyline,
    Profile,
    closest_point,
    penetrates,
    profile_closest_point,
    translate,
)
from .svg_io import (
    DrawingMetadata,
    ImportOptions,
    SvgImportError,
    export_polyline_svg,
    import_polylines_svg,
    import_profile_svg,
)
from .springs import (
    ArmModel,
    ArmMount,
    BaseSpringSpec,
    CoefficientTable,
    FeasibilityError,
    SideSpringSpec,
    SpringRangeError,
    abstract_arm,
    base_spring_coefficient,
    default_table,
    generate_base_spring_outline,
    generate_side_spring_outline,
    load_coefficient_table,
    side_spring_coefficient,
)
from .contact import ContactQuery, ContactResult, ContactSolverError, solve_contact
from .estimator import (
    FDCurve,
    FDSample,
    FDWarning,
    Mechanism,
    SideAssembly,
    curve_to_csv,
    detect_warnings,
    estimate_curve,
    iter_samples,
    overlay,
    reaction_at,
    resolve_reaction,
    sample_reaction,
)
from .calibration import (
    FitResult,
    MeasurementSeries,
    fit_scale_factor,
    fit_zero_intercept,
    ingest_measurement_csv,
    parse_measurement_csv,
    score_curve,
)
from .fabrication import (
    FeasibilityRule,
    SwatchDrawing,
    Violation,
    check_feasibility,
    export_fabrication_svg,
    layout_swatch,
)
from .store import (
    Gallery,
    Project,
    duplicate_project,
    load_archive,
    save_archive,
)

__version__ = "0.1.0"
